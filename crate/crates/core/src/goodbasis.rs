//! Good bases for open subgroups of a uniform group: construction,
//! verification, membership, the index formula and enumeration of open
//! subgroups of bounded index.
//!
//! An open subgroup at precision `k` is the preimage of a subgroup of
//! `G/G_{k+1}`. When it does not contain `G_k`, some basis elements sit in
//! level `k + 1`, which is trivial in that quotient; such bases are built in
//! the same group at precision `k + 1`.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fingroup::{Elem, FiniteGroup, GroupError, Subgroup};
use crate::linalg::{all_vectors, in_span, rref, solve, subspaces_of};
use crate::padic::{valuation_u64, PadicError};
use crate::uniform::{CoordinateVector, GElement, UniformError, UniformGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoodBasisError {
    #[error("generated subgroup does not contain G_{k}, so it is not certified open at precision {k}")]
    NotOpen { k: u32 },
    #[error("index bound p^{m} exceeds working precision {k}")]
    PrecisionExceeded { m: u32, k: u32 },
    #[error("index bound must be positive")]
    BadIndex,
    #[error(transparent)]
    Uniform(#[from] UniformError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Sweeps larger than this many λ values are sampled instead.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
const SAMPLES: usize = 100_000;

#[derive(Debug, Clone)]
pub struct GoodBasis {
    group: UniformGroup,
    elements: Vec<GElement>,
    omegas: Vec<u32>,
}

impl GoodBasis {
    /// The group the basis elements live in.
    pub fn group(&self) -> &UniformGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GElement] {
        &self.elements
    }

    pub fn omegas(&self) -> &[u32] {
        &self.omegas
    }

    /// `p^{Σ(ω(h_i) − 1)}`.
    pub fn index(&self) -> u64 {
        let e: u32 = self.omegas.iter().map(|w| w - 1).sum();
        self.group.p().pow(e)
    }

    /// `h(λ) = h_1^{λ_1} ⋯ h_d^{λ_d}`.
    pub fn product(&self, lambda: &[u64]) -> GElement {
        product(&self.group, &self.elements, lambda)
    }
}

impl Serialize for GoodBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            precision: u32,
            elements: &'a [GElement],
            omegas: &'a [u32],
            index: u64,
        }
        Repr { precision: self.group.precision(), elements: &self.elements, omegas: &self.omegas, index: self.index() }
            .serialize(s)
    }
}

fn product(g: &UniformGroup, hs: &[GElement], lambda: &[u64]) -> GElement {
    hs.iter().zip(lambda).fold(g.identity(), |acc, (h, &l)| g.mul(&acc, &g.pow(h, l)))
}

/// An open subgroup `H` with `G_{k+1} ≤ H`, stored as its image in
/// `G/G_{k+1}` together with its canonical good basis.
#[derive(Debug, Clone)]
pub struct OpenSubgroup {
    parent: UniformGroup,
    bits: FixedBitSet,
    basis: GoodBasis,
}

impl OpenSubgroup {
    pub fn parent(&self) -> &UniformGroup {
        &self.parent
    }

    pub fn basis(&self) -> &GoodBasis {
        &self.basis
    }

    pub fn index(&self) -> u64 {
        self.basis.index()
    }

    /// Image in the parent's finite quotient.
    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn as_subgroup(&self) -> Subgroup {
        Subgroup::from_elements(self.parent.finite_quotient(), self.bits.clone())
    }

    pub fn contains(&self, g: &GElement) -> bool {
        self.parent.index_in_quotient(g).is_some_and(|x| self.bits.contains(x as usize))
    }

    /// `H = ⟨gens⟩ G_{k+1}` for elements of the parent at its precision.
    pub fn from_generators(parent: &UniformGroup, gens: &[GElement]) -> Result<Self, GoodBasisError> {
        let q = parent.finite_quotient();
        let idx = gens
            .iter()
            .map(|g| {
                parent.validate(g)?;
                parent.index_in_quotient(g).ok_or(UniformError::BadElement)
            })
            .collect::<Result<Vec<Elem>, _>>()?;
        let h = q.generated(&idx);
        let data = QuotientData::new(parent);
        Ok(Self::from_bits(parent, &data, h.bits().clone()))
    }

    fn from_bits(parent: &UniformGroup, data: &QuotientData, bits: FixedBitSet) -> Self {
        let basis = basis_for(parent, data, &bits);
        OpenSubgroup { parent: parent.clone(), bits, basis }
    }
}

/// Coordinates and levels of every element of `G/G_{k+1}`.
struct QuotientData {
    q: FiniteGroup,
    p: u64,
    d: usize,
    k: u32,
    lambda: Vec<Vec<u64>>,
    omega: Vec<u32>,
    /// Elements in lexicographic order of their coordinates.
    by_lambda: Vec<Elem>,
}

impl QuotientData {
    fn new(g: &UniformGroup) -> Self {
        let q = g.finite_quotient().clone();
        let (p, k, d) = (g.p(), g.precision(), g.dim());
        let lambda: Vec<Vec<u64>> = q.elements().map(|x| g.lambda_residues(&g.element_at(x))).collect();
        let omega = q.elements().map(|x| g.omega(&g.element_at(x)).level()).collect();
        let mut by_lambda = vec![0 as Elem; q.order()];
        let pk = p.pow(k);
        for (x, l) in lambda.iter().enumerate() {
            by_lambda[lex_code(l, pk)] = x as Elem;
        }
        QuotientData { q, p, d, k, lambda, omega, by_lambda }
    }

    fn level_bits(&self, n: u32) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.q.order());
        for (x, &w) in self.omega.iter().enumerate() {
            if w >= n {
                b.insert(x);
            }
        }
        b
    }

    fn pi(&self, x: Elem, n: u32) -> Vec<u64> {
        let w = self.p.pow(n - 1);
        self.lambda[x as usize].iter().map(|&c| (c / w) % self.p).collect()
    }

    fn element_of(&self, lambda: &[u64]) -> Elem {
        self.by_lambda[lex_code(lambda, self.p.pow(self.k))]
    }
}

fn lex_code(l: &[u64], radix: u64) -> usize {
    l.iter().fold(0u64, |acc, &c| acc * radix + c) as usize
}

/// Canonical good basis of the open subgroup with image `bits`: ascend the
/// levels, extend the images of the earlier basis elements to a basis of
/// `π_n(H ∩ G_n)` by scanning `F_p^d` lexicographically, and realise each
/// new vector by the element of `H ∩ G_n` with lexicographically least
/// coordinates.
fn basis_for(g: &UniformGroup, data: &QuotientData, bits: &FixedBitSet) -> GoodBasis {
    let (p, d, k) = (data.p, data.d, data.k);
    let contains_gk = data.level_bits(k).is_subset(bits);
    let top = if contains_gk { k } else { k + 1 };
    let b = if contains_gk { g.clone() } else { g.with_precision(k + 1).expect("precision k + 1 fits") };
    let mut elements: Vec<GElement> = Vec::new();
    let mut omegas: Vec<u32> = Vec::new();
    for n in 1..=top {
        if elements.len() == d {
            break;
        }
        let mut chosen: Vec<Vec<u64>> = elements
            .iter()
            .zip(&omegas)
            .map(|(h, &w)| b.pi_n(&b.pow(h, p.pow(n - w)), n).expect("power lies in level n"))
            .collect();
        let v_n: Vec<Vec<u64>> = if n <= k {
            let rows: HashSet<Vec<u64>> =
                bits.ones().filter(|&x| data.omega[x] >= n).map(|x| data.pi(x as Elem, n)).collect();
            rref(&rows.into_iter().collect::<Vec<_>>(), p)
        } else {
            (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect()
        };
        debug_assert!(chosen.iter().all(|c| in_span(&v_n, c, p)));
        let dim = v_n.len();
        let mut fresh = Vec::new();
        for v in all_vectors(d, p) {
            if chosen.len() >= dim {
                break;
            }
            if v.iter().any(|&c| c != 0) && in_span(&v_n, &v, p) && !in_span(&chosen, &v, p) {
                chosen.push(v.clone());
                fresh.push(v);
            }
        }
        for v in fresh {
            let lambda = if n <= k {
                let x = data
                    .by_lambda
                    .iter()
                    .copied()
                    .find(|&x| bits.contains(x as usize) && data.omega[x as usize] >= n && data.pi(x, n) == v)
                    .expect("vector lies in π_n(H ∩ G_n)");
                data.lambda[x as usize].clone()
            } else {
                v.iter().map(|&c| c * p.pow(k)).collect()
            };
            elements.push(b.x_of_residues(&lambda));
            omegas.push(n);
        }
    }
    debug_assert_eq!(elements.len(), d);
    GoodBasis { group: b, elements, omegas }
}

/// A good basis of `⟨gens⟩`, which must contain `G_k` modulo `G_{k+1}`
/// (this certifies that the subgroup generated in `G` is open).
pub fn construct_good_basis(g: &UniformGroup, gens: &[GElement]) -> Result<GoodBasis, GoodBasisError> {
    let h = OpenSubgroup::from_generators(g, gens)?;
    if h.basis.group.precision() != g.precision() {
        return Err(GoodBasisError::NotOpen { k: g.precision() });
    }
    Ok(h.basis)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// ω nondecreasing along the tuple.
    A,
    /// No element is the identity.
    B,
    /// The product set is a subgroup.
    C,
    /// `ω(h(λ)) = min(ω(h_i) + ν(λ_i))`.
    D,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub failed: Option<Condition>,
    pub detail: Option<String>,
    /// The λ at which (c) or (d) failed.
    pub witness: Option<Vec<u64>>,
    /// λ ranges over `(Z/lambda_modulus)^d`.
    pub lambda_modulus: u64,
    pub exhaustive: bool,
    pub checked: u64,
}

/// Check conditions (a)–(d) at the group's working precision `K`: λ runs over
/// `(Z/p^K)^d`, exhaustively when that is at most [`EXHAUSTIVE_LIMIT`], else
/// over a seeded sample; ω values are compared truncated at `K + 1`.
pub fn verify_good_basis(g: &UniformGroup, tuple: &[GElement], seed: u64) -> Result<Verdict, GoodBasisError> {
    for h in tuple {
        g.validate(h)?;
    }
    let (p, k, d) = (g.p(), g.precision(), g.dim());
    let pk = p.pow(k);
    let total = (pk as u128).pow(d as u32);
    let exhaustive = total <= EXHAUSTIVE_LIMIT as u128;
    let mut verdict = Verdict {
        passed: false,
        failed: None,
        detail: None,
        witness: None,
        lambda_modulus: pk,
        exhaustive,
        checked: 0,
    };
    if tuple.len() != d {
        verdict.failed = Some(Condition::A);
        verdict.detail = Some(format!("tuple has length {}, expected {d}", tuple.len()));
        return Ok(verdict);
    }
    let omegas: Vec<u32> = tuple.iter().map(|h| g.omega(h).level()).collect();
    if let Some(i) = (1..d).find(|&i| omegas[i - 1] > omegas[i]) {
        verdict.failed = Some(Condition::A);
        verdict.detail = Some(format!("omega({}) = {} > omega({}) = {}", i, omegas[i - 1], i + 1, omegas[i]));
        return Ok(verdict);
    }
    if let Some(i) = tuple.iter().position(|h| *h == g.identity()) {
        verdict.failed = Some(Condition::B);
        verdict.detail = Some(format!("element {} is the identity", i + 1));
        return Ok(verdict);
    }
    let lambdas: Box<dyn Iterator<Item = Vec<u64>>> = if exhaustive {
        Box::new(all_vectors(d, pk))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Box::new((0..SAMPLES).map(move |_| (0..d).map(|_| rng.gen_range(0..pk)).collect()))
    };
    let nu = |l: u64| if l == 0 { k } else { valuation_u64(p, l) };
    let mut products: HashMap<GElement, Vec<u64>> = HashMap::new();
    for lambda in lambdas {
        verdict.checked += 1;
        let h = product(g, tuple, &lambda);
        let expected = omegas.iter().zip(&lambda).map(|(&w, &l)| w + nu(l)).min().unwrap().min(k + 1);
        let got = g.omega(&h).level();
        if got != expected {
            verdict.failed = Some(Condition::D);
            verdict.detail = Some(format!("omega(h(lambda)) = {got}, expected {expected}"));
            verdict.witness = Some(lambda);
            return Ok(verdict);
        }
        if exhaustive {
            products.entry(h).or_insert(lambda);
        } else {
            for hi in tuple {
                let y = g.mul(&h, hi);
                if decompose(g, tuple, &omegas, &y).is_none() {
                    verdict.failed = Some(Condition::C);
                    verdict.detail = Some("h(lambda) * h_i is not of the form h(mu)".into());
                    verdict.witness = Some(lambda);
                    return Ok(verdict);
                }
            }
        }
    }
    if exhaustive {
        // A finite set containing 1 and closed under right multiplication by
        // each h_i is the subgroup they generate.
        let mut keys: Vec<(&GElement, &Vec<u64>)> = products.iter().collect();
        keys.sort_by(|a, b| a.1.cmp(b.1));
        for (s, lambda) in keys {
            for hi in tuple {
                if !products.contains_key(&g.mul(s, hi)) {
                    verdict.failed = Some(Condition::C);
                    verdict.detail = Some("product set is not closed under multiplication".into());
                    verdict.witness = Some(lambda.clone());
                    return Ok(verdict);
                }
            }
        }
    }
    verdict.passed = true;
    Ok(verdict)
}

/// Digit extraction against a tuple: the `λ` with `h(λ) = y`, if the
/// extraction succeeds and round-trips.
fn decompose(g: &UniformGroup, hs: &[GElement], omegas: &[u32], y: &GElement) -> Option<Vec<u64>> {
    let (p, k) = (g.p(), g.precision());
    let pk = p.pow(k);
    let mut lambda = vec![0u64; hs.len()];
    for n in 1..=k {
        let r = g.mul(&g.inv(&product(g, hs, &lambda)), y);
        if g.omega(&r).level() < n {
            return None;
        }
        let active: Vec<usize> = (0..hs.len()).filter(|&j| omegas[j] <= n).collect();
        let cols: Vec<Vec<u64>> =
            active.iter().map(|&j| g.pi_n(&g.pow(&hs[j], p.pow(n - omegas[j])), n)).collect::<Result<_, _>>().ok()?;
        let target = g.pi_n(&r, n).ok()?;
        let c = solve(&cols, &target, p)?;
        for (&j, &cj) in active.iter().zip(&c) {
            lambda[j] = (lambda[j] + cj * p.pow(n - omegas[j])) % pk;
        }
    }
    (product(g, hs, &lambda) == *y).then_some(lambda)
}

/// The unique `λ` (mod `p^k`) with `g = h(λ)`, or `None` when `g ∉ H`.
pub fn membership(h: &OpenSubgroup, g: &GElement) -> Option<CoordinateVector> {
    if !h.contains(g) {
        return None;
    }
    let parent = &h.parent;
    let hs: Vec<GElement> = h.basis.elements.iter().map(|e| parent.truncate_from(&h.basis.group, e)).collect();
    let omegas: Vec<u32> = hs.iter().map(|e| parent.omega(e).level()).collect();
    let lambda = decompose(parent, &hs, &omegas, g);
    debug_assert!(lambda.is_some(), "member without coordinates");
    CoordinateVector::from_residues(parent.p(), parent.precision(), &lambda?).ok()
}

fn floor_log(n: u64, p: u64) -> u32 {
    let mut m = 0;
    let mut q = p;
    while q <= n {
        m += 1;
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    m
}

/// Every open subgroup of index at most `max_index`, sorted by index and
/// then by basis. Requires `max_index < p^{k+1}`.
///
/// Search runs top-down over the levels: a subgroup of index `p^m` contains
/// `G_{m+1}`, and `H ∩ G_n` is determined by `H ∩ G_{n+1}`, the subspace
/// `π_n(H ∩ G_n)`, and lifts of its basis vectors modulo `H ∩ G_{n+1}`.
pub fn enumerate_open(g: &UniformGroup, max_index: u64) -> Result<Vec<OpenSubgroup>, GoodBasisError> {
    if max_index == 0 {
        return Err(GoodBasisError::BadIndex);
    }
    let (p, d, k) = (g.p(), g.dim(), g.precision());
    let m = floor_log(max_index, p);
    if m > k {
        return Err(GoodBasisError::PrecisionExceeded { m, k });
    }
    let data = QuotientData::new(g);
    let q = &data.q;
    let levels: Vec<Subgroup> = (1..=m + 1).map(|n| Subgroup::from_elements(q, data.level_bits(n))).collect();
    let full: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect();
    let mut found = Vec::new();
    let search = Search { data: &data, levels: &levels, p, d, m, max_index };
    search.descend(m, &levels[m as usize], &full, 0, &mut found);
    let mut out: Vec<OpenSubgroup> = found.into_iter().map(|bits| OpenSubgroup::from_bits(g, &data, bits)).collect();
    out.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.basis.elements.cmp(&b.basis.elements)));
    Ok(out)
}

struct Search<'a> {
    data: &'a QuotientData,
    /// `levels[i]` is `G_{i+1}`.
    levels: &'a [Subgroup],
    p: u64,
    d: usize,
    m: u32,
    max_index: u64,
}

impl Search<'_> {
    /// Choose `H ∩ G_n` given `above = H ∩ G_{n+1}` with image `v_above`.
    fn descend(&self, n: u32, above: &Subgroup, v_above: &[Vec<u64>], spent: u32, out: &mut Vec<FixedBitSet>) {
        if n == 0 {
            out.push(above.bits().clone());
            return;
        }
        let q = &self.data.q;
        let g_above = &self.levels[n as usize];
        let (transversal, _) = g_above.coset_reps(above);
        for v in subspaces_of(v_above, self.p) {
            let codim = (self.d - v.len()) as u32;
            // every lower level contributes at least the same codimension
            let spent_here = spent + codim;
            if spent_here + (n - 1) * codim > self.m || self.p.pow(spent_here) > self.max_index {
                continue;
            }
            let lifts: Vec<Elem> = v
                .iter()
                .map(|row| {
                    let w = self.p.pow(n - 1);
                    self.data.element_of(&row.iter().map(|&c| c * w).collect::<Vec<_>>())
                })
                .collect();
            let mut seen: HashSet<FixedBitSet> = HashSet::new();
            let r = lifts.len();
            let mut choice = vec![0usize; r];
            loop {
                let mut kgrp = above.clone();
                for (b, &t) in lifts.iter().zip(&choice) {
                    kgrp = kgrp.extend(q.mul(*b, transversal[t]));
                }
                let mut meet = kgrp.bits().clone();
                meet.intersect_with(g_above.bits());
                if meet == *above.bits() && seen.insert(kgrp.bits().clone()) {
                    self.descend(n - 1, &kgrp, &v, spent_here, out);
                }
                let mut j = 0;
                while j < r {
                    choice[j] += 1;
                    if choice[j] < transversal.len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == r {
                    break;
                }
            }
        }
    }
}

/// `σ(n)`: the number of open subgroups of index at most `n`.
pub fn sigma(g: &UniformGroup, n: u64) -> Result<usize, GoodBasisError> {
    Ok(enumerate_open(g, n)?.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaRow {
    pub index: u64,
    pub count: usize,
    pub cumulative: usize,
}

/// Counts of open subgroups of each index `p^j ≤ max_index`.
pub fn sigma_table(g: &UniformGroup, max_index: u64) -> Result<Vec<SigmaRow>, GoodBasisError> {
    let subs = enumerate_open(g, max_index)?;
    let mut rows = Vec::new();
    let mut cumulative = 0;
    let mut idx = 1u64;
    while idx <= max_index {
        let count = subs.iter().filter(|h| h.index() == idx).count();
        cumulative += count;
        rows.push(SigmaRow { index: idx, count, cumulative });
        idx = match idx.checked_mul(g.p()) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(rows)
}
