//! VC dimension of finite set systems, shatter functions, the Sauer-Shelah
//! bound, Baldwin-Saxl reduction for subgroup families and the polynomial
//! subgroup-growth bound.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingroup::{Elem, FiniteGroup, GroupError, Subgroup};

/// Largest shattered-set size searched by [`vc_dim`].
pub const VC_CAP: usize = 8;
/// Largest number of subsets swept exhaustively.
pub const SUBSET_LIMIT: u128 = 1_000_000;
/// Largest set whose shattering is checked directly.
pub const SHATTER_LIMIT: usize = 20;
const SAMPLES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VcError {
    #[error("{what} exceeds the cap {limit}")]
    CapExceeded { what: &'static str, limit: usize },
    #[error("bad arguments: {0}")]
    BadArgs(String),
    #[error("no subfamily of at most {k} members has the same intersection")]
    ReductionFailed { k: usize },
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How a returned number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    /// A lower bound from a seeded sample of subsets.
    Sampled,
    /// The search stopped at [`VC_CAP`]; the value is a lower bound.
    Capped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub value: u64,
    pub provenance: Provenance,
}

impl Measured {
    fn exact(value: u64) -> Self {
        Measured { value, provenance: Provenance::Exact }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    members: Vec<FixedBitSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(universe: usize, members: Vec<FixedBitSet>) -> Result<Self, VcError> {
        if let Some(i) = members.iter().position(|m| m.len() != universe) {
            return Err(VcError::InvalidFamily(format!("member {i} has width {} not {universe}", members[i].len())));
        }
        Ok(SetFamily { universe, members })
    }

    pub fn from_sets(universe: usize, sets: &[Vec<usize>]) -> Result<Self, VcError> {
        let members = sets
            .iter()
            .map(|s| {
                let mut b = FixedBitSet::with_capacity(universe);
                for &x in s {
                    if x >= universe {
                        return Err(VcError::InvalidFamily(format!("point {x} outside universe of size {universe}")));
                    }
                    b.insert(x);
                }
                Ok(b)
            })
            .collect::<Result<_, _>>()?;
        Ok(SetFamily { universe, members })
    }

    /// Parse `{"universe": n, "sets": [[indices]...]}`.
    pub fn from_json(text: &str) -> Result<Self, VcError> {
        let f: FamilyFile = serde_json::from_str(text).map_err(|e| VcError::InvalidFamily(e.to_string()))?;
        Self::from_sets(f.universe, &f.sets)
    }

    pub fn to_json(&self) -> String {
        let sets = self.members.iter().map(|m| m.ones().collect()).collect();
        serde_json::to_string(&FamilyFile { universe: self.universe, sets }).expect("plain data serializes")
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[FixedBitSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of members equal to an earlier member.
    pub fn duplicates(&self) -> usize {
        self.members.len() - self.distinct()
    }

    pub fn distinct(&self) -> usize {
        self.members.iter().collect::<HashSet<_>>().len()
    }

    /// Number of distinct traces `S ∩ A`.
    pub fn trace_count(&self, a: &[usize]) -> usize {
        let mut traces = HashSet::new();
        for m in &self.members {
            let t: Vec<bool> = a.iter().map(|&x| m.contains(x)).collect();
            traces.insert(t);
        }
        traces.len()
    }
}

fn check_points(f: &SetFamily, a: &[usize]) -> Result<(), VcError> {
    if let Some(&x) = a.iter().find(|&&x| x >= f.universe) {
        return Err(VcError::BadArgs(format!("point {x} outside universe of size {}", f.universe)));
    }
    Ok(())
}

/// Whether every subset of `a` is cut out by some member.
pub fn is_shattered(f: &SetFamily, a: &[usize]) -> Result<bool, VcError> {
    if a.len() > SHATTER_LIMIT {
        return Err(VcError::CapExceeded { what: "shattered set size", limit: SHATTER_LIMIT });
    }
    check_points(f, a)?;
    let mut distinct: Vec<usize> = a.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(f.trace_count(&distinct) == 1usize << distinct.len())
}

/// The VC dimension, searching shattered sets up to [`VC_CAP`].
///
/// Shattered sets are closed under subsets, so every shattered `s`-set
/// extends a shattered `(s-1)`-set by a larger point; growing level by level
/// finds them all. By Pajor's lemma there are at most `|F|` of them. The empty
/// family shatters nothing and is given dimension 0.
pub fn vc_dim(f: &SetFamily) -> Measured {
    if f.is_empty() {
        return Measured::exact(0);
    }
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    let mut dim = 0;
    while !level.is_empty() {
        if dim == VC_CAP {
            let more = level.iter().any(|a| {
                let start = a.last().map_or(0, |&x| x + 1);
                (start..f.universe).any(|x| {
                    let mut b = a.clone();
                    b.push(x);
                    f.trace_count(&b) == 1 << b.len()
                })
            });
            let provenance = if more { Provenance::Capped } else { Provenance::Exact };
            return Measured { value: dim as u64, provenance };
        }
        let mut next = Vec::new();
        for a in &level {
            let start = a.last().map_or(0, |&x| x + 1);
            for x in start..f.universe {
                let mut b = a.clone();
                b.push(x);
                if f.trace_count(&b) == 1 << b.len() {
                    next.push(b);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        dim += 1;
        level = next;
    }
    Measured::exact(dim as u64)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `π_F(n)`: the most traces cut on an `n`-subset of the universe. For
/// `n ≥ |X|` this is the number of distinct members.
///
/// Points with the same membership pattern are interchangeable and adding a
/// point never loses a trace, so the sweep runs over `min(n, s)`-sets of the
/// `s` distinct patterns. When there are more than [`SUBSET_LIMIT`] of those,
/// a seeded sample gives a lower bound; it is still reported exact if it
/// meets `min(2^n, #distinct)`.
pub fn shatter_function(f: &SetFamily, n: usize, seed: u64) -> Measured {
    let distinct = f.distinct() as u64;
    if n >= f.universe {
        return Measured::exact(distinct);
    }
    let mut seen = HashSet::new();
    let patterns: Vec<usize> = (0..f.universe)
        .filter(|&x| seen.insert(f.members.iter().map(|m| m.contains(x)).collect::<Vec<bool>>()))
        .collect();
    let n = n.min(patterns.len());
    let ceiling = if n >= 64 { distinct } else { distinct.min(1u64 << n) };
    let subsets = binomial(patterns.len() as u128, n as u128);
    let mut best = 0u64;
    let pick = |c: &[usize]| -> Vec<usize> { c.iter().map(|&i| patterns[i]).collect() };
    if subsets.is_some_and(|c| c <= SUBSET_LIMIT) {
        for c in Combinations::new(patterns.len(), n) {
            best = best.max(f.trace_count(&pick(&c)) as u64);
            if best == ceiling {
                break;
            }
        }
        return Measured::exact(best);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLES {
        let mut c = sample(&mut rng, patterns.len(), n).into_vec();
        c.sort_unstable();
        best = best.max(f.trace_count(&pick(&c)) as u64);
        if best == ceiling {
            return Measured::exact(best);
        }
    }
    Measured { value: best, provenance: Provenance::Sampled }
}

/// `Σ_{i ≤ k} C(n, i)`.
pub fn sauer_shelah_bound(k: u64, n: u64) -> Result<u128, VcError> {
    if n < k {
        return Err(VcError::BadArgs(format!("need n >= k, got n = {n}, k = {k}")));
    }
    (0..=k as u128).try_fold(0u128, |acc, i| binomial(n as u128, i).and_then(|c| acc.checked_add(c))).ok_or_else(|| {
        VcError::BadArgs(format!("bound for n = {n} overflows"))
    })
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut c = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                self.cur = Some(c);
                break;
            }
        }
        Some(out)
    }
}

/// `φ(x, b)` for rows `x` and columns `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteRelation {
    rows: usize,
    cols: usize,
    incidence: Vec<Vec<bool>>,
}

impl BipartiteRelation {
    pub fn new(incidence: Vec<Vec<bool>>) -> Result<Self, VcError> {
        let rows = incidence.len();
        let cols = incidence.first().map_or(0, Vec::len);
        if incidence.iter().any(|r| r.len() != cols) {
            return Err(VcError::InvalidFamily("ragged incidence matrix".into()));
        }
        Ok(BipartiteRelation { rows, cols, incidence })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn holds(&self, x: usize, b: usize) -> bool {
        self.incidence[x][b]
    }

    /// The sets `φ(M, b)`, one per column, over the rows.
    pub fn family(&self) -> SetFamily {
        let members = (0..self.cols)
            .map(|b| {
                let mut s = FixedBitSet::with_capacity(self.rows);
                for x in (0..self.rows).filter(|&x| self.incidence[x][b]) {
                    s.insert(x);
                }
                s
            })
            .collect();
        SetFamily { universe: self.rows, members }
    }

    pub fn vc(&self) -> Measured {
        vc_dim(&self.family())
    }
}

pub fn dual(r: &BipartiteRelation) -> BipartiteRelation {
    let incidence = (0..r.cols).map(|b| (0..r.rows).map(|x| r.incidence[x][b]).collect()).collect();
    BipartiteRelation { rows: r.cols, cols: r.rows, incidence }
}

/// VC dimension of the transposed relation.
pub fn vc_opp(r: &BipartiteRelation) -> Measured {
    dual(r).vc()
}

/// Subgroups of one finite group, each tagged with a parameter label.
#[derive(Debug, Clone)]
pub struct SubgroupFamily {
    parent: FiniteGroup,
    members: Vec<Subgroup>,
    params: Vec<String>,
}

impl SubgroupFamily {
    pub fn new(parent: &FiniteGroup, members: Vec<(String, Subgroup)>) -> Result<Self, VcError> {
        let mut out = SubgroupFamily { parent: parent.clone(), members: Vec::new(), params: Vec::new() };
        for (param, h) in members {
            if h.group() != parent {
                return Err(VcError::InvalidFamily(format!("member {param} lies in another group")));
            }
            out.params.push(param);
            out.members.push(h);
        }
        Ok(out)
    }

    /// Members given as element sets; each must be closed under the product.
    pub fn from_bitsets(parent: &FiniteGroup, members: Vec<(String, FixedBitSet)>) -> Result<Self, VcError> {
        let mut subs = Vec::new();
        for (param, bits) in members {
            let closed = bits.len() == parent.order()
                && bits.contains(parent.identity() as usize)
                && bits.ones().all(|a| bits.ones().all(|b| bits.contains(parent.mul(a as Elem, b as Elem) as usize)));
            if !closed {
                return Err(VcError::InvalidFamily(format!("member {param} is not a subgroup")));
            }
            subs.push((param, Subgroup::from_elements(parent, bits)));
        }
        Self::new(parent, subs)
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `x ∈ H_b` with elements as rows and members as columns.
    pub fn membership_relation(&self) -> BipartiteRelation {
        let incidence =
            self.parent.elements().map(|x| self.members.iter().map(|h| h.contains(x)).collect()).collect();
        BipartiteRelation { rows: self.parent.order(), cols: self.members.len(), incidence }
    }
}

fn intersect_all(f: &SubgroupFamily, idx: &[usize]) -> FixedBitSet {
    let mut acc = f.parent.all_bits();
    for &i in idx {
        acc.intersect_with(f.members[i].bits());
    }
    acc
}

/// Indices `i_1, …, i_m` (`m ≤ k`) from `j` with the same intersection as all
/// of `j`. Greedy first, taking the member that shrinks the running
/// intersection most (lowest index on ties); if that needs more than `k`
/// members, every subset of size at most `k` is tried in lexicographic order.
pub fn baldwin_saxl_reduce(f: &SubgroupFamily, j: &[usize], k: usize) -> Result<Vec<usize>, VcError> {
    if let Some(&i) = j.iter().find(|&&i| i >= f.len()) {
        return Err(VcError::BadArgs(format!("index {i} outside family of size {}", f.len())));
    }
    let mut pool: Vec<usize> = j.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let target = intersect_all(f, &pool);
    let mut running = f.parent.all_bits();
    let mut chosen = Vec::new();
    while running != target {
        let (best, size) = pool
            .iter()
            .map(|&i| {
                let mut t = running.clone();
                t.intersect_with(f.members[i].bits());
                (i, t.count_ones(..))
            })
            .min_by_key(|&(i, c)| (c, i))
            .expect("a nonempty pool when the target is proper");
        debug_assert!(size < running.count_ones(..));
        running.intersect_with(f.members[best].bits());
        chosen.push(best);
    }
    if chosen.len() <= k {
        return Ok(chosen);
    }
    for m in 0..=k.min(pool.len()) {
        for c in Combinations::new(pool.len(), m) {
            let idx: Vec<usize> = c.iter().map(|&i| pool[i]).collect();
            if intersect_all(f, &idx) == target {
                return Ok(idx);
            }
        }
    }
    Err(VcError::ReductionFailed { k })
}

/// Number of distinct members of index at most `n`.
pub fn sigma_phi(f: &SubgroupFamily, n: usize) -> usize {
    f.members.iter().filter(|h| h.index() <= n).map(Subgroup::bits).collect::<HashSet<_>>().len()
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub sigma: usize,
    /// `π_φ(n^{vc_opp})`.
    pub bound: u64,
    pub bound_provenance: Provenance,
    pub holds: bool,
    /// `ln σ / ln n`, absent at `n = 1`.
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub vc: Measured,
    pub vc_opp: Measured,
    /// `vc · vc_opp`, the exponent of the polynomial bound.
    pub degree: u64,
    pub rows: Vec<GrowthRow>,
    pub all_hold: bool,
    /// Smallest `c` with `σ(n) ≤ c n^{degree}` over the checked rows.
    pub empirical_c: f64,
}

/// Check `σ_φ(n) ≤ π_φ(n^{vc_opp})` at `n = 1` and at every member index.
/// Between consecutive indices `σ` is constant and the bound nondecreasing,
/// so these `n` cover every `n ≥ 1`.
pub fn verify_growth(f: &SubgroupFamily, seed: u64) -> GrowthReport {
    let rel = f.membership_relation();
    let fam = rel.family();
    let vc = vc_dim(&fam);
    let vc_opp = vc_opp(&rel);
    let degree = vc.value * vc_opp.value;
    let mut ns: Vec<usize> = f.members.iter().map(Subgroup::index).collect();
    ns.push(1);
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::new();
    let mut empirical_c: f64 = 0.0;
    for n in ns {
        let sigma = sigma_phi(f, n);
        let points = (n as u128).saturating_pow(vc_opp.value as u32).min(fam.universe() as u128) as usize;
        let bound = shatter_function(&fam, points, seed);
        let holds = sigma as u64 <= bound.value;
        let exponent = (n > 1 && sigma > 0).then(|| (sigma as f64).ln() / (n as f64).ln());
        empirical_c = empirical_c.max(sigma as f64 / (n as f64).powi(degree as i32));
        rows.push(GrowthRow { n, sigma, bound: bound.value, bound_provenance: bound.provenance, holds, exponent });
    }
    let all_hold = rows.iter().all(|r| r.holds);
    GrowthReport { vc, vc_opp, degree, rows, all_hold, empirical_c }
}

/// Kernels of the nonzero functionals on `F_p^dim`, one per line of
/// functionals, each labelled by its normalised coefficient vector.
pub fn hyperplane_family(p: u64, dim: usize) -> Result<SubgroupFamily, VcError> {
    let g = FiniteGroup::elementary_abelian(p, dim)?;
    let mut members = Vec::new();
    for a in crate::linalg::all_vectors(dim, p) {
        // normalised: first nonzero coordinate is 1
        if a.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut bits = FixedBitSet::with_capacity(g.order());
        for x in g.elements() {
            let v = g.repr(x);
            if v.iter().zip(&a).map(|(s, t)| s * t).sum::<u64>() % p == 0 {
                bits.insert(x as usize);
            }
        }
        let label = a.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        members.push((label, Subgroup::from_elements(&g, bits)));
    }
    SubgroupFamily::new(&g, members)
}

/// All subgroups of index exactly `index` in `g`.
pub fn index_family(g: &FiniteGroup, index: usize) -> Result<SubgroupFamily, VcError> {
    let subs = crate::fingroup::subgroups_up_to_index(g, index)?;
    let members = subs
        .into_iter()
        .filter(|h| h.index() == index)
        .enumerate()
        .map(|(i, h)| (format!("H{i}"), h))
        .collect();
    SubgroupFamily::new(g, members)
}
