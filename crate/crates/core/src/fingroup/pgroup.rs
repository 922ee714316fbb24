use serde::Serialize;

use super::group::{mat_identity, mat_mul, Elem, FiniteGroup};
use super::lattice::{all_subgroups, cyclic_generators, maximal_subgroups};
use super::subgroup::Subgroup;
use super::GroupError;
use crate::padic::{factorize, valuation_u64};

/// The prime `p` when `|G| = p^a` with `a ≥ 1`.
pub fn p_group_prime(g: &FiniteGroup) -> Option<u64> {
    match factorize(g.order() as u64).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

fn is_p_power(n: usize, p: u64) -> bool {
    let mut n = n as u64;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn require_p_group(g: &FiniteGroup, p: u64) -> Result<(), GroupError> {
    if is_p_power(g.order(), p) {
        Ok(())
    } else {
        Err(GroupError::NotPGroup { p })
    }
}

fn require_odd(p: u64) -> Result<(), GroupError> {
    if p == 2 {
        Err(GroupError::EvenPrime)
    } else {
        Ok(())
    }
}

/// Intersection of all maximal subgroups.
pub fn frattini(g: &FiniteGroup) -> Result<Subgroup, GroupError> {
    let maximal = maximal_subgroups(g)?;
    let mut bits = g.all_bits();
    for m in &maximal {
        bits.intersect_with(m.bits());
    }
    Ok(Subgroup::from_elements(g, bits))
}

/// `H^p [H, H]` for a subgroup `H` of a p-group.
fn frattini_of(h: &Subgroup, p: u64) -> Subgroup {
    h.power_subgroup(p).join(&h.commutator(h))
}

/// `G^p [G, G]`, which is the Frattini subgroup of a p-group.
pub fn frattini_p(g: &FiniteGroup, p: u64) -> Result<Subgroup, GroupError> {
    require_p_group(g, p)?;
    Ok(frattini_of(&g.whole(), p))
}

/// The lower p-series `P_1 = G ⊇ P_2 ⊇ …` down to the trivial group.
#[derive(Debug, Clone)]
pub struct PSeries {
    levels: Vec<Subgroup>,
}

impl PSeries {
    /// Levels `P_1, P_2, …`, ending with the trivial subgroup.
    pub fn levels(&self) -> &[Subgroup] {
        &self.levels
    }

    /// `P_i` for `i ≥ 1`; indices past the end are trivial.
    pub fn level(&self, i: usize) -> Subgroup {
        assert!(i >= 1, "the series is indexed from 1");
        match self.levels.get(i - 1) {
            Some(s) => s.clone(),
            None => self.levels.last().expect("nonempty series").clone(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        self.levels.iter().map(Subgroup::order).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

pub fn lower_p_series(g: &FiniteGroup, p: u64) -> Result<PSeries, GroupError> {
    require_p_group(g, p)?;
    let whole = g.whole();
    let mut levels = vec![whole.clone()];
    while !levels.last().unwrap().is_trivial() {
        let cur = levels.last().unwrap();
        let next = cur.power_subgroup(p).join(&cur.commutator(&whole));
        debug_assert!(next.order() < cur.order());
        levels.push(next);
    }
    Ok(PSeries { levels })
}

/// `[N, G] ≤ N^p`.
pub fn is_powerfully_embedded(n: &Subgroup, p: u64) -> Result<bool, GroupError> {
    require_odd(p)?;
    let g = n.group();
    require_p_group(g, p)?;
    Ok(n.commutator(&g.whole()).is_subset(&n.power_subgroup(p)))
}

pub fn is_powerful(g: &FiniteGroup, p: u64) -> Result<bool, GroupError> {
    is_powerfully_embedded(&g.whole(), p)
}

/// The p-th power map `G_i/G_{i+1} → G_{i+1}/G_{i+2}` of a powerful group.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaMap {
    pub i: usize,
    /// Least element of each coset of `G_{i+1}` in `G_i`.
    pub domain: Vec<Elem>,
    /// For each domain coset, the least element of the image coset.
    pub image: Vec<Elem>,
    pub codomain_size: usize,
    pub well_defined: bool,
    pub surjective: bool,
    /// Number of domain cosets mapping to the identity coset.
    pub kernel_size: usize,
}

impl ThetaMap {
    pub fn is_bijective(&self) -> bool {
        self.well_defined && self.surjective && self.kernel_size == 1
    }
}

pub fn theta_map(g: &FiniteGroup, p: u64, i: usize) -> Result<ThetaMap, GroupError> {
    require_odd(p)?;
    if !is_powerful(g, p)? {
        return Err(GroupError::NotPowerful);
    }
    let series = lower_p_series(g, p)?;
    if i == 0 {
        return Err(GroupError::SeriesIndex { i, len: series.len() });
    }
    Ok(theta_from_series(g, &series, p, i))
}

pub(crate) fn theta_from_series(g: &FiniteGroup, series: &PSeries, p: u64, i: usize) -> ThetaMap {
    let (gi, gi1, gi2) = (series.level(i), series.level(i + 1), series.level(i + 2));
    let (domain, dom_rep) = gi.coset_reps(&gi1);
    let (codomain, cod_rep) = gi1.coset_reps(&gi2);
    let mut image = vec![None::<Elem>; domain.len()];
    let mut well_defined = true;
    for x in gi.elements() {
        let d = dom_rep[x as usize].expect("coset rep");
        let slot = domain.binary_search(&d).expect("sorted reps");
        let y = g.pow(x, p);
        let c = cod_rep[y as usize];
        match (image[slot], c) {
            (_, None) => well_defined = false,
            (None, Some(c)) => image[slot] = Some(c),
            (Some(prev), Some(c)) if prev != c => well_defined = false,
            _ => {}
        }
    }
    let image: Vec<Elem> = image.into_iter().map(|c| c.unwrap_or(g.identity())).collect();
    let mut hit = image.clone();
    hit.sort_unstable();
    hit.dedup();
    let identity_coset = cod_rep[g.identity() as usize].expect("identity coset");
    ThetaMap {
        i,
        kernel_size: image.iter().filter(|&&c| c == identity_coset).count(),
        surjective: hit.len() == codomain.len(),
        codomain_size: codomain.len(),
        domain,
        image,
        well_defined,
    }
}

/// Smallest generating tuple of a subgroup. For p-groups this is a Burnside
/// basis read off `H/Φ(H)`; otherwise an exhaustive search over cyclic
/// subgroup generators.
pub fn minimal_generating_set(h: &Subgroup) -> Result<Vec<Elem>, GroupError> {
    let g = h.group();
    if h.is_trivial() {
        return Ok(Vec::new());
    }
    if let [(p, _)] = factorize(h.order() as u64).as_slice() {
        let p = *p;
        let mut span = frattini_of(h, p);
        let mut gens = Vec::new();
        for x in h.elements() {
            if !span.contains(x) {
                span = span.extend(x);
                gens.push(x);
            }
        }
        return Ok(gens);
    }
    let reps = cyclic_generators(h);
    const SEARCH_CAP: usize = 5_000_000;
    for k in 1..=reps.len() {
        let mut budget = 0usize;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            budget += 1;
            if budget > SEARCH_CAP {
                return Err(GroupError::CapExceeded { what: "generating tuple search", limit: SEARCH_CAP });
            }
            let tuple: Vec<Elem> = idx.iter().map(|&j| reps[j]).collect();
            if g.generated(&tuple).order() == h.order() {
                return Ok(tuple);
            }
            // next k-combination of 0..reps.len()
            let mut j = k;
            while j > 0 && idx[j - 1] == reps.len() - k + j - 1 {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            idx[j - 1] += 1;
            for t in j..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    unreachable!("the subgroup generates itself")
}

/// `d(H)`.
pub fn min_generators(h: &Subgroup) -> Result<usize, GroupError> {
    if h.is_trivial() {
        return Ok(0);
    }
    if let [(p, _)] = factorize(h.order() as u64).as_slice() {
        let p = *p;
        let phi = frattini_of(h, p);
        return Ok(valuation_u64(p, (h.order() / phi.order()) as u64) as usize);
    }
    Ok(minimal_generating_set(h)?.len())
}

/// `max d(H)` over all subgroups.
pub fn rank(g: &FiniteGroup) -> Result<usize, GroupError> {
    let mut best = 0;
    for h in all_subgroups(g)? {
        best = best.max(min_generators(&h)?);
    }
    Ok(best)
}

/// `V(G, r)`: the intersection of the kernels of all homomorphisms
/// `G → GL_r(F_p)`.
#[derive(Debug, Clone)]
pub struct VSubgroup {
    pub subgroup: Subgroup,
    pub homomorphisms: usize,
    /// `d(V) ≤ r`, the hypothesis under which `V` must be powerful.
    pub rank_hypothesis: bool,
    pub powerful: bool,
}

pub fn v_subgroup(g: &FiniteGroup, p: u64, r: usize) -> Result<VSubgroup, GroupError> {
    require_odd(p)?;
    require_p_group(g, p)?;
    if p > 3 || r > 2 || g.order() as u64 > p.pow(4) {
        return Err(GroupError::CapExceeded { what: "homomorphism enumeration (|G| ≤ p^4, r ≤ 2, p ≤ 3)", limit: 81 });
    }
    let gl = general_linear(r, p);
    let target = &gl;
    // Images of a p-group land in p-elements.
    let candidates: Vec<Elem> = target.elements().filter(|&a| is_p_power(target.element_order(a) as usize, p)).collect();
    let gens = minimal_generating_set(&g.whole())?;
    // Words: every element as (parent, generator index) along a BFS tree.
    let n = g.order();
    let mut parent: Vec<Option<(Elem, usize)>> = vec![None; n];
    let mut order = vec![g.identity()];
    let mut seen = vec![false; n];
    seen[g.identity() as usize] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for (j, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if !seen[y as usize] {
                seen[y as usize] = true;
                parent[y as usize] = Some((x, j));
                order.push(y);
            }
        }
    }
    let mut kernel = g.all_bits();
    let mut homs = 0usize;
    let mut choice = vec![0usize; gens.len()];
    let mut phi = vec![target.identity(); n];
    loop {
        for &x in &order[1..] {
            let (par, j) = parent[x as usize].unwrap();
            phi[x as usize] = target.mul(phi[par as usize], candidates[choice[j]]);
        }
        let is_hom = g.elements().all(|a| g.elements().all(|b| phi[g.mul(a, b) as usize] == target.mul(phi[a as usize], phi[b as usize])));
        if is_hom {
            homs += 1;
            for x in g.elements() {
                if phi[x as usize] != target.identity() {
                    kernel.set(x as usize, false);
                }
            }
        }
        // odometer over generator images
        let mut j = 0;
        while j < choice.len() {
            choice[j] += 1;
            if choice[j] < candidates.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
        if j == choice.len() {
            break;
        }
    }
    let subgroup = Subgroup::from_elements(g, kernel);
    let rank_hypothesis = min_generators(&subgroup)? <= r;
    let powerful = subgroup.commutator(&subgroup).is_subset(&subgroup.power_subgroup(p));
    Ok(VSubgroup { subgroup, homomorphisms: homs, rank_hypothesis, powerful })
}

/// `GL_r(F_p)` as a matrix group.
fn general_linear(r: usize, p: u64) -> FiniteGroup {
    let mut elems = Vec::new();
    let total = (p as usize).pow((r * r) as u32);
    for code in 0..total {
        let mut m = vec![0u64; r * r];
        let mut c = code;
        for e in m.iter_mut() {
            *e = (c % p as usize) as u64;
            c /= p as usize;
        }
        if det_mod(&m, r, p) != 0 {
            elems.push(m);
        }
    }
    debug_assert!(elems.iter().all(|a| elems.iter().any(|b| mat_mul(r, p, a, b) == mat_identity(r, p))));
    FiniteGroup::from_matrices(format!("GL{r}(F{p})"), r, p, elems)
}

fn det_mod(m: &[u64], r: usize, p: u64) -> u64 {
    match r {
        1 => m[0] % p,
        2 => (m[0] * m[3] + p * p - (m[1] * m[2]) % p) % p,
        _ => unreachable!("r ≤ 2"),
    }
}
