//! Finite-depth surjective inverse systems `G_0 ← G_1 ← … ← G_m` of finite
//! groups. Level 0 is the coarsest quotient.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingroup::{min_generators, p_group_prime, sylow, Elem, FiniteGroup, GroupError, GroupPreset, Subgroup};
use crate::padic::Supernatural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvsysError {
    #[error("inverse system has no levels")]
    Empty,
    #[error("map into level {level} has length {got}, expected {expected}")]
    MapLength { level: usize, got: usize, expected: usize },
    #[error("map into level {level} is not a homomorphism")]
    NotHomomorphism { level: usize },
    #[error("map into level {level} is not surjective")]
    NotSurjective { level: usize },
    #[error("subgroups at levels {level} and {} are not compatible", level + 1)]
    Incompatible { level: usize },
    #[error("cannot derive a reduction map into level {level}")]
    NoReduction { level: usize },
    #[error("search budget of {limit} nodes exhausted")]
    SearchBudget { limit: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An element of the depth-m limit: one compatible component per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProElement {
    pub components: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct InverseSystem {
    levels: Vec<FiniteGroup>,
    /// `maps[i]` sends level `i + 1` onto level `i`.
    maps: Vec<Vec<Elem>>,
}

/// JSON form: `{"levels":[preset, …], "maps":[[…], …]}`. Without `maps`,
/// coordinate or entry reduction maps are derived.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescriptor {
    pub levels: Vec<GroupPreset>,
    #[serde(default)]
    pub maps: Option<Vec<Vec<Elem>>>,
}

const SEARCH_BUDGET: usize = 2_000_000;

impl InverseSystem {
    pub fn new(levels: Vec<FiniteGroup>, maps: Vec<Vec<Elem>>) -> Result<Self, InvsysError> {
        if levels.is_empty() {
            return Err(InvsysError::Empty);
        }
        if maps.len() + 1 != levels.len() {
            return Err(InvsysError::MapLength { level: maps.len(), got: maps.len(), expected: levels.len() - 1 });
        }
        for (i, map) in maps.iter().enumerate() {
            let (dst, src) = (&levels[i], &levels[i + 1]);
            if map.len() != src.order() || map.iter().any(|&y| y as usize >= dst.order()) {
                return Err(InvsysError::MapLength { level: i, got: map.len(), expected: src.order() });
            }
            // Checking on generators of the source is enough only with a
            // presentation; check the full table instead.
            for a in src.elements() {
                for b in src.elements() {
                    if map[src.mul(a, b) as usize] != dst.mul(map[a as usize], map[b as usize]) {
                        return Err(InvsysError::NotHomomorphism { level: i });
                    }
                }
            }
            let mut hit = FixedBitSet::with_capacity(dst.order());
            map.iter().for_each(|&y| hit.insert(y as usize));
            if hit.count_ones(..) != dst.order() {
                return Err(InvsysError::NotSurjective { level: i });
            }
        }
        Ok(InverseSystem { levels, maps })
    }

    /// Like `new` but skipping the quadratic homomorphism check; used for
    /// reduction maps that are homomorphisms by construction.
    fn trusted(levels: Vec<FiniteGroup>, maps: Vec<Vec<Elem>>) -> Self {
        InverseSystem { levels, maps }
    }

    /// Levels related by reducing abelian coordinates or matrix entries.
    pub fn reduction(levels: Vec<FiniteGroup>) -> Result<Self, InvsysError> {
        if levels.is_empty() {
            return Err(InvsysError::Empty);
        }
        let mut maps = Vec::new();
        for i in 0..levels.len() - 1 {
            maps.push(reduction_map(&levels[i + 1], &levels[i]).ok_or(InvsysError::NoReduction { level: i })?);
        }
        let sys = Self::trusted(levels, maps);
        for (i, map) in sys.maps.iter().enumerate() {
            let mut hit = FixedBitSet::with_capacity(sys.levels[i].order());
            map.iter().for_each(|&y| hit.insert(y as usize));
            if hit.count_ones(..) != sys.levels[i].order() {
                return Err(InvsysError::NotSurjective { level: i });
            }
        }
        Ok(sys)
    }

    /// `Z/n_0 ← Z/n_1 ← …` under reduction; each `n_i` must divide `n_{i+1}`.
    pub fn cyclic_tower(moduli: &[u64]) -> Result<Self, InvsysError> {
        let levels = moduli.iter().map(|&n| FiniteGroup::cyclic(n)).collect::<Result<Vec<_>, _>>()?;
        Self::reduction(levels)
    }

    /// `(Z/p^i)^rank` for `i = 1..=depth`.
    pub fn abelian_tower(p: u64, rank: usize, depth: u32) -> Result<Self, InvsysError> {
        let levels = (1..=depth)
            .map(|i| FiniteGroup::abelian(&vec![p.pow(i); rank]))
            .collect::<Result<Vec<_>, _>>()?;
        Self::reduction(levels)
    }

    /// `UT_3(Z/p^i)` for `i = 1..=depth`.
    pub fn unitriangular_tower(p: u64, depth: u32) -> Result<Self, InvsysError> {
        let levels = (1..=depth).map(|i| FiniteGroup::unitriangular(p, i)).collect::<Result<Vec<_>, _>>()?;
        Self::reduction(levels)
    }

    /// `depth` copies of `g` joined by identity maps.
    pub fn constant(g: &FiniteGroup, depth: usize) -> Self {
        let id: Vec<Elem> = g.elements().collect();
        Self::trusted(vec![g.clone(); depth.max(1)], vec![id; depth.max(1) - 1])
    }

    /// `G × Z/n_i` with the identity on `G` and reduction on the cyclic factor.
    pub fn product_with_cyclic(g: &FiniteGroup, moduli: &[u64]) -> Result<Self, InvsysError> {
        let levels = moduli
            .iter()
            .map(|&n| FiniteGroup::direct_product(g, &FiniteGroup::cyclic(n)?))
            .collect::<Result<Vec<_>, _>>()?;
        let mut maps = Vec::new();
        for w in moduli.windows(2) {
            let (small, big) = (w[0], w[1]);
            if small == 0 || big % small != 0 {
                return Err(InvsysError::NoReduction { level: maps.len() });
            }
            let map = (0..g.order() as u64 * big).map(|x| ((x / big) * small + (x % big) % small) as Elem).collect();
            maps.push(map);
        }
        Ok(Self::trusted(levels, maps))
    }

    pub fn from_descriptor(desc: &SystemDescriptor) -> Result<Self, InvsysError> {
        let levels = desc.levels.iter().map(GroupPreset::build).collect::<Result<Vec<_>, _>>()?;
        match &desc.maps {
            Some(maps) => Self::new(levels, maps.clone()),
            None => Self::reduction(levels),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[FiniteGroup] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &FiniteGroup {
        &self.levels[i]
    }

    /// The map from level `i + 1` onto level `i`.
    pub fn map(&self, i: usize) -> &[Elem] {
        &self.maps[i]
    }

    pub fn finest(&self) -> &FiniteGroup {
        self.levels.last().expect("nonempty")
    }

    /// Image of a level-`i + 1` subgroup at level `i`.
    pub fn image(&self, i: usize, h: &Subgroup) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.levels[i].order());
        for x in h.elements() {
            bits.insert(self.maps[i][x as usize] as usize);
        }
        Subgroup::from_elements(&self.levels[i], bits)
    }

    /// Project a finest-level element to level `i`.
    pub fn project(&self, x: Elem, i: usize) -> Elem {
        (i..self.maps.len()).rev().fold(x, |y, j| self.maps[j][y as usize])
    }

    pub fn thread(&self, x: Elem) -> ProElement {
        ProElement { components: (0..self.depth()).map(|i| self.project(x, i)).collect() }
    }

    /// The order of the depth-m limit: `lcm |G_i|`.
    pub fn order_sn(&self) -> Supernatural {
        let orders: Vec<Supernatural> = self.levels.iter().map(|g| Supernatural::from_u64(g.order() as u64)).collect();
        Supernatural::lcm(&orders).expect("nonempty system")
    }

    /// `lcm |G_i : H_i|` for a compatible tower `H_i ≤ G_i`.
    pub fn index_sn(&self, tower: &[Subgroup]) -> Result<Supernatural, InvsysError> {
        self.check_tower(tower)?;
        let idx: Vec<Supernatural> = tower.iter().map(|h| Supernatural::from_u64(h.index() as u64)).collect();
        Ok(Supernatural::lcm(&idx).expect("nonempty system"))
    }

    /// A tower is compatible when it has one subgroup per level and each
    /// maps onto the one below.
    pub fn check_tower(&self, tower: &[Subgroup]) -> Result<(), InvsysError> {
        if tower.len() != self.depth() {
            return Err(InvsysError::Incompatible { level: tower.len().min(self.depth()) });
        }
        for (i, h) in tower.iter().enumerate() {
            if h.group() != &self.levels[i] {
                return Err(InvsysError::Incompatible { level: i });
            }
        }
        for i in 0..self.maps.len() {
            if self.image(i, &tower[i + 1]) != tower[i] {
                return Err(InvsysError::Incompatible { level: i });
            }
        }
        Ok(())
    }

    /// A `d`-tuple of threads whose components generate every level, or
    /// `None` if there is none. Depth-first over compatible generating
    /// tuples, in ascending element order.
    pub fn lift_tuple(&self, d: usize) -> Result<Option<Vec<ProElement>>, InvsysError> {
        if d == 0 {
            return Ok(self.levels.iter().all(|g| g.order() == 1).then(Vec::new));
        }
        // Cheap necessary condition on p-group levels.
        for g in &self.levels {
            if p_group_prime(g).is_some() && min_generators(&g.whole())? > d {
                return Ok(None);
            }
        }
        let mut fibers: Vec<Vec<Vec<Elem>>> = Vec::new();
        for (i, map) in self.maps.iter().enumerate() {
            let mut f = vec![Vec::new(); self.levels[i].order()];
            for (x, &y) in map.iter().enumerate() {
                f[y as usize].push(x as Elem);
            }
            fibers.push(f);
        }
        let mut budget = 0usize;
        let mut path: Vec<Vec<Elem>> = Vec::new();
        let g0 = &self.levels[0];
        let coarse: Vec<Vec<Elem>> = vec![g0.elements().collect(); d];
        if self.extend(&coarse, 0, &fibers, &mut path, &mut budget)? {
            let threads = (0..d)
                .map(|j| ProElement { components: path.iter().map(|tuple| tuple[j]).collect() })
                .collect();
            return Ok(Some(threads));
        }
        Ok(None)
    }

    /// Try each tuple drawn from `choices` at `level`, recursing upward.
    fn extend(
        &self,
        choices: &[Vec<Elem>],
        level: usize,
        fibers: &[Vec<Vec<Elem>>],
        path: &mut Vec<Vec<Elem>>,
        budget: &mut usize,
    ) -> Result<bool, InvsysError> {
        let g = &self.levels[level];
        let d = choices.len();
        let mut idx = vec![0usize; d];
        loop {
            *budget += 1;
            if *budget > SEARCH_BUDGET {
                return Err(InvsysError::SearchBudget { limit: SEARCH_BUDGET });
            }
            let tuple: Vec<Elem> = idx.iter().zip(choices).map(|(&j, c)| c[j]).collect();
            if g.generated(&tuple).is_whole() {
                path.push(tuple.clone());
                if level + 1 == self.depth() {
                    return Ok(true);
                }
                let next: Vec<Vec<Elem>> = tuple.iter().map(|&x| fibers[level][x as usize].clone()).collect();
                if self.extend(&next, level + 1, fibers, path, budget)? {
                    return Ok(true);
                }
                path.pop();
            }
            let mut j = d;
            loop {
                if j == 0 {
                    return Ok(false);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// A compatible tower of Sylow p-subgroups, by backtracking over the
    /// Sylow subgroups of each level.
    pub fn sylow_tower(&self, p: u64) -> Vec<Subgroup> {
        self.sylow_towers(p, 1).into_iter().next().expect("Sylow towers always exist")
    }

    /// Up to `limit` compatible Sylow towers, in canonical order.
    pub fn sylow_towers(&self, p: u64, limit: usize) -> Vec<Vec<Subgroup>> {
        let choices: Vec<Vec<Subgroup>> = self.levels.iter().map(|g| sylow_subgroups(g, p)).collect();
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.tower_search(&choices, 0, &mut path, &mut out, limit);
        out
    }

    fn tower_search(
        &self,
        choices: &[Vec<Subgroup>],
        level: usize,
        path: &mut Vec<Subgroup>,
        out: &mut Vec<Vec<Subgroup>>,
        limit: usize,
    ) {
        for s in &choices[level] {
            if out.len() >= limit {
                return;
            }
            if level > 0 && self.image(level - 1, s) != path[level - 1] {
                continue;
            }
            path.push(s.clone());
            if level + 1 == self.depth() {
                out.push(path.clone());
            } else {
                self.tower_search(choices, level + 1, path, out, limit);
            }
            path.pop();
        }
    }

    /// Closure of a finest-level subset through the coarser quotients.
    pub fn closure(&self, x: &[Elem]) -> Closure {
        let m = self.depth() - 1;
        let fine = self.finest();
        let mut projections = Vec::new();
        let mut preimages = Vec::new();
        let mut hull = fine.all_bits();
        for i in 0..=m {
            let mut proj = FixedBitSet::with_capacity(self.levels[i].order());
            for &e in x {
                proj.insert(self.project(e, i) as usize);
            }
            let mut pre = FixedBitSet::with_capacity(fine.order());
            for y in fine.elements() {
                if proj.contains(self.project(y, i) as usize) {
                    pre.insert(y as usize);
                }
            }
            if i < m || m == 0 {
                hull.intersect_with(&pre);
            }
            projections.push(proj.ones().map(|v| v as Elem).collect());
            preimages.push(pre.ones().map(|v| v as Elem).collect());
        }
        Closure { projections, preimages, hull: hull.ones().map(|v| v as Elem).collect() }
    }
}

/// Result of [`InverseSystem::closure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Closure {
    /// Image of `X` at each level.
    pub projections: Vec<Vec<Elem>>,
    /// `X N_i` inside the finest level, where `N_i` is the kernel onto level `i`.
    pub preimages: Vec<Vec<Elem>>,
    /// Intersection of `X N_i` over the coarser levels: the finest-level
    /// elements whose every coarser component lies in the projected `X`.
    pub hull: Vec<Elem>,
}

/// All Sylow p-subgroups of `g` (conjugates of one), canonically sorted.
pub fn sylow_subgroups(g: &FiniteGroup, p: u64) -> Vec<Subgroup> {
    let s = sylow(g, p);
    if s.is_whole() || s.is_trivial() {
        return vec![s];
    }
    let mut all: Vec<Subgroup> = Vec::new();
    let n = s.normalizer_in(&g.whole());
    let (reps, _) = g.whole().coset_reps(&n);
    // g⁻¹Sg depends only on the coset Ng; coset_reps gives left cosets xN,
    // so conjugate by inverses.
    for x in reps {
        all.push(s.conjugate(g.inv(x)));
    }
    all.sort();
    all.dedup();
    all
}

/// Coordinate or entry reduction from `src` onto `dst`.
fn reduction_map(src: &FiniteGroup, dst: &FiniteGroup) -> Option<Vec<Elem>> {
    if let (Some(ms), Some(md)) = (src.abelian_moduli(), dst.abelian_moduli()) {
        if ms.len() != md.len() || ms.iter().zip(md).any(|(a, b)| *b == 0 || a % b != 0) {
            return None;
        }
        let md = md.to_vec();
        return src
            .elements()
            .map(|x| {
                let r: Vec<u64> = src.repr(x).iter().zip(&md).map(|(c, m)| c % m).collect();
                dst.index_of(&r)
            })
            .collect();
    }
    if let (Some((ds, ms)), Some((dd, md))) = (src.matrix_shape(), dst.matrix_shape()) {
        if ds != dd || ms % md != 0 {
            return None;
        }
        return src
            .elements()
            .map(|x| {
                let r: Vec<u64> = src.repr(x).iter().map(|c| c % md).collect();
                dst.index_of(&r)
            })
            .collect();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Exponent;

    #[test]
    fn orders() {
        let sys = InverseSystem::cyclic_tower(&[3, 9, 27]).unwrap();
        assert_eq!(sys.order_sn(), Supernatural::prime_power(3, Exponent::Finite(3)).unwrap());
        let sys = InverseSystem::cyclic_tower(&[2, 6, 30]).unwrap();
        assert_eq!(sys.order_sn(), Supernatural::from_u64(30));
    }

    #[test]
    fn index_of_first_factor() {
        let sys = InverseSystem::abelian_tower(3, 2, 2).unwrap();
        let tower: Vec<Subgroup> = sys
            .levels()
            .iter()
            .map(|g| g.generated(&[g.index_of(&[1, 0]).unwrap()]))
            .collect();
        assert_eq!(sys.index_sn(&tower).unwrap(), Supernatural::from_u64(9));
        let mut bad = tower.clone();
        bad[0] = sys.level(0).whole();
        assert_eq!(sys.index_sn(&bad), Err(InvsysError::Incompatible { level: 0 }));
    }

    #[test]
    fn lifting() {
        let sys = InverseSystem::cyclic_tower(&[3, 9, 27]).unwrap();
        let t = sys.lift_tuple(1).unwrap().unwrap();
        assert_eq!(t[0].components, vec![1, 1, 1]);
        let e = FiniteGroup::elementary_abelian(3, 2).unwrap();
        let sys = InverseSystem::constant(&e, 3);
        assert!(sys.lift_tuple(1).unwrap().is_none());
        assert!(sys.lift_tuple(2).unwrap().is_some());
        let sys = InverseSystem::unitriangular_tower(3, 2).unwrap();
        let t = sys.lift_tuple(2).unwrap().unwrap();
        let top: Vec<Elem> = t.iter().map(|e| e.components[1]).collect();
        assert!(sys.level(1).generated(&top).is_whole());
    }

    #[test]
    fn sylow_towers() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let sys = InverseSystem::constant(&s3, 3);
        let tower = sys.sylow_tower(2);
        assert!(tower.iter().all(|s| s.order() == 2));
        assert_eq!(sys.sylow_towers(2, 10).len(), 3);

        let sys = InverseSystem::cyclic_tower(&[6, 12]).unwrap();
        let tower = sys.sylow_tower(2);
        assert_eq!(tower[0].element_vec(), vec![0, 3]);
        assert_eq!(tower[1].element_vec(), vec![0, 3, 6, 9]);
    }

    #[test]
    fn closure_examples() {
        let sys = InverseSystem::cyclic_tower(&[3, 9]).unwrap();
        let c = sys.closure(&[0]);
        assert_eq!(c.projections, vec![vec![0], vec![0]]);
        assert_eq!(c.hull, vec![0, 3, 6]);
        let c = sys.closure(&[0, 3, 6]);
        assert_eq!(c.projections[1], vec![0, 3, 6]);
    }

    #[test]
    fn validation_names_level() {
        let levels = vec![FiniteGroup::cyclic(3).unwrap(), FiniteGroup::cyclic(9).unwrap()];
        let bad = vec![(0..9).map(|x| (x * x % 3) as Elem).collect()];
        assert_eq!(InverseSystem::new(levels.clone(), bad).unwrap_err(), InvsysError::NotHomomorphism { level: 0 });
        let zero = vec![vec![0; 9]];
        assert_eq!(InverseSystem::new(levels, zero).unwrap_err(), InvsysError::NotSurjective { level: 0 });
    }
}
