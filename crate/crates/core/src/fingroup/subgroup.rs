use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use super::group::{Elem, FiniteGroup};

/// A subgroup of a [`FiniteGroup`], stored as a bitset over the carrier
/// together with a generating set.
#[derive(Clone)]
pub struct Subgroup {
    group: FiniteGroup,
    elements: FixedBitSet,
    generators: Vec<Elem>,
    order: usize,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {})", self.order, self.group.name())
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by order, then by the ascending element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order).then_with(|| self.elements.ones().cmp(other.elements.ones()))
    }
}

/// Close `seed` (which must contain the identity and lie in `⟨gens⟩`)
/// under right multiplication by `gens`.
pub(crate) fn close(group: &FiniteGroup, mut seed: FixedBitSet, gens: &[Elem]) -> FixedBitSet {
    let mut queue: VecDeque<Elem> = seed.ones().map(|x| x as Elem).collect();
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = group.mul(x, g);
            if !seed.contains(y as usize) {
                seed.insert(y as usize);
                queue.push_back(y);
            }
        }
    }
    seed
}

impl FiniteGroup {
    pub fn whole(&self) -> Subgroup {
        let bits = self.all_bits();
        Subgroup::from_elements(self, bits)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(self.identity() as usize);
        Subgroup { group: self.clone(), elements: bits, generators: Vec::new(), order: 1 }
    }

    /// `⟨S⟩`: the smallest subgroup containing `seed`.
    pub fn generated(&self, seed: &[Elem]) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(self.identity() as usize);
        let gens: Vec<Elem> = seed.iter().copied().filter(|&g| g != self.identity()).collect();
        let elements = close(self, bits, &gens);
        let order = elements.count_ones(..);
        Subgroup { group: self.clone(), elements, generators: gens, order }
    }
}

impl Subgroup {
    /// Wrap a bitset already known to be a subgroup; a generating set is
    /// chosen greedily in ascending element order.
    pub fn from_elements(group: &FiniteGroup, elements: FixedBitSet) -> Subgroup {
        let mut reached = FixedBitSet::with_capacity(group.order());
        reached.insert(group.identity() as usize);
        let mut gens = Vec::new();
        for x in elements.ones() {
            if !reached.contains(x) {
                gens.push(x as Elem);
                reached = close(group, reached, &gens);
            }
        }
        debug_assert_eq!(reached, elements, "bitset is not a subgroup");
        let order = elements.count_ones(..);
        Subgroup { group: group.clone(), elements, generators: gens, order }
    }

    /// Build a subgroup from trusted parts.
    pub(crate) fn from_parts(group: &FiniteGroup, elements: FixedBitSet, generators: Vec<Elem>) -> Subgroup {
        let order = elements.count_ones(..);
        Subgroup { group: group.clone(), elements, generators, order }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.contains(x as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements.ones().map(|x| x as Elem)
    }

    pub fn element_vec(&self) -> Vec<Elem> {
        self.elements().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.group.order()
    }

    /// `|G : H|` in the ambient group.
    pub fn index(&self) -> usize {
        self.group.order() / self.order
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut bits = self.elements.clone();
        bits.intersect_with(&other.elements);
        Subgroup::from_elements(&self.group, bits)
    }

    /// `⟨H ∪ K⟩`.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        if other.is_subset(self) {
            return self.clone();
        }
        if self.is_subset(other) {
            return other.clone();
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().copied().filter(|&g| !self.contains(g)));
        let elements = close(&self.group, self.elements.clone(), &gens);
        Subgroup::from_parts(&self.group, elements, gens)
    }

    /// `⟨H, g⟩`.
    pub fn extend(&self, g: Elem) -> Subgroup {
        if self.contains(g) {
            return self.clone();
        }
        let mut gens = self.generators.clone();
        gens.push(g);
        let elements = close(&self.group, self.elements.clone(), &gens);
        Subgroup::from_parts(&self.group, elements, gens)
    }

    pub fn is_normalized_by(&self, g: Elem) -> bool {
        self.generators.iter().all(|&h| self.contains(self.group.conj(h, g)))
    }

    /// Normal in `ambient` (which must contain `self`).
    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        ambient.generators.iter().all(|&g| self.is_normalized_by(g))
    }

    pub fn normalizer_in(&self, ambient: &Subgroup) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for g in ambient.elements() {
            if self.is_normalized_by(g) {
                bits.insert(g as usize);
            }
        }
        Subgroup::from_elements(&self.group, bits)
    }

    /// `g⁻¹ H g`.
    pub fn conjugate(&self, g: Elem) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for h in self.elements() {
            bits.insert(self.group.conj(h, g) as usize);
        }
        let gens = self.generators.iter().map(|&h| self.group.conj(h, g)).collect();
        Subgroup::from_parts(&self.group, bits, gens)
    }

    /// Normal closure of `self` in `ambient`.
    pub fn normal_closure_in(&self, ambient: &Subgroup) -> Subgroup {
        let mut current = self.clone();
        loop {
            let missing = current.generators.iter().find_map(|&h| {
                ambient.generators.iter().map(|&g| self.group.conj(h, g)).find(|&c| !current.contains(c))
            });
            match missing {
                Some(c) => current = current.extend(c),
                None => return current,
            }
        }
    }

    /// `[A, B]`: the normal closure in `⟨A, B⟩` of the commutators of generators.
    pub fn commutator(&self, other: &Subgroup) -> Subgroup {
        let g = &self.group;
        let comms: Vec<Elem> = self
            .generators
            .iter()
            .flat_map(|&a| other.generators.iter().map(move |&b| g.comm(a, b)))
            .collect();
        let seed = g.generated(&comms);
        seed.normal_closure_in(&self.join(other))
    }

    /// `H^n = ⟨hⁿ : h ∈ H⟩`.
    pub fn power_subgroup(&self, n: u64) -> Subgroup {
        let g = &self.group;
        let mut current = g.trivial_subgroup();
        for h in self.elements() {
            let x = g.pow(h, n);
            if !current.contains(x) {
                current = current.extend(x);
            }
        }
        current
    }

    /// The set `{hⁿ : h ∈ H}` (not necessarily a subgroup).
    pub fn power_set(&self, n: u64) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for h in self.elements() {
            bits.insert(self.group.pow(h, n) as usize);
        }
        bits
    }

    /// Left cosets `xN` of a subgroup `N ≤ H`: maps each element of `H`
    /// to the least element of its coset. Returns (representatives, map).
    pub fn coset_reps(&self, n: &Subgroup) -> (Vec<Elem>, Vec<Option<Elem>>) {
        let g = &self.group;
        let mut rep_of: Vec<Option<Elem>> = vec![None; g.order()];
        let mut reps = Vec::new();
        for x in self.elements() {
            if rep_of[x as usize].is_some() {
                continue;
            }
            reps.push(x);
            for y in n.elements() {
                rep_of[g.mul(x, y) as usize] = Some(x);
            }
        }
        (reps, rep_of)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_in_c9() {
        let g = FiniteGroup::cyclic(9).unwrap();
        assert_eq!(g.generated(&[3]).element_vec(), vec![0, 3, 6]);
        assert!(g.generated(&[2]).is_whole());
        assert!(g.generated(&[]).is_trivial());
    }

    fn brute_commutator(a: &Subgroup, b: &Subgroup) -> Subgroup {
        let g = a.group();
        let comms: Vec<Elem> = a.elements().flat_map(|x| b.elements().map(move |y| g.comm(x, y))).collect();
        g.generated(&comms)
    }

    #[test]
    fn commutator_matches_brute_force() {
        for g in [
            FiniteGroup::unitriangular(3, 1).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::unitriangular(3, 2).unwrap(),
        ] {
            let w = g.whole();
            let c = w.commutator(&w);
            assert_eq!(c, brute_commutator(&w, &w));
        }
        let ut = FiniteGroup::unitriangular(3, 1).unwrap();
        let w = ut.whole();
        let c = w.commutator(&w);
        assert_eq!(c.order(), 3);
        // the derived subgroup of UT3(F3) is its centre
        assert!(ut.elements().all(|x| c.elements().all(|z| ut.mul(x, z) == ut.mul(z, x))));
    }

    #[test]
    fn mixed_commutator_matches_brute_force() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let w = s4.whole();
        let a4 = w.commutator(&w);
        assert_eq!(a4.order(), 12);
        let h = s4.generated(&[1]);
        assert_eq!(h.commutator(&a4), brute_commutator(&h, &a4));
    }

    #[test]
    fn power_subgroup_of_exponent_p_group_is_trivial() {
        let ut = FiniteGroup::unitriangular(3, 1).unwrap();
        assert!(ut.whole().power_subgroup(3).is_trivial());
        let c9 = FiniteGroup::cyclic(9).unwrap();
        assert_eq!(c9.whole().power_subgroup(3).element_vec(), vec![0, 3, 6]);
    }

    #[test]
    fn from_elements_recovers_generators() {
        let g = FiniteGroup::abelian(&[9, 9]).unwrap();
        let h = g.generated(&[g.index_of(&[3, 0]).unwrap(), g.index_of(&[0, 1]).unwrap()]);
        let again = Subgroup::from_elements(&g, h.bits().clone());
        assert_eq!(again, h);
        assert_eq!(g.generated(again.generators()), h);
    }

    #[test]
    fn cosets_partition() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let w = g.whole();
        let n = w.commutator(&w);
        let (reps, map) = w.coset_reps(&n);
        assert_eq!(reps.len(), 2);
        assert!(map.iter().all(Option::is_some));
    }
}
