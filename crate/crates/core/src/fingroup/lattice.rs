use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::group::{Elem, FiniteGroup};
use super::subgroup::Subgroup;
use super::GroupError;
use crate::padic::is_prime;

/// Largest group order for which the full subgroup lattice is enumerated.
pub const ENUMERATION_CAP: usize = 2048;

/// Upper bound on the number of subgroups kept during enumeration.
const SUBGROUP_COUNT_CAP: usize = 200_000;

pub fn is_solvable(g: &FiniteGroup) -> bool {
    let mut current = g.whole();
    loop {
        if current.is_trivial() {
            return true;
        }
        let next = current.commutator(&current);
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
}

/// Every subgroup of `g`, sorted canonically (by order, then element list).
pub fn all_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    if g.order() > ENUMERATION_CAP {
        return Err(GroupError::CapExceeded { what: "subgroup enumeration order", limit: ENUMERATION_CAP });
    }
    let mut subs = if is_solvable(g) { cyclic_extension(g)? } else { join_closure(g)? };
    subs.sort();
    Ok(subs)
}

/// Each subgroup H ≠ 1 of a solvable group has a normal subgroup K of prime
/// index, so H = K⟨x⟩ for some x normalising K with x^q ∈ K. Growing every
/// found subgroup by such elements reaches the whole lattice.
fn cyclic_extension(g: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    let trivial = g.trivial_subgroup();
    let mut seen: HashSet<FixedBitSet> = HashSet::from([trivial.bits().clone()]);
    let mut found = vec![trivial];
    let mut next = 0;
    while next < found.len() {
        let k = found[next].clone();
        next += 1;
        let mut covered = k.bits().clone();
        for x in g.elements() {
            if covered.contains(x as usize) || !k.is_normalized_by(x) {
                continue;
            }
            let mut m = 1u64;
            let mut y = x;
            while !k.contains(y) {
                y = g.mul(y, x);
                m += 1;
            }
            if !is_prime(m) {
                continue;
            }
            let mut bits = k.bits().clone();
            let mut xi = x;
            for _ in 1..m {
                for h in k.elements() {
                    bits.insert(g.mul(xi, h) as usize);
                }
                xi = g.mul(xi, x);
            }
            covered.union_with(&bits);
            if seen.insert(bits.clone()) {
                let mut gens = k.generators().to_vec();
                gens.push(x);
                found.push(Subgroup::from_parts(g, bits, gens));
                if found.len() > SUBGROUP_COUNT_CAP {
                    return Err(GroupError::CapExceeded { what: "subgroup count", limit: SUBGROUP_COUNT_CAP });
                }
            }
        }
    }
    Ok(found)
}

/// Fallback for non-solvable groups: close the set of cyclic subgroups
/// under joins.
fn join_closure(g: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut cyclic = Vec::new();
    for x in g.elements() {
        let c = g.generated(&[x]);
        if seen.insert(c.bits().clone()) {
            cyclic.push(c);
        }
    }
    let mut found = cyclic.clone();
    let mut next = 0;
    while next < found.len() {
        let h = found[next].clone();
        next += 1;
        for c in &cyclic {
            if c.is_subset(&h) {
                continue;
            }
            let j = h.join(c);
            if seen.insert(j.bits().clone()) {
                found.push(j);
                if found.len() > SUBGROUP_COUNT_CAP {
                    return Err(GroupError::CapExceeded { what: "subgroup count", limit: SUBGROUP_COUNT_CAP });
                }
            }
        }
    }
    Ok(found)
}

/// Subgroups of index at most `n`, canonically sorted.
pub fn subgroups_up_to_index(g: &FiniteGroup, n: usize) -> Result<Vec<Subgroup>, GroupError> {
    Ok(all_subgroups(g)?.into_iter().filter(|h| h.index() <= n).collect())
}

/// Maximal proper subgroups, canonically sorted.
pub fn maximal_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    let mut proper: Vec<Subgroup> = all_subgroups(g)?.into_iter().filter(|h| !h.is_whole()).collect();
    proper.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.cmp(b)));
    let mut maximal: Vec<Subgroup> = Vec::new();
    for h in proper {
        if !maximal.iter().any(|m| h.is_subset(m)) {
            maximal.push(h);
        }
    }
    maximal.sort();
    Ok(maximal)
}

/// Elements in a canonical cyclic-subgroup transversal: one generator per
/// distinct cyclic subgroup, in ascending element order.
pub(crate) fn cyclic_generators(h: &Subgroup) -> Vec<Elem> {
    let g = h.group();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut out = Vec::new();
    for x in h.elements() {
        if x == g.identity() {
            continue;
        }
        if seen.insert(g.generated(&[x]).bits().clone()) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_small_groups() {
        let cases: [(FiniteGroup, usize); 7] = [
            (FiniteGroup::cyclic(9).unwrap(), 3),
            (FiniteGroup::elementary_abelian(3, 2).unwrap(), 6),
            (FiniteGroup::symmetric(3).unwrap(), 6),
            (FiniteGroup::symmetric(4).unwrap(), 30),
            (FiniteGroup::alternating(4).unwrap(), 10),
            (FiniteGroup::alternating(5).unwrap(), 59),
            (FiniteGroup::unitriangular(3, 1).unwrap(), 19),
        ];
        for (g, n) in cases {
            assert_eq!(all_subgroups(&g).unwrap().len(), n, "{}", g.name());
        }
    }

    #[test]
    fn solvability() {
        assert!(is_solvable(&FiniteGroup::symmetric(4).unwrap()));
        assert!(!is_solvable(&FiniteGroup::alternating(5).unwrap()));
    }

    #[test]
    fn index_filter_in_z9_squared() {
        let g = FiniteGroup::abelian(&[9, 9]).unwrap();
        assert_eq!(subgroups_up_to_index(&g, 3).unwrap().len(), 5);
        assert_eq!(subgroups_up_to_index(&g, 9).unwrap().len(), 18);
    }

    #[test]
    fn maximal_subgroups_of_s3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let orders: Vec<usize> = maximal_subgroups(&g).unwrap().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![2, 2, 2, 3]);
    }

    #[test]
    fn cap_is_enforced() {
        let g = FiniteGroup::cyclic(4096).unwrap();
        assert!(matches!(all_subgroups(&g), Err(GroupError::CapExceeded { .. })));
    }
}
