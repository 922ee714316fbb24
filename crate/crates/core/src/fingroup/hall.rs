use super::group::{Elem, FiniteGroup};
use super::lattice::all_subgroups;
use super::subgroup::Subgroup;
use super::GroupError;
use crate::padic::factorize;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A Sylow p-subgroup, grown one step at a time: while `p` divides
/// `|N(P) : P|`, some `x ∈ N(P) \ P` has `x^p ∈ P`, and `P⟨x⟩` is again a
/// p-group. The first such `x` in element order is taken.
pub fn sylow(g: &FiniteGroup, p: u64) -> Subgroup {
    let target: usize = factorize(g.order() as u64)
        .into_iter()
        .find(|&(q, _)| q == p)
        .map_or(1, |(q, e)| q.pow(e) as usize);
    if target == g.order() {
        return g.whole();
    }
    let mut s = g.trivial_subgroup();
    while s.order() < target {
        let x = g
            .elements()
            .find(|&x| !s.contains(x) && s.contains(g.pow(x, p)) && s.is_normalized_by(x))
            .expect("Cauchy's theorem in N(P)/P");
        s = s.extend(x);
    }
    s
}

/// A π-Hall subgroup, or `None` when there is none. The first subgroup of
/// the right order in canonical order is returned.
pub fn hall(g: &FiniteGroup, pi: &[u64]) -> Result<Option<Subgroup>, GroupError> {
    let factors = factorize(g.order() as u64);
    let target: usize = factors.iter().filter(|(q, _)| pi.contains(q)).map(|&(q, e)| q.pow(e) as usize).product();
    if target == g.order() {
        return Ok(Some(g.whole()));
    }
    if target == 1 {
        return Ok(Some(g.trivial_subgroup()));
    }
    if let [(p, _)] = factors.iter().filter(|(q, _)| pi.contains(q)).copied().collect::<Vec<_>>().as_slice() {
        return Ok(Some(sylow(g, *p)));
    }
    Ok(all_subgroups(g)?.into_iter().find(|h| h.order() == target))
}

fn check_normal_hall(k: &Subgroup) -> Result<(), GroupError> {
    if gcd(k.order(), k.index()) != 1 {
        return Err(GroupError::NotHall);
    }
    if !k.is_normal_in(&k.group().whole()) {
        return Err(GroupError::NotNormal);
    }
    Ok(())
}

/// A complement to a normal Hall subgroup `K`: a Hall subgroup for the
/// primes of `|G : K|`.
pub fn schur_zassenhaus(k: &Subgroup) -> Result<Subgroup, GroupError> {
    check_normal_hall(k)?;
    let g = k.group();
    let pi: Vec<u64> = factorize(k.index() as u64).into_iter().map(|(q, _)| q).collect();
    let h = hall(g, &pi)?.expect("a normal Hall subgroup has a complement");
    debug_assert!(h.intersection(k).is_trivial() && h.order() * k.order() == g.order());
    Ok(h)
}

/// Every complement to a normal Hall subgroup `K`, canonically sorted.
pub fn complements(k: &Subgroup) -> Result<Vec<Subgroup>, GroupError> {
    check_normal_hall(k)?;
    Ok(all_subgroups(k.group())?
        .into_iter()
        .filter(|h| h.order() == k.index() && h.intersection(k).is_trivial())
        .collect())
}

/// The first `g` in element order with `g⁻¹ L g = H`.
pub fn conjugator(l: &Subgroup, h: &Subgroup) -> Option<Elem> {
    if l.order() != h.order() {
        return None;
    }
    let g = l.group();
    g.elements().find(|&x| l.generators().iter().all(|&y| h.contains(g.conj(y, x))))
}
