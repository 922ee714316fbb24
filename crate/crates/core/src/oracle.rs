//! Brute-force reference computations. These deliberately avoid the library
//! algorithms they are used to check: closures are naive fixpoints, levels
//! come from power sets, and sublattices come from Hermite normal forms.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::fingroup::{Elem, FiniteGroup};
use crate::uniform::{GElement, UniformGroup};

/// Smallest subset containing `seeds` and 1 closed under products: every
/// element reached is multiplied on the right by every seed.
pub fn naive_closure(g: &FiniteGroup, seeds: &[Elem]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(g.order());
    bits.insert(g.identity() as usize);
    let mut work = vec![g.identity()];
    while let Some(a) = work.pop() {
        for &s in seeds {
            let c = g.mul(a, s);
            if !bits.put(c as usize) {
                work.push(c);
            }
        }
    }
    bits
}

/// Every subgroup, found by adjoining one element at a time to subgroups
/// already found, starting from the trivial subgroup.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<FixedBitSet> {
    let trivial = naive_closure(g, &[]);
    let mut seen: HashSet<FixedBitSet> = HashSet::from([trivial.clone()]);
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for x in g.elements() {
            if h.contains(x as usize) {
                continue;
            }
            let mut seeds: Vec<Elem> = h.ones().map(|e| e as Elem).collect();
            seeds.push(x);
            let k = naive_closure(g, &seeds);
            if seen.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    let mut out: Vec<FixedBitSet> = seen.into_iter().collect();
    out.sort_by_key(|b| (b.count_ones(..), b.ones().collect::<Vec<_>>()));
    out
}

/// Intersection of the maximal proper subgroups.
pub fn frattini(g: &FiniteGroup) -> FixedBitSet {
    let subs = all_subgroups(g);
    let proper: Vec<&FixedBitSet> = subs.iter().filter(|h| h.count_ones(..) < g.order()).collect();
    let mut acc = g.all_bits();
    for h in &proper {
        let maximal = !proper.iter().any(|k| k.count_ones(..) > h.count_ones(..) && h.is_subset(k));
        if maximal {
            acc.intersect_with(h);
        }
    }
    acc
}

/// `G^p [G, G]` from all p-th powers and all commutators.
pub fn power_commutator(g: &FiniteGroup, p: u64) -> FixedBitSet {
    let mut seeds: Vec<Elem> = g.elements().map(|x| (0..p).fold(g.identity(), |acc, _| g.mul(acc, x))).collect();
    for a in g.elements() {
        for b in g.elements() {
            seeds.push(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    naive_closure(g, &seeds)
}

/// `{x^e : x ∈ G}` by repeated multiplication.
pub fn power_image(g: &FiniteGroup, e: u64) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for x in g.elements() {
        bits.insert((0..e).fold(g.identity(), |acc, _| g.mul(acc, x)) as usize);
    }
    bits
}

/// Smallest number of elements generating `G`, by trying all tuples.
pub fn min_generators(g: &FiniteGroup, bits: &FixedBitSet) -> usize {
    let elems: Vec<Elem> = bits.ones().map(|e| e as Elem).collect();
    let target = elems.len();
    let mut d = 0;
    loop {
        let found = tuples(elems.len(), d).any(|t| {
            let seeds: Vec<Elem> = t.iter().map(|&i| elems[i]).collect();
            naive_closure(g, &seeds).count_ones(..) == target
        });
        if found {
            return d;
        }
        d += 1;
    }
}

fn tuples(n: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    crate::vc::Combinations::new(n, d)
}

/// Coordinates of every element of a uniform group's quotient, by forming
/// `x_1^{λ_1} ⋯ x_d^{λ_d}` with repeated multiplication for every λ.
pub fn coordinate_table(g: &UniformGroup) -> HashMap<GElement, Vec<u64>> {
    let pk = g.p().pow(g.precision());
    let gens = g.generators();
    let mut out = HashMap::new();
    for lambda in crate::linalg::all_vectors(g.dim(), pk) {
        let mut x = g.identity();
        for (h, &l) in gens.iter().zip(&lambda) {
            for _ in 0..l {
                x = g.mul(&x, h);
            }
        }
        out.insert(x, lambda);
    }
    out
}

/// `ω(x)`: the largest `n ≤ k + 1` with `x ∈ G^{p^{n-1}}`, where the power
/// sets are computed by repeated multiplication over the whole quotient.
pub fn omega_table(g: &UniformGroup) -> HashMap<GElement, u32> {
    let elems = g.elements();
    let p = g.p();
    let mut out: HashMap<GElement, u32> = HashMap::new();
    let mut current: Vec<GElement> = elems.clone();
    for n in 1..=g.precision() + 1 {
        for x in &current {
            out.insert(x.clone(), n);
        }
        let next: HashSet<GElement> =
            current.iter().map(|x| (1..p).fold(x.clone(), |acc, _| g.mul(&acc, x))).collect();
        current = next.into_iter().collect();
    }
    out
}

/// Subgroups of `(Z/p^k)^d` of index dividing `p^m` (`m ≤ k`), from the
/// column-style Hermite normal forms of sublattices of `Z^d` of that index:
/// upper triangular with diagonal `a_i`, entries in row `i` in `[0, a_i)`.
pub fn hnf_sublattices(p: u64, d: usize, k: u32, index: u64) -> Vec<HashSet<Vec<u64>>> {
    let pk = p.pow(k);
    let mut out = Vec::new();
    for diag in diagonals(d, index) {
        let free: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let ranges: Vec<u64> = free.iter().map(|&(i, _)| diag[i]).collect();
        for fill in mixed_radix(&ranges) {
            let mut cols = vec![vec![0u64; d]; d];
            for j in 0..d {
                cols[j][j] = diag[j];
            }
            for (&(i, j), &v) in free.iter().zip(&fill) {
                cols[j][i] = v;
            }
            out.push(span_mod(&cols, pk));
        }
    }
    out
}

fn diagonals(d: usize, n: u64) -> Vec<Vec<u64>> {
    if d == 0 {
        return if n == 1 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for a in (1..=n).filter(|a| n.is_multiple_of(*a)) {
        for mut rest in diagonals(d - 1, n / a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn mixed_radix(ranges: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &r in ranges {
        out = out.into_iter().flat_map(|v: Vec<u64>| (0..r).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn span_mod(cols: &[Vec<u64>], m: u64) -> HashSet<Vec<u64>> {
    let d = cols.len();
    let mut set: HashSet<Vec<u64>> = HashSet::from([vec![0; d]]);
    let mut frontier = vec![vec![0; d]];
    while let Some(v) = frontier.pop() {
        for c in cols {
            let w: Vec<u64> = v.iter().zip(c).map(|(a, b)| (a + b) % m).collect();
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

/// π_F(n) over a universe of at most 16 points, by sweeping all masks.
pub fn shatter_function(universe: usize, sets: &[u16], n: usize) -> u64 {
    let mut best = 0;
    for a in 0u32..(1 << universe) {
        if a.count_ones() as usize != n {
            continue;
        }
        let traces: HashSet<u16> = sets.iter().map(|s| s & a as u16).collect();
        best = best.max(traces.len() as u64);
    }
    if sets.is_empty() {
        return 0;
    }
    best
}

/// VC dimension over a universe of at most 16 points.
pub fn vc_dim(universe: usize, sets: &[u16]) -> u64 {
    let mut best = 0;
    for a in 0u32..(1 << universe) {
        let traces: HashSet<u16> = sets.iter().map(|s| s & a as u16).collect();
        if traces.len() == 1 << a.count_ones() {
            best = best.max(a.count_ones() as u64);
        }
    }
    best
}
