use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::GroupError;
use crate::padic::mod_inverse;

/// Index of an element in its group's carrier.
pub type Elem = u32;

/// Largest order for which a dense multiplication table is kept.
pub const TABLE_CAP: usize = 4096;

/// Matrix-backed groups up to this order also materialise a table.
const MATRIX_TABLE_CAP: usize = 2048;

/// Hard limit on carrier size for any backend.
pub const ORDER_CAP: usize = 1 << 20;

/// A concrete finite group with element-level operations.
///
/// Elements are the indices `0..order`. Cloning is cheap; the carrier and
/// its composition rule are shared.
#[derive(Clone)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

struct GroupData {
    name: String,
    order: usize,
    identity: Elem,
    inverse: Vec<Elem>,
    backend: Backend,
}

enum Backend {
    Table(Vec<Elem>),
    /// `Z/m_1 × … × Z/m_r`, index is mixed radix with the first coordinate most significant.
    Abelian { moduli: Vec<u64>, strides: Vec<u64> },
    Matrix(MatrixBackend),
}

struct MatrixBackend {
    dim: usize,
    modulus: u64,
    elems: Vec<Vec<u64>>,
    lookup: HashMap<Vec<u64>, Elem>,
    table: Option<Vec<Elem>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.data.name, self.data.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
    }
}

impl Eq for FiniteGroup {}

pub(crate) fn mat_mul(dim: usize, modulus: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let m = modulus as u128;
    let mut out = vec![0u64; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc: u128 = 0;
            for l in 0..dim {
                acc += a[i * dim + l] as u128 * b[l * dim + j] as u128;
            }
            out[i * dim + j] = (acc % m) as u64;
        }
    }
    out
}

pub(crate) fn mat_identity(dim: usize, modulus: u64) -> Vec<u64> {
    let mut out = vec![0u64; dim * dim];
    for i in 0..dim {
        out[i * dim + i] = 1 % modulus;
    }
    out
}

impl FiniteGroup {
    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn identity(&self) -> Elem {
        self.data.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.data.order as Elem
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.data.inverse[a as usize]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let n = self.data.order;
        match &self.data.backend {
            Backend::Table(t) => t[a as usize * n + b as usize],
            Backend::Abelian { moduli, strides } => {
                let (mut a, mut b) = (a as u64, b as u64);
                let mut idx = 0u64;
                for (m, s) in moduli.iter().zip(strides) {
                    let (ca, cb) = (a / s, b / s);
                    a %= s;
                    b %= s;
                    idx += ((ca + cb) % m) * s;
                }
                idx as Elem
            }
            Backend::Matrix(mb) => match &mb.table {
                Some(t) => t[a as usize * n + b as usize],
                None => {
                    let prod = mat_mul(mb.dim, mb.modulus, &mb.elems[a as usize], &mb.elems[b as usize]);
                    mb.lookup[&prod]
                }
            },
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ a g`.
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn comm(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: Elem) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Backend representation of an element: coordinates for abelian
    /// groups, row-major entries for matrix groups, the index otherwise.
    pub fn repr(&self, a: Elem) -> Vec<u64> {
        match &self.data.backend {
            Backend::Table(_) => vec![a as u64],
            Backend::Abelian { moduli, strides } => {
                let mut a = a as u64;
                moduli
                    .iter()
                    .zip(strides)
                    .map(|(_, s)| {
                        let c = a / s;
                        a %= s;
                        c
                    })
                    .collect()
            }
            Backend::Matrix(mb) => mb.elems[a as usize].clone(),
        }
    }

    pub fn index_of(&self, repr: &[u64]) -> Option<Elem> {
        match &self.data.backend {
            Backend::Table(_) => match repr {
                [a] if (*a as usize) < self.order() => Some(*a as Elem),
                _ => None,
            },
            Backend::Abelian { moduli, strides } => {
                if repr.len() != moduli.len() {
                    return None;
                }
                let mut idx = 0u64;
                for ((c, m), s) in repr.iter().zip(moduli).zip(strides) {
                    if c >= m {
                        return None;
                    }
                    idx += c * s;
                }
                Some(idx as Elem)
            }
            Backend::Matrix(mb) => mb.lookup.get(repr).copied(),
        }
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.data.backend {
            Backend::Table(_) => a.to_string(),
            _ => {
                let r: Vec<String> = self.repr(a).iter().map(u64::to_string).collect();
                format!("({})", r.join(","))
            }
        }
    }

    /// Moduli of an abelian-backend group.
    pub fn abelian_moduli(&self) -> Option<&[u64]> {
        match &self.data.backend {
            Backend::Abelian { moduli, .. } => Some(moduli),
            _ => None,
        }
    }

    /// `(dim, modulus)` of a matrix-backend group.
    pub fn matrix_shape(&self) -> Option<(usize, u64)> {
        match &self.data.backend {
            Backend::Matrix(mb) => Some((mb.dim, mb.modulus)),
            _ => None,
        }
    }

    fn build(name: String, identity: Elem, order: usize, backend: Backend) -> FiniteGroup {
        let mut g = FiniteGroup {
            data: Arc::new(GroupData { name, order, identity, inverse: Vec::new(), backend }),
        };
        let inverse = compute_inverses(&g);
        Arc::get_mut(&mut g.data).expect("fresh group is unshared").inverse = inverse;
        g
    }

    /// A group from a dense Cayley table, validated on construction.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<Elem>>) -> Result<FiniteGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > TABLE_CAP {
            return Err(GroupError::CapExceeded { what: "table order", limit: TABLE_CAP });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x as usize >= n) {
                return Err(GroupError::InvalidTable(format!("entry {bad} out of range in row {i}")));
            }
            flat.extend_from_slice(row);
        }
        validate_table(n, &flat)?;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] as usize == x && flat[x * n + e] as usize == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))? as Elem;
        Ok(Self::build(name.into(), identity, n, Backend::Table(flat)))
    }

    fn from_trusted_table(name: String, n: usize, flat: Vec<Elem>, identity: Elem) -> FiniteGroup {
        Self::build(name, identity, n, Backend::Table(flat))
    }

    /// `Z/m_1 × … × Z/m_r`.
    pub fn abelian(moduli: &[u64]) -> Result<FiniteGroup, GroupError> {
        if moduli.contains(&0) {
            return Err(GroupError::InvalidPreset("moduli must be positive".into()));
        }
        let order = moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m));
        let order = match order {
            Some(o) if o as usize <= ORDER_CAP => o as usize,
            _ => return Err(GroupError::CapExceeded { what: "group order", limit: ORDER_CAP }),
        };
        let mut strides = vec![1u64; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        let name = if moduli.is_empty() {
            "1".to_string()
        } else {
            moduli.iter().map(|m| format!("Z/{m}")).collect::<Vec<_>>().join(" x ")
        };
        Ok(Self::build(name, 0, order, Backend::Abelian { moduli: moduli.to_vec(), strides }))
    }

    pub fn cyclic(n: u64) -> Result<FiniteGroup, GroupError> {
        Self::abelian(&[n])
    }

    pub fn elementary_abelian(p: u64, rank: usize) -> Result<FiniteGroup, GroupError> {
        Self::abelian(&vec![p; rank])
    }

    /// `A × B` as a table; `(a, b)` has index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        if n > TABLE_CAP {
            return Err(GroupError::CapExceeded { what: "direct product order", limit: TABLE_CAP });
        }
        let mut flat = vec![0; n * n];
        for x in 0..n {
            let (xa, xb) = ((x / nb) as Elem, (x % nb) as Elem);
            for y in 0..n {
                let (ya, yb) = ((y / nb) as Elem, (y % nb) as Elem);
                flat[x * n + y] = a.mul(xa, ya) * nb as Elem + b.mul(xb, yb);
            }
        }
        let identity = a.identity() * nb as Elem + b.identity();
        Ok(Self::from_trusted_table(format!("({}) x ({})", a.name(), b.name()), n, flat, identity))
    }

    /// `Z/n ⋊ Z/m` with the generator of `Z/m` acting as multiplication by `r`.
    /// `(a, b)` has index `a·m + b`.
    pub fn semidirect_cyclic(n: u64, m: u64, r: u64) -> Result<FiniteGroup, GroupError> {
        let order = (n * m) as usize;
        if order > TABLE_CAP {
            return Err(GroupError::CapExceeded { what: "semidirect product order", limit: TABLE_CAP });
        }
        if mod_inverse(r % n, n).is_none() || pow_mod(r, m, n) != 1 % n {
            return Err(GroupError::InvalidPreset(format!("{r} does not define an action of Z/{m} on Z/{n}")));
        }
        let mut flat = vec![0; order * order];
        for x in 0..order as u64 {
            let (a1, b1) = (x / m, x % m);
            let twist = pow_mod(r, b1, n);
            for y in 0..order as u64 {
                let (a2, b2) = (y / m, y % m);
                let a = (a1 + twist * a2) % n;
                let b = (b1 + b2) % m;
                flat[(x * order as u64 + y) as usize] = (a * m + b) as Elem;
            }
        }
        Ok(Self::from_trusted_table(format!("Z/{n} : Z/{m} (r={r})"), order, flat, 0))
    }

    /// Closure of a set of permutations of `0..degree`, as a table.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::InvalidPreset(format!("{g:?} is not a permutation of 0..{degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..degree).map(|i| b[a[i]]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let c = compose(&elems[i], g);
                if !index.contains_key(&c) {
                    if elems.len() >= TABLE_CAP {
                        return Err(GroupError::CapExceeded { what: "permutation group order", limit: TABLE_CAP });
                    }
                    index.insert(c.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(c);
                }
            }
        }
        elems.sort();
        let index: HashMap<&[usize], usize> = elems.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
        let n = elems.len();
        let mut flat = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                flat[x * n + y] = index[compose(&elems[x], &elems[y]).as_slice()] as Elem;
            }
        }
        // The identity permutation sorts first.
        Ok(Self::from_trusted_table(name.into(), n, flat, 0))
    }

    pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
        if n <= 1 {
            return Self::from_permutations("S1", 1, &[]);
        }
        let transposition: Vec<usize> = (0..n).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(format!("S{n}"), n, &[transposition, cycle])
    }

    pub fn alternating(n: usize) -> Result<FiniteGroup, GroupError> {
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| (0..n).map(|i| if i == 0 { 1 } else if i == 1 { k } else if i == k { 0 } else { i }).collect())
            .collect();
        Self::from_permutations(format!("A{n}"), n.max(1), &gens)
    }

    /// The subgroup of `GL_dim(Z/modulus)` generated by `gens` (row-major).
    pub fn matrix_group(name: impl Into<String>, dim: usize, modulus: u64, gens: &[Vec<u64>]) -> Result<FiniteGroup, GroupError> {
        for g in gens {
            if g.len() != dim * dim || g.iter().any(|&x| x >= modulus) {
                return Err(GroupError::InvalidPreset(format!("bad {dim}x{dim} matrix over Z/{modulus}")));
            }
        }
        let id = mat_identity(dim, modulus);
        let mut elems = vec![id.clone()];
        let mut seen: HashMap<Vec<u64>, ()> = HashMap::from([(id, ())]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let c = mat_mul(dim, modulus, &elems[i], g);
                if !seen.contains_key(&c) {
                    if elems.len() >= ORDER_CAP {
                        return Err(GroupError::CapExceeded { what: "matrix group order", limit: ORDER_CAP });
                    }
                    seen.insert(c.clone(), ());
                    queue.push_back(elems.len());
                    elems.push(c);
                }
            }
        }
        Ok(Self::from_matrices(name, dim, modulus, elems))
    }

    /// A matrix group from its complete, multiplicatively closed element list.
    pub fn from_matrices(name: impl Into<String>, dim: usize, modulus: u64, mut elems: Vec<Vec<u64>>) -> FiniteGroup {
        elems.sort();
        elems.dedup();
        let lookup: HashMap<Vec<u64>, Elem> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as Elem)).collect();
        let identity = lookup[&mat_identity(dim, modulus)];
        let n = elems.len();
        let table = (n <= MATRIX_TABLE_CAP).then(|| {
            let mut flat = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    flat[x * n + y] = lookup[&mat_mul(dim, modulus, &elems[x], &elems[y])];
                }
            }
            flat
        });
        Self::build(name.into(), identity, n, Backend::Matrix(MatrixBackend { dim, modulus, elems, lookup, table }))
    }

    /// Upper unitriangular 3×3 matrices over `Z/p^level`.
    pub fn unitriangular(p: u64, level: u32) -> Result<FiniteGroup, GroupError> {
        let m = p.checked_pow(level).ok_or(GroupError::CapExceeded { what: "modulus", limit: u32::MAX as usize })?;
        let mut e12 = mat_identity(3, m);
        e12[1] = 1 % m;
        let mut e23 = mat_identity(3, m);
        e23[5] = 1 % m;
        Self::matrix_group(format!("UT3(Z/{m})"), 3, m, &[e12, e23])
    }

    /// Upper unitriangular 3×3 matrices with off-diagonal entries in
    /// `pZ/p^{level+1}`: the finite quotients of the congruence Heisenberg
    /// group, which are powerful for odd `p`.
    pub fn heisenberg_congruence(p: u64, level: u32) -> Result<FiniteGroup, GroupError> {
        let m = p.checked_pow(level + 1).ok_or(GroupError::CapExceeded { what: "modulus", limit: u32::MAX as usize })?;
        let gens: Vec<Vec<u64>> = [1usize, 2, 5]
            .iter()
            .map(|&pos| {
                let mut g = mat_identity(3, m);
                g[pos] = p % m;
                g
            })
            .collect();
        Self::matrix_group(format!("Heis(pZ/{m})"), 3, m, &gens)
    }

    pub fn trivial() -> FiniteGroup {
        Self::abelian(&[]).expect("trivial group")
    }

    /// Full subgroup as a bitset.
    pub fn all_bits(&self) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.order());
        b.insert_range(..);
        b
    }
}

fn compute_inverses(g: &FiniteGroup) -> Vec<Elem> {
    let n = g.order();
    let mut inv = vec![Elem::MAX; n];
    for a in 0..n as Elem {
        if inv[a as usize] != Elem::MAX {
            continue;
        }
        // Walk the cyclic subgroup; x = a^j, so a^{-j} = a^{o-j}.
        let mut powers = vec![g.identity()];
        let mut x = a;
        while x != g.identity() {
            powers.push(x);
            x = g.mul(x, a);
        }
        let o = powers.len();
        for j in 0..o {
            inv[powers[j] as usize] = powers[(o - j) % o];
        }
    }
    inv
}

pub(crate) fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Latin-square check plus Light's associativity test over a generating set.
fn validate_table(n: usize, t: &[Elem]) -> Result<(), GroupError> {
    for i in 0..n {
        let mut row = FixedBitSet::with_capacity(n);
        let mut col = FixedBitSet::with_capacity(n);
        for j in 0..n {
            row.insert(t[i * n + j] as usize);
            col.insert(t[j * n + i] as usize);
        }
        if row.count_ones(..) != n || col.count_ones(..) != n {
            return Err(GroupError::InvalidTable(format!("row or column {i} is not a permutation")));
        }
    }
    // Greedy generating set: closure of a Latin square under right
    // multiplication from any element reaches a sub-quasigroup; from the
    // full set of chosen generators the closure must become everything.
    let e = (0..n)
        .find(|&e| (0..n).all(|x| t[e * n + x] as usize == x && t[x * n + e] as usize == x))
        .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
    let mut gens: Vec<usize> = Vec::new();
    let mut reached = FixedBitSet::with_capacity(n);
    reached.insert(e);
    for x in 0..n {
        if reached.contains(x) {
            continue;
        }
        gens.push(x);
        let mut queue: VecDeque<usize> = reached.ones().collect();
        while let Some(y) = queue.pop_front() {
            for &g in &gens {
                let z = t[y * n + g] as usize;
                if !reached.contains(z) {
                    reached.insert(z);
                    queue.push_back(z);
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = t[x * n + y] as usize;
            for &g in &gens {
                if t[xy * n + g] != t[x * n + t[y * n + g] as usize] {
                    return Err(GroupError::InvalidTable(format!("not associative at ({x}, {y}, {g})")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_group_axioms(g: &FiniteGroup) {
        let e = g.identity();
        for a in g.elements() {
            assert_eq!(g.mul(a, e), a);
            assert_eq!(g.mul(a, g.inv(a)), e);
            for b in g.elements() {
                for c in g.elements().step_by(7) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn constructed_groups_satisfy_axioms() {
        for g in [
            FiniteGroup::cyclic(9).unwrap(),
            FiniteGroup::abelian(&[3, 9]).unwrap(),
            FiniteGroup::unitriangular(3, 1).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::semidirect_cyclic(7, 3, 2).unwrap(),
            FiniteGroup::direct_product(&FiniteGroup::symmetric(3).unwrap(), &FiniteGroup::cyclic(4).unwrap()).unwrap(),
        ] {
            assert_group_axioms(&g);
        }
    }

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::unitriangular(3, 2).unwrap().order(), 729);
        assert_eq!(FiniteGroup::heisenberg_congruence(3, 1).unwrap().order(), 27);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::alternating(4).unwrap().order(), 12);
        assert_eq!(FiniteGroup::semidirect_cyclic(5, 2, 4).unwrap().order(), 10);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn abelian_repr_round_trip() {
        let g = FiniteGroup::abelian(&[9, 3]).unwrap();
        for a in g.elements() {
            assert_eq!(g.index_of(&g.repr(a)), Some(a));
        }
        assert_eq!(g.repr(5), vec![1, 2]);
        assert_eq!(g.index_of(&[1, 3]), None);
    }

    #[test]
    fn table_validation() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert!(FiniteGroup::from_table("Z3", z3).is_ok());
        let not_latin = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(matches!(FiniteGroup::from_table("x", not_latin), Err(GroupError::InvalidTable(_))));
        // A Latin square with identity that is not associative (loop of order 5).
        let lp = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("loop", lp), Err(GroupError::InvalidTable(_))));
        assert!(matches!(FiniteGroup::from_table("x", vec![vec![0, 1]]), Err(GroupError::InvalidTable(_))));
    }

    #[test]
    fn semidirect_rejects_bad_action() {
        assert!(FiniteGroup::semidirect_cyclic(7, 3, 3).is_err());
    }
}
