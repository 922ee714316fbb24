//! Small dense linear algebra over `F_p`.

/// Reduced row echelon form; zero rows are dropped.
pub fn rref(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inverse(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    rref(rows, p).len()
}

fn inverse(a: u64, p: u64) -> u64 {
    crate::padic::mod_inverse(a, p).expect("nonzero element of F_p")
}

pub fn in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with, p) == rank(rows, p)
}

/// Coefficients `c` with `Σ c_j basis_j = target`, if any. `basis` need not
/// be independent; the first solution found by elimination is returned.
pub fn solve(basis: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = basis.len();
    let dim = target.len();
    // Augmented system: rows are coordinates, columns are basis vectors.
    let mut m: Vec<Vec<u64>> =
        (0..dim).map(|i| basis.iter().map(|b| b[i] % p).chain(std::iter::once(target[i] % p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..n {
        let Some(piv) = (row..dim).find(|&r| m[r][c] != 0) else { continue };
        m.swap(row, piv);
        let inv = inverse(m[row][c], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..dim {
            if r != row && m[r][c] != 0 {
                let f = m[r][c];
                let pivot = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if m[row..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n];
    }
    Some(x)
}

/// All vectors of `F_p^d`, lexicographic with the first coordinate most
/// significant.
pub fn all_vectors(d: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(d as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0; d];
        for slot in v.iter_mut().rev() {
            *slot = code % p;
            code /= p;
        }
        v
    })
}

/// Every subspace of the row space of `basis` (assumed independent), each
/// given by an RREF basis in the ambient coordinates.
pub fn subspaces_of(basis: &[Vec<u64>], p: u64) -> Vec<Vec<Vec<u64>>> {
    let r = basis.len();
    let mut out = Vec::new();
    for s in 0..=r {
        for coeffs in rref_matrices(s, r, p) {
            let rows: Vec<Vec<u64>> = coeffs
                .iter()
                .map(|c| {
                    let dim = basis.first().map_or(0, Vec::len);
                    (0..dim).map(|i| c.iter().zip(basis).map(|(a, b)| a * b[i]).sum::<u64>() % p).collect()
                })
                .collect();
            out.push(rref(&rows, p));
        }
    }
    out
}

/// All `s × r` matrices in reduced row echelon form with rank `s`.
fn rref_matrices(s: usize, r: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for pivots in combinations(r, s) {
        let free: Vec<(usize, usize)> = (0..s)
            .flat_map(|i| ((pivots[i] + 1)..r).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        for fill in all_vectors(free.len(), p) {
            let mut m = vec![vec![0; r]; s];
            for (i, &c) in pivots.iter().enumerate() {
                m[i][c] = 1;
            }
            for (&(i, c), &v) in free.iter().zip(&fill) {
                m[i][c] = v;
            }
            out.push(m);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(d: usize) -> Vec<Vec<u64>> {
        (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect()
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        // subspaces of F_3^2: 1 + 4 + 1; of F_3^3: 1 + 13 + 13 + 1; of F_2^4: 1+15+35+15+1
        assert_eq!(subspaces_of(&identity(2), 3).len(), 6);
        assert_eq!(subspaces_of(&identity(3), 3).len(), 28);
        assert_eq!(subspaces_of(&identity(4), 2).len(), 67);
    }

    #[test]
    fn solving() {
        let basis = vec![vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(solve(&basis, &[1, 2, 1], 3), Some(vec![1, 1]));
        assert_eq!(solve(&basis, &[1, 0, 0], 3), None);
        assert!(in_span(&basis, &[2, 0, 1], 3));
        assert_eq!(rank(&basis, 3), 2);
    }
}
