//! Uniform pro-p groups at working precision `k`, realised as the finite
//! quotient `G/G_{k+1}`.
//!
//! Two backends: `Z_p^d` with coordinates mod `p^k`, and the congruence
//! subgroup `GL_n^1(Z_p)` (matrices ≡ 1 mod p) with entries mod `p^{k+1}`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fingroup::{
    is_powerful, lower_p_series, mat_identity, mat_mul, p_group_prime, theta_from_series, Elem, FiniteGroup,
    GroupError, Subgroup,
};
use crate::padic::{checked_pow, is_prime, valuation_u64, PAdicInt, PadicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniformError {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("dimension must be positive")]
    BadDimension,
    #[error("requested level {requested} exceeds working precision {k}")]
    PrecisionExceeded { requested: u32, k: u32 },
    #[error("element has omega {omega}, not in level {n}")]
    NotInLevel { n: u32, omega: Omega },
    #[error("malformed element for this group")]
    BadElement,
    #[error("invalid uniform group preset: {0}")]
    InvalidPreset(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// `Z_p^d`, generated by the standard basis.
    AbelianFree,
    /// `GL_n^1(Z_p)`, `d = n²`, generated by `I + pE_rs` in row-major order.
    CongruenceMatrix { n: usize },
}

/// An element of `G/G_{k+1}`: coordinates mod `p^k`, or a matrix
/// (row-major) mod `p^{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElement(pub Vec<u64>);

impl Serialize for GElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// `ω(g)`: the lower p-series level of `g`, or `AtLeast(k+1)` for the
/// identity at precision `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Omega {
    Exact(u32),
    AtLeast(u32),
}

impl Omega {
    /// The level as a number, `k + 1` for the identity.
    pub fn level(self) -> u32 {
        match self {
            Omega::Exact(n) | Omega::AtLeast(n) => n,
        }
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Omega::Exact(n) => write!(f, "{n}"),
            Omega::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for Omega {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Omega::Exact(n) => s.serialize_u32(*n),
            Omega::AtLeast(n) => s.serialize_str(&format!(">={n}")),
        }
    }
}

/// `λ ∈ Z_p^d` at precision `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateVector(pub Vec<PAdicInt>);

impl CoordinateVector {
    pub fn from_residues(p: u64, k: u32, residues: &[u64]) -> Result<Self, PadicError> {
        residues.iter().map(|&r| PAdicInt::new(p, k, r as i128)).collect::<Result<_, _>>().map(CoordinateVector)
    }

    pub fn residues(&self) -> Vec<u64> {
        self.0.iter().map(PAdicInt::residue).collect()
    }
}

impl Serialize for CoordinateVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.residues().serialize(s)
    }
}

pub struct UniformGroup {
    p: u64,
    d: usize,
    k: u32,
    backend: Backend,
    /// `p^k`: coordinate modulus.
    pk: u64,
    /// `p^{k+1}`: matrix entry modulus.
    entry_modulus: u64,
    quotient: OnceLock<FiniteGroup>,
}

impl Clone for UniformGroup {
    fn clone(&self) -> Self {
        let q = OnceLock::new();
        if let Some(g) = self.quotient.get() {
            let _ = q.set(g.clone());
        }
        UniformGroup { quotient: q, ..*self }
    }
}

impl fmt::Debug for UniformGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniformGroup({})", self.name())
    }
}

/// Working precision used when none is given.
pub fn default_precision(d: usize) -> u32 {
    if d <= 2 {
        3
    } else {
        2
    }
}

fn check_prime(p: u64) -> Result<(), UniformError> {
    if p == 2 || !is_prime(p) {
        return Err(UniformError::BadPrime(p));
    }
    Ok(())
}

impl UniformGroup {
    pub fn abelian(p: u64, d: usize, k: u32) -> Result<Self, UniformError> {
        check_prime(p)?;
        if d == 0 {
            return Err(UniformError::BadDimension);
        }
        Self::build(p, d, k, Backend::AbelianFree)
    }

    pub fn congruence(p: u64, n: usize, k: u32) -> Result<Self, UniformError> {
        check_prime(p)?;
        if n == 0 {
            return Err(UniformError::BadDimension);
        }
        Self::build(p, n * n, k, Backend::CongruenceMatrix { n })
    }

    fn build(p: u64, d: usize, k: u32, backend: Backend) -> Result<Self, UniformError> {
        if k == 0 {
            return Err(PadicError::ZeroPrecision.into());
        }
        // PAdicInt bound on p^k, plus headroom for entry products mod p^{k+1}.
        let entry_modulus = checked_pow(p, k + 1).filter(|&m| m < 1 << 31).ok_or(PadicError::Overflow { p, k })?;
        PAdicInt::new(p, k, 0)?;
        Ok(UniformGroup { p, d, k, backend, pk: entry_modulus / p, entry_modulus, quotient: OnceLock::new() })
    }

    /// The same group at another working precision.
    pub fn with_precision(&self, k: u32) -> Result<Self, UniformError> {
        Self::build(self.p, self.d, k, self.backend)
    }

    /// Image of an element of `from` (same group, precision at least ours)
    /// in our quotient.
    pub fn truncate_from(&self, from: &UniformGroup, g: &GElement) -> GElement {
        debug_assert!(from.k >= self.k && from.backend == self.backend);
        let m = if self.matrix_dim().is_some() { self.entry_modulus } else { self.pk };
        GElement(g.0.iter().map(|&c| c % m).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn name(&self) -> String {
        match self.backend {
            Backend::AbelianFree => format!("abelian:{},{},{}", self.p, self.d, self.k),
            Backend::CongruenceMatrix { n } => format!("congruence:{},{},{}", self.p, n, self.k),
        }
    }

    fn matrix_dim(&self) -> Option<usize> {
        match self.backend {
            Backend::AbelianFree => None,
            Backend::CongruenceMatrix { n } => Some(n),
        }
    }

    pub fn identity(&self) -> GElement {
        match self.matrix_dim() {
            None => GElement(vec![0; self.d]),
            Some(n) => GElement(mat_identity(n, self.entry_modulus)),
        }
    }

    /// The fixed topological generators `x_1, …, x_d`.
    pub fn generators(&self) -> Vec<GElement> {
        (0..self.d)
            .map(|j| match self.matrix_dim() {
                None => {
                    let mut v = vec![0; self.d];
                    v[j] = 1 % self.pk;
                    GElement(v)
                }
                Some(n) => {
                    let mut m = mat_identity(n, self.entry_modulus);
                    m[j] = (m[j] + self.p) % self.entry_modulus;
                    GElement(m)
                }
            })
            .collect()
    }

    /// Check that `g` is a well-formed element of `G/G_{k+1}`.
    pub fn validate(&self, g: &GElement) -> Result<(), UniformError> {
        let ok = match self.matrix_dim() {
            None => g.0.len() == self.d && g.0.iter().all(|&c| c < self.pk),
            Some(n) => {
                g.0.len() == n * n
                    && g.0.iter().enumerate().all(|(idx, &c)| {
                        let want = if idx / n == idx % n { 1 } else { 0 };
                        c < self.entry_modulus && c % self.p == want
                    })
            }
        };
        if ok {
            Ok(())
        } else {
            Err(UniformError::BadElement)
        }
    }

    pub fn mul(&self, a: &GElement, b: &GElement) -> GElement {
        match self.matrix_dim() {
            None => GElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.pk).collect()),
            Some(n) => GElement(mat_mul(n, self.entry_modulus, &a.0, &b.0)),
        }
    }

    /// `g^e` for a natural exponent.
    pub fn pow(&self, g: &GElement, mut e: u64) -> GElement {
        if self.matrix_dim().is_none() {
            let e = e % self.pk;
            return GElement(g.0.iter().map(|&c| ((c as u128 * e as u128) % self.pk as u128) as u64).collect());
        }
        // Every element has order dividing p^k.
        e %= self.pk;
        let mut acc = self.identity();
        let mut base = g.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, g: &GElement) -> GElement {
        self.pow(g, self.pk - 1)
    }

    /// `g^λ` for `λ ∈ Z_p`, exact in `G/G_{k+1}`.
    pub fn zp_pow(&self, g: &GElement, lambda: &PAdicInt) -> Result<GElement, UniformError> {
        self.check_ring(lambda)?;
        Ok(self.pow(g, lambda.residue()))
    }

    fn check_ring(&self, x: &PAdicInt) -> Result<(), UniformError> {
        if x.p() != self.p || x.precision() != self.k {
            return Err(PadicError::PrecisionMismatch { p1: self.p, k1: self.k, p2: x.p(), k2: x.precision() }.into());
        }
        Ok(())
    }

    /// `x(λ) = x_1^{λ_1} ⋯ x_d^{λ_d}`.
    pub fn x_of_lambda(&self, lambda: &CoordinateVector) -> Result<GElement, UniformError> {
        if lambda.0.len() != self.d {
            return Err(UniformError::BadElement);
        }
        for c in &lambda.0 {
            self.check_ring(c)?;
        }
        Ok(self.x_of_residues(&lambda.residues()))
    }

    pub(crate) fn x_of_residues(&self, lambda: &[u64]) -> GElement {
        match self.matrix_dim() {
            None => GElement(lambda.iter().map(|&c| c % self.pk).collect()),
            Some(_) => {
                let gens = self.generators();
                gens.iter().zip(lambda).fold(self.identity(), |acc, (x, &l)| self.mul(&acc, &self.pow(x, l)))
            }
        }
    }

    /// The unique `λ` with `x(λ) = g`, by digit extraction: at stage `n`
    /// the residual `x(λ)^{-1} g` lies in `G_n` and `π_n` reads off the
    /// next base-p digit of each coordinate.
    pub fn lambda_of_x(&self, g: &GElement) -> Result<CoordinateVector, UniformError> {
        self.validate(g)?;
        Ok(CoordinateVector::from_residues(self.p, self.k, &self.lambda_residues(g))?)
    }

    pub(crate) fn lambda_residues(&self, g: &GElement) -> Vec<u64> {
        if self.matrix_dim().is_none() {
            return g.0.clone();
        }
        let mut lambda = vec![0u64; self.d];
        let mut weight = 1u64;
        for n in 1..=self.k {
            let residual = self.mul(&self.inv(&self.x_of_residues(&lambda)), g);
            let digits = self.pi_unchecked(&residual, n);
            for (l, dgt) in lambda.iter_mut().zip(digits) {
                *l = (*l + dgt * weight) % self.pk;
            }
            weight *= self.p;
        }
        lambda
    }

    pub fn omega(&self, g: &GElement) -> Omega {
        let vals = match self.matrix_dim() {
            None => g.0.iter().filter(|&&c| c != 0).map(|&c| valuation_u64(self.p, c) + 1).min(),
            Some(n) => {
                let id = mat_identity(n, self.entry_modulus);
                g.0.iter()
                    .zip(&id)
                    .map(|(&a, &b)| (a + self.entry_modulus - b) % self.entry_modulus)
                    .filter(|&c| c != 0)
                    .map(|c| valuation_u64(self.p, c))
                    .min()
            }
        };
        match vals {
            Some(v) => Omega::Exact(v),
            None => Omega::AtLeast(self.k + 1),
        }
    }

    /// `π_n : G_n → F_p^d`.
    pub fn pi_n(&self, g: &GElement, n: u32) -> Result<Vec<u64>, UniformError> {
        if n == 0 || n > self.k {
            return Err(UniformError::PrecisionExceeded { requested: n, k: self.k });
        }
        let omega = self.omega(g);
        if omega.level() < n {
            return Err(UniformError::NotInLevel { n, omega });
        }
        Ok(self.pi_unchecked(g, n))
    }

    fn pi_unchecked(&self, g: &GElement, n: u32) -> Vec<u64> {
        match self.matrix_dim() {
            None => {
                let w = self.p.pow(n - 1);
                g.0.iter().map(|&c| (c / w) % self.p).collect()
            }
            Some(m) => {
                let id = mat_identity(m, self.entry_modulus);
                let w = self.p.pow(n);
                g.0.iter()
                    .zip(&id)
                    .map(|(&a, &b)| (((a + self.entry_modulus - b) % self.entry_modulus) / w) % self.p)
                    .collect()
            }
        }
    }

    /// Every element of `G/G_{k+1}`, in the quotient's element order.
    pub fn elements(&self) -> Vec<GElement> {
        let q = self.finite_quotient();
        q.elements().map(|x| GElement(q.repr(x))).collect()
    }

    pub fn quotient_order(&self) -> u128 {
        (self.pk as u128).pow(self.d as u32)
    }

    /// `G/G_{k+1}` as a finite group, built on first use.
    pub fn finite_quotient(&self) -> &FiniteGroup {
        self.quotient.get_or_init(|| self.quotient(self.k).expect("working precision is valid"))
    }

    /// `G/G_{n+1}` for `n ≤ k`.
    pub fn quotient(&self, n: u32) -> Result<FiniteGroup, UniformError> {
        if n == 0 || n > self.k {
            return Err(UniformError::PrecisionExceeded { requested: n, k: self.k });
        }
        let g = match self.matrix_dim() {
            None => FiniteGroup::abelian(&vec![self.p.pow(n); self.d])?,
            Some(m) => {
                let modulus = self.p.pow(n + 1);
                let gens: Vec<Vec<u64>> = (0..self.d)
                    .map(|j| {
                        let mut g = mat_identity(m, modulus);
                        g[j] = (g[j] + self.p) % modulus;
                        g
                    })
                    .collect();
                FiniteGroup::matrix_group(format!("GL{m}^1(Z/{modulus})"), m, modulus, &gens)?
            }
        };
        Ok(g)
    }

    /// Index of `g` in [`Self::finite_quotient`].
    pub fn index_in_quotient(&self, g: &GElement) -> Option<Elem> {
        self.finite_quotient().index_of(&g.0)
    }

    pub fn element_at(&self, x: Elem) -> GElement {
        GElement(self.finite_quotient().repr(x))
    }

    /// `G_i` inside `G/G_{k+1}`: the elements with `ω ≥ i`.
    pub fn level(&self, i: u32) -> Result<Subgroup, UniformError> {
        if i == 0 || i > self.k + 1 {
            return Err(UniformError::PrecisionExceeded { requested: i, k: self.k });
        }
        let q = self.finite_quotient();
        let mut bits = FixedBitSet::with_capacity(q.order());
        for x in q.elements() {
            if self.omega(&GElement(q.repr(x))).level() >= i {
                bits.insert(x as usize);
            }
        }
        Ok(Subgroup::from_elements(q, bits))
    }

    pub fn uniformity_report(&self) -> UniformityReport {
        uniformity_report(self.finite_quotient(), self.p)
    }
}

impl FromStr for UniformGroup {
    type Err = UniformError;

    /// `abelian:p,d[,k]` or `congruence:p,n[,k]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UniformError::InvalidPreset(s.to_string());
        let (name, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = args.split(',').map(|a| a.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
        if !(2..=3).contains(&nums.len()) {
            return Err(bad());
        }
        let (p, m) = (nums[0], nums[1] as usize);
        let d = if name == "congruence" { m * m } else { m };
        let k = nums.get(2).map_or(Ok(default_precision(d)), |&k| u32::try_from(k).map_err(|_| bad()))?;
        match name {
            "abelian" => Self::abelian(p, m, k),
            "congruence" => Self::congruence(p, m, k),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSummary {
    pub i: usize,
    pub well_defined: bool,
    pub surjective: bool,
    pub kernel_size: usize,
    pub bijective: bool,
}

/// Lower p-series dimensions and p-power map behaviour of a finite p-group,
/// read as a quotient of a pro-p group.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    pub p: u64,
    pub order: usize,
    pub powerful: bool,
    /// `d_i = log_p |G_i : G_{i+1}|`.
    pub dims: Vec<u32>,
    /// Maps `G_i/G_{i+1} → G_{i+1}/G_{i+2}` for the levels that are not
    /// truncated by the quotient.
    pub theta: Vec<ThetaSummary>,
    pub uniform: bool,
    pub defect: Option<String>,
}

/// Report on a finite p-group `G`. Powerfulness is required; the theta maps
/// between consecutive nontrivial layers must be bijective, except the
/// last, which is cut off by the finite quotient.
pub fn uniformity_report(g: &FiniteGroup, p: u64) -> UniformityReport {
    let mut report =
        UniformityReport { p, order: g.order(), powerful: false, dims: vec![], theta: vec![], uniform: false, defect: None };
    if p == 2 || p_group_prime(g).is_some_and(|q| q != p) {
        report.defect = Some(format!("not an odd {p}-group"));
        return report;
    }
    let series = match lower_p_series(g, p) {
        Ok(s) => s,
        Err(e) => {
            report.defect = Some(e.to_string());
            return report;
        }
    };
    let orders = series.orders();
    report.dims = orders.windows(2).map(|w| valuation_u64(p, (w[0] / w[1]) as u64)).collect();
    report.powerful = is_powerful(g, p).unwrap_or(false);
    if !report.powerful {
        let w = g.whole();
        let comm = w.commutator(&w);
        let pow = w.power_subgroup(p);
        report.defect = Some(format!(
            "not powerful: [G,G] has order {} but only {} of it lies in G^p (order {})",
            comm.order(),
            comm.intersection(&pow).order(),
            pow.order()
        ));
        return report;
    }
    let layers = report.dims.len();
    for i in 1..layers {
        let t = theta_from_series(g, &series, p, i);
        report.theta.push(ThetaSummary {
            i,
            well_defined: t.well_defined,
            surjective: t.surjective,
            kernel_size: t.kernel_size,
            bijective: t.is_bijective(),
        });
    }
    report.defect = report.theta.iter().find(|t| !t.bijective).map(|t| {
        format!("theta_{} is not bijective (kernel {} cosets, surjective {})", t.i, t.kernel_size, t.surjective)
    });
    report.uniform = report.defect.is_none();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(g: &UniformGroup, r: &[u64]) -> CoordinateVector {
        CoordinateVector::from_residues(g.p(), g.precision(), r).unwrap()
    }

    #[test]
    fn abelian_coordinates() {
        let g = UniformGroup::abelian(3, 2, 3).unwrap();
        assert_eq!(g.x_of_lambda(&cv(&g, &[4, 7])).unwrap(), GElement(vec![4, 7]));
        assert_eq!(g.x_of_lambda(&cv(&g, &[0, 0])).unwrap(), g.identity());
        assert_eq!(g.lambda_of_x(&GElement(vec![4, 7])).unwrap().residues(), vec![4, 7]);
        assert_eq!(g.lambda_of_x(&g.identity()).unwrap().residues(), vec![0, 0]);
    }

    #[test]
    fn congruence_generator_power() {
        let g = UniformGroup::congruence(3, 2, 3).unwrap();
        let x = g.x_of_lambda(&cv(&g, &[1, 0, 0, 0])).unwrap();
        assert_eq!(x, GElement(vec![4, 0, 0, 1]));
        assert_eq!(g.entry_modulus, 81);
    }

    #[test]
    fn omega_and_pi() {
        let g = UniformGroup::abelian(3, 2, 3).unwrap();
        assert_eq!(g.omega(&GElement(vec![9, 3])), Omega::Exact(2));
        assert_eq!(g.omega(&g.identity()), Omega::AtLeast(4));
        assert_eq!(g.omega(&GElement(vec![1, 0])), Omega::Exact(1));
        assert_eq!(g.pi_n(&GElement(vec![3, 6]), 2).unwrap(), vec![1, 2]);
        assert_eq!(g.pi_n(&g.identity(), 3).unwrap(), vec![0, 0]);
        assert!(matches!(g.pi_n(&GElement(vec![1, 0]), 2), Err(UniformError::NotInLevel { n: 2, .. })));
    }

    #[test]
    fn zp_pow_examples() {
        let g = UniformGroup::abelian(3, 2, 3).unwrap();
        let five = PAdicInt::new(3, 3, 5).unwrap();
        assert_eq!(g.zp_pow(&GElement(vec![1, 0]), &five).unwrap(), GElement(vec![5, 0]));
        let c = UniformGroup::congruence(3, 2, 2).unwrap();
        let x12 = c.generators()[1].clone();
        let three = PAdicInt::new(3, 2, 3).unwrap();
        let naive = c.mul(&c.mul(&x12, &x12), &x12);
        assert_eq!(c.zp_pow(&x12, &three).unwrap(), naive);
    }

    #[test]
    fn levels() {
        let g = UniformGroup::abelian(3, 2, 2).unwrap();
        let l2 = g.level(2).unwrap();
        assert_eq!(l2.order(), 9);
        assert!(l2.elements().all(|x| g.element_at(x).0.iter().all(|c| c % 3 == 0)));
        assert!(g.level(1).unwrap().is_whole());
        assert!(g.level(4).is_err());
        let c = UniformGroup::congruence(3, 2, 2).unwrap();
        let l2 = c.level(2).unwrap();
        assert_eq!(l2.order(), 81);
        assert!(l2.elements().all(|x| c.omega(&c.element_at(x)).level() >= 2));
    }

    #[test]
    fn reports() {
        let g = UniformGroup::abelian(3, 2, 3).unwrap();
        let r = g.uniformity_report();
        assert_eq!(r.dims, vec![2, 2, 2]);
        assert!(r.uniform);
        let c = UniformGroup::congruence(3, 2, 2).unwrap();
        let r = c.uniformity_report();
        assert_eq!(r.dims, vec![4, 4]);
        assert!(r.uniform);
        let ut = FiniteGroup::unitriangular(3, 2).unwrap();
        let r = uniformity_report(&ut, 3);
        assert!(!r.powerful && !r.uniform);
    }

    #[test]
    fn presets() {
        let g: UniformGroup = "abelian:3,2,3".parse().unwrap();
        assert_eq!((g.p(), g.dim(), g.precision()), (3, 2, 3));
        let c: UniformGroup = "congruence:3,2".parse().unwrap();
        assert_eq!((c.dim(), c.precision()), (4, 2));
        assert!("abelian:2,2,3".parse::<UniformGroup>().is_err());
        assert!("torus:3,2".parse::<UniformGroup>().is_err());
    }
}
