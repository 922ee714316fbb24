//! Bounded-precision p-adic integers and supernatural numbers.
//!
//! A [`PAdicInt`] is an element of `Z_p / p^k Z_p`, stored as its canonical
//! residue in `[0, p^k)`. Operations never invent digits: the truncated
//! division [`PAdicInt::div_d`] returns its result at the reduced precision it
//! actually knows.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("p^k overflows u64 for p = {p}, k = {k}")]
    Overflow { p: u64, k: u32 },
    #[error("operands live in different rings: Z/{p1}^{k1} vs Z/{p2}^{k2}")]
    PrecisionMismatch { p1: u64, k1: u32, p2: u64, k2: u32 },
    #[error("{0} is not a unit")]
    NonUnit(PAdicInt),
    #[error("empty family")]
    EmptyFamily,
    #[error("cannot parse {0:?} as a supernatural number")]
    Parse(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `p^e`, or `None` on overflow.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Largest `e` with `p^e | n`, for `n > 0`.
pub fn valuation_u64(p: u64, mut n: u64) -> u32 {
    debug_assert!(n > 0);
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// p-adic valuation at finite precision. `AtLeast(k)` is the only honest
/// answer for the zero residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The valuation if finite, else the precision bound.
    pub fn bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Valuation::Exact(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPAdic")]
pub struct PAdicInt {
    p: u64,
    k: u32,
    residue: u64,
}

#[derive(Deserialize)]
struct RawPAdic {
    p: u64,
    k: u32,
    residue: u64,
}

impl TryFrom<RawPAdic> for PAdicInt {
    type Error = PadicError;

    fn try_from(raw: RawPAdic) -> Result<Self, Self::Error> {
        let modulus = Self::modulus_for(raw.p, raw.k)?;
        if raw.residue >= modulus {
            // Reject rather than reduce so that echoed JSON round-trips exactly.
            return Err(PadicError::Overflow { p: raw.p, k: raw.k });
        }
        Ok(PAdicInt { p: raw.p, k: raw.k, residue: raw.residue })
    }
}

impl PAdicInt {
    fn modulus_for(p: u64, k: u32) -> Result<u64, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if k == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        // Keep products of two residues inside u128 and sums inside u64.
        match checked_pow(p, k) {
            Some(m) if m < (1u64 << 62) => Ok(m),
            _ => Err(PadicError::Overflow { p, k }),
        }
    }

    /// Reduce an arbitrary integer into `Z/p^k`.
    pub fn new(p: u64, k: u32, value: i128) -> Result<Self, PadicError> {
        let m = Self::modulus_for(p, k)? as i128;
        Ok(PAdicInt { p, k, residue: value.rem_euclid(m) as u64 })
    }

    pub fn zero(p: u64, k: u32) -> Result<Self, PadicError> {
        Self::new(p, k, 0)
    }

    pub fn one(p: u64, k: u32) -> Result<Self, PadicError> {
        Self::new(p, k, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn same_ring(&self, other: &Self) -> Result<(), PadicError> {
        if self.p == other.p && self.k == other.k {
            Ok(())
        } else {
            Err(PadicError::PrecisionMismatch { p1: self.p, k1: self.k, p2: other.p, k2: other.k })
        }
    }

    fn with_residue(&self, r: u64) -> Self {
        PAdicInt { p: self.p, k: self.k, residue: r }
    }

    /// The valuation `ν`.
    pub fn nu(&self) -> Valuation {
        if self.residue == 0 {
            Valuation::AtLeast(self.k)
        } else {
            Valuation::Exact(valuation_u64(self.p, self.residue))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_ring(other)?;
        Ok(self.with_residue((self.residue + other.residue) % self.modulus()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_ring(other)?;
        let m = self.modulus();
        Ok(self.with_residue((self.residue + m - other.residue) % m))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_ring(other)?;
        let m = self.modulus() as u128;
        Ok(self.with_residue(((self.residue as u128 * other.residue as u128) % m) as u64))
    }

    /// Inverse of a unit. Fails with `NonUnit` when `ν(x) > 0`.
    pub fn inverse(&self) -> Result<Self, PadicError> {
        if self.residue.is_multiple_of(self.p) {
            return Err(PadicError::NonUnit(*self));
        }
        let inv = mod_inverse(self.residue, self.modulus()).expect("unit has an inverse");
        Ok(self.with_residue(inv))
    }

    /// Reduce to a lower precision `j ≤ k`.
    pub fn truncate(&self, j: u32) -> Result<Self, PadicError> {
        let j = j.min(self.k);
        PAdicInt::new(self.p, j, self.residue as i128)
    }

    /// Truncated division: `x / y` when `ν(x) ≥ ν(y)` and `y ≠ 0`, else `0`.
    ///
    /// On the division branch the quotient is only determined modulo
    /// `p^{k-ν(y)}`, and the result carries exactly that precision. The
    /// zero branch keeps the operands' precision.
    pub fn div_d(&self, y: &Self) -> Result<Self, PadicError> {
        self.same_ring(y)?;
        let vy = match y.nu() {
            Valuation::AtLeast(_) => return PAdicInt::zero(self.p, self.k),
            Valuation::Exact(v) => v,
        };
        let divisible = match self.nu() {
            Valuation::AtLeast(_) => true,
            Valuation::Exact(vx) => vx >= vy,
        };
        if !divisible {
            return PAdicInt::zero(self.p, self.k);
        }
        let scale = self.p.pow(vy);
        let k = self.k - vy;
        let m = self.p.pow(k);
        let num = self.residue / scale;
        let den = y.residue / scale;
        let inv = mod_inverse(den % m, m).expect("unit part of y is invertible");
        Ok(PAdicInt { p: self.p, k, residue: ((num as u128 * inv as u128) % m as u128) as u64 })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let m = self.modulus() as u128;
        let mut base = self.residue as u128 % m;
        let mut acc: u128 = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        self.with_residue(acc as u64)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.k)
    }
}

// Operator forms panic on mismatched rings; use the `try_*` methods when the
// operands come from untrusted input.
impl Add for PAdicInt {
    type Output = PAdicInt;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("p-adic operands must share (p, k)")
    }
}

impl Sub for PAdicInt {
    type Output = PAdicInt;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("p-adic operands must share (p, k)")
    }
}

impl Mul for PAdicInt {
    type Output = PAdicInt;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("p-adic operands must share (p, k)")
    }
}

impl Neg for PAdicInt {
    type Output = PAdicInt;
    fn neg(self) -> Self {
        let m = self.modulus();
        self.with_residue((m - self.residue) % m)
    }
}

/// Inverse of `a` modulo `m` via extended Euclid.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Largest finite exponent a [`Supernatural`] stores; sums saturate here.
pub const MAX_FINITE_EXPONENT: u64 = (1u64 << 63) - 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => {
                Exponent::Finite(a.saturating_add(b).min(MAX_FINITE_EXPONENT))
            }
            _ => Exponent::Infinite,
        }
    }
}

/// A formal product `∏ p^{n(p)}` with exponents in `ℕ ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Supernatural {
    exponents: BTreeMap<u64, Exponent>,
}

impl Supernatural {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_u64(n: u64) -> Self {
        assert!(n > 0, "0 is not a supernatural number");
        let mut s = Self::one();
        for (p, e) in factorize(n) {
            s.exponents.insert(p, Exponent::Finite(e as u64));
        }
        s
    }

    pub fn prime_power(p: u64, e: Exponent) -> Result<Self, PadicError> {
        let mut s = Self::one();
        s.set(p, e)?;
        Ok(s)
    }

    /// Set the exponent of `p`; zero removes the entry.
    pub fn set(&mut self, p: u64, e: Exponent) -> Result<(), PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        match e {
            Exponent::Finite(0) => {
                self.exponents.remove(&p);
            }
            Exponent::Finite(v) => {
                self.exponents.insert(p, Exponent::Finite(v.min(MAX_FINITE_EXPONENT)));
            }
            Exponent::Infinite => {
                self.exponents.insert(p, Exponent::Infinite);
            }
        }
        Ok(())
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.exponents.get(&p).copied().unwrap_or(Exponent::Finite(0))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.exponents.keys().copied()
    }

    pub fn is_finite(&self) -> bool {
        self.exponents.values().all(|e| matches!(e, Exponent::Finite(_)))
    }

    /// The ordinary integer, when finite and representable.
    pub fn to_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&p, &e) in &self.exponents {
            match e {
                Exponent::Finite(e) => acc = acc.checked_mul(checked_pow(p, u32::try_from(e).ok()?)?)?,
                Exponent::Infinite => return None,
            }
        }
        Some(acc)
    }

    pub fn mul(&self, other: &Supernatural) -> Supernatural {
        let mut out = self.clone();
        for (&p, &e) in &other.exponents {
            let cur = out.exponent(p);
            out.exponents.insert(p, cur.add(e));
        }
        out
    }

    /// Exponent-wise supremum of a nonempty family.
    pub fn lcm<'a, I>(family: I) -> Result<Supernatural, PadicError>
    where
        I: IntoIterator<Item = &'a Supernatural>,
    {
        let mut iter = family.into_iter();
        let mut out = iter.next().ok_or(PadicError::EmptyFamily)?.clone();
        for n in iter {
            for (&p, &e) in &n.exponents {
                let cur = out.exponent(p);
                out.exponents.insert(p, cur.max(e));
            }
        }
        Ok(out)
    }

    pub fn divides(&self, other: &Supernatural) -> bool {
        self.exponents.iter().all(|(&p, &e)| e <= other.exponent(p))
    }

    /// True when every prime with nonzero exponent lies in `pi`.
    pub fn is_pi_number(&self, pi: &[u64]) -> bool {
        self.exponents.keys().all(|p| pi.contains(p))
    }
}

impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                Exponent::Finite(v) => format!("{p}^{v}"),
                Exponent::Infinite => format!("{p}^inf"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Inverse of `Display`: `1`, `12`, `2^3*3^inf*5`.
impl std::str::FromStr for Supernatural {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PadicError::Parse(s.to_string());
        let mut out = Supernatural::one();
        for part in s.split('*').map(str::trim) {
            let (base, exp) = part.split_once('^').unwrap_or((part, "1"));
            let base: u64 = base.trim().parse().map_err(|_| bad())?;
            let e = match exp.trim() {
                "inf" => Exponent::Infinite,
                v => Exponent::Finite(v.parse().map_err(|_| bad())?),
            };
            if base == 0 {
                return Err(bad());
            }
            if is_prime(base) {
                out = out.mul(&Supernatural::prime_power(base, e)?);
            } else if let Exponent::Finite(v) = e {
                let n = u32::try_from(v).ok().and_then(|v| base.checked_pow(v)).ok_or_else(bad)?;
                out = out.mul(&Supernatural::from_u64(n));
            } else {
                return Err(PadicError::NotPrime(base));
            }
        }
        Ok(out)
    }
}

impl Serialize for Supernatural {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.exponents.len()))?;
        for (p, e) in &self.exponents {
            let key = p.to_string();
            match e {
                Exponent::Finite(v) => map.serialize_entry(&key, v)?,
                Exponent::Infinite => map.serialize_entry(&key, "inf")?,
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Supernatural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SnVisitor;

        impl<'de> Visitor<'de> for SnVisitor {
            type Value = Supernatural;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from prime to exponent or \"inf\"")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Supernatural, A::Error> {
                let mut out = Supernatural::one();
                while let Some((key, value)) = access.next_entry::<String, serde_json::Value>()? {
                    let p: u64 = key.parse().map_err(de::Error::custom)?;
                    let e = match &value {
                        serde_json::Value::String(s) if s == "inf" => Exponent::Infinite,
                        serde_json::Value::Number(n) => Exponent::Finite(
                            n.as_u64().ok_or_else(|| de::Error::custom("exponent must be a natural number"))?,
                        ),
                        other => return Err(de::Error::custom(format!("bad exponent {other}"))),
                    };
                    out.set(p, e).map_err(de::Error::custom)?;
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(SnVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(p: u64, k: u32, v: i128) -> PAdicInt {
        PAdicInt::new(p, k, v).unwrap()
    }

    fn sn(pairs: &[(u64, Exponent)]) -> Supernatural {
        let mut s = Supernatural::one();
        for &(p, e) in pairs {
            s.set(p, e).unwrap();
        }
        s
    }

    use Exponent::{Finite as F, Infinite as Inf};

    #[test]
    fn nu_examples() {
        assert_eq!(x(3, 4, 18).nu(), Valuation::Exact(2));
        assert_eq!(x(3, 4, 0).nu(), Valuation::AtLeast(4));
        assert_eq!(x(5, 3, 7).nu(), Valuation::Exact(0));
    }

    #[test]
    fn div_d_examples() {
        let q = x(2, 5, 12).div_d(&x(2, 5, 4)).unwrap();
        assert_eq!((q.residue(), q.precision()), (3, 3));
        assert!(x(3, 4, 1).div_d(&x(3, 4, 0)).unwrap().is_zero());
        assert!(x(3, 4, 3).div_d(&x(3, 4, 9)).unwrap().is_zero());
    }

    #[test]
    fn div_d_by_unit_keeps_precision() {
        let q = x(3, 4, 7).div_d(&x(3, 4, 2)).unwrap();
        assert_eq!(q.precision(), 4);
        assert_eq!(q * x(3, 4, 2), x(3, 4, 7));
    }

    #[test]
    fn arith_examples() {
        assert_eq!((x(3, 2, 4) + x(3, 2, 7)).residue(), 2);
        assert_eq!(x(3, 2, 2).inverse().unwrap().residue(), 5);
        assert!(matches!(x(3, 2, 3).inverse(), Err(PadicError::NonUnit(_))));
        assert_eq!((-x(3, 2, 1)).residue(), 8);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        assert!(matches!(x(3, 2, 1).try_add(&x(3, 3, 1)), Err(PadicError::PrecisionMismatch { .. })));
        assert!(matches!(x(3, 2, 1).try_mul(&x(5, 2, 1)), Err(PadicError::PrecisionMismatch { .. })));
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(PAdicInt::new(4, 2, 1), Err(PadicError::NotPrime(4)));
        assert_eq!(PAdicInt::new(3, 0, 1), Err(PadicError::ZeroPrecision));
        assert!(matches!(PAdicInt::new(3, 60, 1), Err(PadicError::Overflow { .. })));
        assert_eq!(x(3, 2, -1).residue(), 8);
    }

    #[test]
    fn sn_mul_examples() {
        let a = sn(&[(2, F(3)), (5, F(1))]);
        let b = sn(&[(2, F(1)), (3, F(1))]);
        assert_eq!(a.mul(&b), sn(&[(2, F(4)), (3, F(1)), (5, F(1))]));
        assert_eq!(sn(&[(2, Inf)]).mul(&sn(&[(2, F(7))])), sn(&[(2, Inf)]));
        assert_eq!(Supernatural::one().mul(&a), a);
    }

    #[test]
    fn sn_mul_saturates() {
        let big = sn(&[(2, F(MAX_FINITE_EXPONENT))]);
        assert_eq!(big.mul(&big).exponent(2), F(MAX_FINITE_EXPONENT));
    }

    #[test]
    fn sn_lcm_examples() {
        let a = sn(&[(2, Inf), (3, F(1))]);
        let b = sn(&[(3, F(2)), (5, F(1))]);
        assert_eq!(Supernatural::lcm([&a, &b]).unwrap(), sn(&[(2, Inf), (3, F(2)), (5, F(1))]));
        assert_eq!(Supernatural::lcm([&a]).unwrap(), a);
        let fam: Vec<_> = [2, 3, 4].iter().map(|&n| Supernatural::from_u64(n)).collect();
        assert_eq!(Supernatural::lcm(&fam).unwrap(), Supernatural::from_u64(12));
        assert_eq!(Supernatural::lcm(std::iter::empty()), Err(PadicError::EmptyFamily));
        for text in ["1", "12", "2^inf*3^2*5", "7^inf"] {
            let x: Supernatural = text.parse().unwrap();
            assert_eq!(x.to_string().parse::<Supernatural>().unwrap(), x);
        }
        assert_eq!("12".parse::<Supernatural>().unwrap().to_string(), "2^2*3");
        assert!("6^inf".parse::<Supernatural>().is_err());
    }

    #[test]
    fn sn_divides_examples() {
        let two_inf = sn(&[(2, Inf)]);
        assert!(Supernatural::from_u64(8).divides(&two_inf));
        assert!(!Supernatural::from_u64(6).divides(&two_inf));
        assert!(sn(&[(2, Inf), (3, F(1))]).is_pi_number(&[2, 3]));
        assert!(!Supernatural::from_u64(10).is_pi_number(&[2, 3]));
    }

    #[test]
    fn json_formats() {
        let s = sn(&[(2, F(3)), (5, Inf)]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"2":3,"5":"inf"}"#);
        assert_eq!(serde_json::from_str::<Supernatural>(&text).unwrap(), s);
        assert!(serde_json::from_str::<Supernatural>(r#"{"4":1}"#).is_err());
        // zero exponents are dropped, keeping the map sparse
        assert_eq!(serde_json::from_str::<Supernatural>(r#"{"3":0}"#).unwrap(), Supernatural::one());

        let v = x(3, 4, 18);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"p":3,"k":4,"residue":18}"#);
        assert_eq!(serde_json::from_str::<PAdicInt>(&text).unwrap(), v);
        assert!(serde_json::from_str::<PAdicInt>(r#"{"p":3,"k":2,"residue":9}"#).is_err());
    }
}
