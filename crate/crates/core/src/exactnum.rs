//! Exact rationals, p-adic valuations and the principal fractional ideals of
//! the overrings `Z_S` of `Z`.
//!
//! Every overring of `Z` is a partial localization: it either inverts a finite
//! set of primes (`Z[1/2,1/3]`) or inverts everything except a finite set
//! (`Z_(2,3)`). All of their fractional ideals are principal, so an ideal is
//! stored as one positive rational generator with the inverted primes stripped.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Deterministic trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Multiplicity of `p` in a nonzero integer. `None` for zero.
pub fn val_int(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// The p-adic valuation of a nonzero rational.
pub fn val_p(q: &Rational, p: u64) -> Result<i64> {
    check_prime(p)?;
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let num = val_int(q.numer(), p).unwrap_or(0) as i64;
    let den = val_int(q.denom(), p).unwrap_or(0) as i64;
    Ok(num - den)
}

/// `p`-part of `n` removed: returns `(n / p^v, v)`.
fn strip_prime(n: &BigInt, p: u64) -> (BigInt, u64) {
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    (m, v)
}

/// Distinct prime divisors of a nonzero integer, by trial division.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    const TRIAL_LIMIT: u64 = 10_000_000;
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !m.is_one() {
        let db = BigInt::from(d);
        if &db * &db > m {
            let last = m
                .to_u64()
                .ok_or_else(|| Error::Factorization(n.to_string()))?;
            out.push(last);
            break;
        }
        if (&m % &db).is_zero() {
            out.push(d);
            m = strip_prime(&m, d).0;
        }
        d += if d == 2 { 1 } else { 2 };
        if d > TRIAL_LIMIT {
            return Err(Error::Factorization(n.to_string()));
        }
    }
    Ok(out)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = |why: &str| Error::parse(t, why);
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|_| bad("not a rational")),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A set of primes that is either finite or cofinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    AllExcept(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        use PrimeSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), AllExcept(b)) | (AllExcept(b), Finite(a)) => AllExcept(b - a),
            (AllExcept(a), AllExcept(b)) => AllExcept(a & b),
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::AllExcept(s) => !s.contains(&p),
        }
    }
}

/// An overring of `Z` inside `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverringZ {
    /// `Z[1/p : p in S]`; the empty set is `Z`.
    InvertFinite(BTreeSet<u64>),
    /// `Z_(S)`: only the primes of `S` stay non-units; the empty set is `Q`.
    KeepFinite(BTreeSet<u64>),
}

impl OverringZ {
    pub fn integers() -> Self {
        OverringZ::InvertFinite(BTreeSet::new())
    }

    pub fn rationals() -> Self {
        OverringZ::KeepFinite(BTreeSet::new())
    }

    pub fn local(p: u64) -> Result<Self> {
        Self::keep(&[p])
    }

    pub fn keep(primes: &[u64]) -> Result<Self> {
        primes.iter().try_for_each(|&p| check_prime(p))?;
        Ok(OverringZ::KeepFinite(primes.iter().copied().collect()))
    }

    pub fn invert(primes: &[u64]) -> Result<Self> {
        primes.iter().try_for_each(|&p| check_prime(p))?;
        Ok(OverringZ::InvertFinite(primes.iter().copied().collect()))
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, OverringZ::InvertFinite(s) if s.is_empty())
    }

    pub fn is_field(&self) -> bool {
        matches!(self, OverringZ::KeepFinite(s) if s.is_empty())
    }

    pub fn is_inverted(&self, p: u64) -> bool {
        match self {
            OverringZ::InvertFinite(s) => s.contains(&p),
            OverringZ::KeepFinite(s) => !s.contains(&p),
        }
    }

    /// The primes that remain non-units.
    pub fn non_inverted(&self) -> PrimeSet {
        match self {
            OverringZ::InvertFinite(s) => PrimeSet::AllExcept(s.clone()),
            OverringZ::KeepFinite(s) => PrimeSet::Finite(s.clone()),
        }
    }

    /// Canonical positive generator of `q * self`.
    fn normalize(&self, q: &Rational) -> Rational {
        let q = q.abs();
        match self {
            OverringZ::InvertFinite(s) => {
                let mut n = q.numer().clone();
                let mut d = q.denom().clone();
                for &p in s {
                    n = strip_prime(&n, p).0;
                    d = strip_prime(&d, p).0;
                }
                Rational::new(n, d)
            }
            OverringZ::KeepFinite(s) => {
                let mut n = BigInt::one();
                let mut d = BigInt::one();
                for &p in s {
                    let v = val_int(q.numer(), p).unwrap_or(0) as i64
                        - val_int(q.denom(), p).unwrap_or(0) as i64;
                    let pp = num_traits::pow(BigInt::from(p), v.unsigned_abs() as usize);
                    if v >= 0 {
                        n *= pp;
                    } else {
                        d *= pp;
                    }
                }
                Rational::new(n, d)
            }
        }
    }
}

impl fmt::Display for OverringZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<u64>, sep: &str| {
            s.iter()
                .map(|p| format!("{sep}{p}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            OverringZ::InvertFinite(s) if s.is_empty() => write!(f, "Z"),
            OverringZ::KeepFinite(s) if s.is_empty() => write!(f, "Q"),
            OverringZ::InvertFinite(s) => write!(f, "Z[{}]", join(s, "1/")),
            OverringZ::KeepFinite(s) => write!(f, "Z_({})", join(s, "")),
        }
    }
}

impl FromStr for OverringZ {
    type Err = Error;

    /// Accepts `Z`, `Q`, `Z_(2,3)` and `Z[1/2,1/3]` (or `Z[1/6]`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        // inverting n inverts its prime factors, so `1/n` may be composite
        let primes = |body: &str, prefix: &str| -> Result<Vec<u64>> {
            let mut out = Vec::new();
            for x in body.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let digits = x
                    .strip_prefix(prefix)
                    .ok_or_else(|| Error::parse(x, format!("expected `{prefix}p`")))?;
                let n: u64 = digits
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(x, "not a natural number"))?;
                if prefix.is_empty() || n < 2 {
                    check_prime(n).map_err(|_| Error::parse(x, "not a prime"))?;
                    out.push(n);
                } else {
                    out.extend(prime_factors(&BigInt::from(n))?);
                }
            }
            Ok(out)
        };
        match t {
            "Z" => Ok(OverringZ::integers()),
            "Q" => Ok(OverringZ::rationals()),
            _ => {
                if let Some(body) = t.strip_prefix("Z_(").and_then(|b| b.strip_suffix(')')) {
                    OverringZ::keep(&primes(body, "")?)
                } else if let Some(body) = t.strip_prefix("Z[").and_then(|b| b.strip_suffix(']')) {
                    OverringZ::invert(&primes(body, "1/")?)
                } else {
                    Err(Error::parse(t, "expected Z, Q, Z_(p,...) or Z[1/p,...]"))
                }
            }
        }
    }
}

/// A nonzero fractional ideal of an overring of `Z`, kept as its canonical
/// positive generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracIdeal {
    ambient: OverringZ,
    generator: Rational,
}

impl FracIdeal {
    pub fn principal(generator: &Rational, ambient: &OverringZ) -> Result<Self> {
        if generator.is_zero() {
            return Err(Error::ZeroModule);
        }
        Ok(FracIdeal {
            generator: ambient.normalize(generator),
            ambient: ambient.clone(),
        })
    }

    pub fn unit(ambient: &OverringZ) -> Self {
        FracIdeal {
            ambient: ambient.clone(),
            generator: Rational::one(),
        }
    }

    pub fn ambient(&self) -> &OverringZ {
        &self.ambient
    }

    pub fn generator(&self) -> &Rational {
        &self.generator
    }

    pub fn is_unit(&self) -> bool {
        self.generator.is_one()
    }

    fn same_ambient(&self, other: &FracIdeal) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.to_string(),
                right: other.ambient.to_string(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &FracIdeal) -> Result<FracIdeal> {
        self.same_ambient(other)?;
        FracIdeal::principal(&(&self.generator * &other.generator), &self.ambient)
    }

    /// `(self : other)`; exact because every ideal here is invertible.
    pub fn colon(&self, other: &FracIdeal) -> Result<FracIdeal> {
        self.same_ambient(other)?;
        FracIdeal::principal(&(&self.generator / &other.generator), &self.ambient)
    }

    pub fn equals(&self, other: &FracIdeal) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.generator == other.generator)
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &FracIdeal) -> Result<bool> {
        self.same_ambient(other)?;
        let q = &other.generator / &self.generator;
        Ok(self.ambient.normalize(&q).denom().is_one())
    }

    /// The extension `self * t` of an ideal of `Z` to the overring `t`.
    pub fn extend(&self, t: &OverringZ) -> Result<FracIdeal> {
        if !self.ambient.is_integers() {
            return Err(Error::AmbientMismatch {
                left: self.ambient.to_string(),
                right: OverringZ::integers().to_string(),
            });
        }
        FracIdeal::principal(&self.generator, t)
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})@{}", format_rational(&self.generator), self.ambient)
    }
}

/// The `ambient`-module generated by `gens`.
pub fn zmodule_generator(gens: &[Rational], ambient: &OverringZ) -> Result<FracIdeal> {
    let nonzero: Vec<&Rational> = gens.iter().filter(|q| !q.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroModule);
    }
    let lcm = nonzero
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let gcd = nonzero.iter().fold(BigInt::zero(), |acc, q| {
        acc.gcd(&(q.numer() * (&lcm / q.denom())))
    });
    FracIdeal::principal(&Rational::new(gcd, lcm), ambient)
}
