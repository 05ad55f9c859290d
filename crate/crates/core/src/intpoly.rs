//! Rational polynomials in the binomial basis `C(X, k)`.
//!
//! A polynomial is integer-valued on `Z` exactly when its binomial
//! coefficients are integers, and its value module `f(Z)Z` is the module
//! generated by those coefficients.

use std::cell::RefCell;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{
    format_rational, parse_rational, zmodule_generator, FracIdeal, OverringZ, Rational,
};

#[derive(Debug, Clone, Default)]
pub struct BinPoly {
    coeffs: Vec<Rational>,
    // (D, G) with f = G / D in the power basis
    integer: OnceLock<(BigInt, Vec<BigInt>)>,
}

impl PartialEq for BinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for BinPoly {}

impl Hash for BinPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

thread_local! {
    // surjection numbers k! S(i, k): X^i = sum_k SURJ[i][k] C(X, k)
    static SURJ: RefCell<Vec<Vec<BigInt>>> = RefCell::new(vec![vec![BigInt::one()]]);
    // signed Stirling numbers of the first kind: (X)_k = sum_i STIR1[k][i] X^i
    static STIR1: RefCell<Vec<Vec<BigInt>>> = RefCell::new(vec![vec![BigInt::one()]]);
}

fn with_surj<R>(degree: usize, f: impl FnOnce(&[Vec<BigInt>]) -> R) -> R {
    SURJ.with(|t| {
        let mut t = t.borrow_mut();
        while t.len() <= degree {
            let i = t.len();
            let prev = &t[i - 1];
            let row: Vec<BigInt> = (0..=i)
                .map(|k| {
                    if k == 0 {
                        return BigInt::zero();
                    }
                    let a = prev.get(k).cloned().unwrap_or_default();
                    (a + &prev[k - 1]) * BigInt::from(k)
                })
                .collect();
            t.push(row);
        }
        f(&t)
    })
}

fn with_stir1<R>(degree: usize, f: impl FnOnce(&[Vec<BigInt>]) -> R) -> R {
    STIR1.with(|t| {
        let mut t = t.borrow_mut();
        while t.len() <= degree {
            let k = t.len() - 1;
            let prev = &t[k];
            let kk = BigInt::from(k);
            let row: Vec<BigInt> = (0..=k + 1)
                .map(|i| {
                    let shifted = if i > 0 {
                        prev[i - 1].clone()
                    } else {
                        BigInt::zero()
                    };
                    let own = prev.get(i).map(|x| x * &kk).unwrap_or_default();
                    shifted - own
                })
                .collect();
            t.push(row);
        }
        f(&t)
    })
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn trim<T: Zero>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn power_mul<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Zero + Clone,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x * y;
        }
    }
    out
}

impl BinPoly {
    pub fn zero() -> Self {
        BinPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        BinPoly::from_coeffs(vec![c])
    }

    /// `C(X, k)`.
    pub fn binomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        BinPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        BinPoly {
            coeffs: trim(coeffs),
            integer: OnceLock::new(),
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Change of basis from `X^k`. The binomial coefficients are the
    /// iterated forward differences `Δ^k f(0)`; on monomials these are the
    /// surjection numbers `Δ^k X^i (0) = k! S(i, k)`.
    pub fn from_power(power_coeffs: &[Rational]) -> Self {
        let power = trim(power_coeffs.to_vec());
        if power.iter().all(|c| c.is_integer()) {
            return BinPoly::from_integer_power(power.iter().map(|c| c.numer().clone()).collect());
        }
        let n = power.len();
        let coeffs = with_surj(n.saturating_sub(1), |t| {
            (0..n)
                .map(|k| {
                    (k..n).fold(Rational::zero(), |acc, i| {
                        acc + &power[i] * Rational::from_integer(t[i][k].clone())
                    })
                })
                .collect()
        });
        BinPoly::from_coeffs(coeffs)
    }

    /// A polynomial with integer power-basis coefficients.
    pub fn from_integer_power(power: Vec<BigInt>) -> Self {
        let power = trim(power);
        let n = power.len();
        let coeffs = with_surj(n.saturating_sub(1), |t| {
            (0..n)
                .map(|k| {
                    let s = (k..n).fold(BigInt::zero(), |acc, i| acc + &power[i] * &t[i][k]);
                    Rational::from_integer(s)
                })
                .collect()
        });
        let f = BinPoly::from_coeffs(coeffs);
        let _ = f.integer.set((BigInt::one(), power));
        f
    }

    /// Coefficients in the power basis, lowest degree first.
    pub fn to_power(&self) -> Vec<Rational> {
        let (den, num) = self.integer_form();
        num.iter()
            .map(|c| Rational::new(c.clone(), den.clone()))
            .collect()
    }

    /// `(D, G)` with `f = G / D`, `D > 0` minimal and `G` integral, in the
    /// power basis. Computed once and cached.
    pub fn integer_form(&self) -> &(BigInt, Vec<BigInt>) {
        self.integer.get_or_init(|| {
            let n = self.coeffs.len();
            if n == 0 {
                return (BigInt::one(), Vec::new());
            }
            // f = sum_k c_k (X)_k / k!, scaled by lcm(den c_k) * (n-1)!
            let top = factorial(n - 1);
            let lcm = self
                .coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let mut falling = BigInt::one();
            let scaled: Vec<BigInt> = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k > 0 {
                        falling *= BigInt::from(k);
                    }
                    c.numer() * (&lcm / c.denom()) * (&top / &falling)
                })
                .collect();
            let mut num: Vec<BigInt> = with_stir1(n - 1, |s| {
                (0..n)
                    .map(|i| (i..n).fold(BigInt::zero(), |acc, k| acc + &scaled[k] * &s[k][i]))
                    .collect()
            });
            let mut den = lcm * top;
            let g = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
            if !g.is_one() {
                den /= &g;
                num.iter_mut().for_each(|c| *c /= &g);
            }
            (den, trim(num))
        })
    }

    pub fn evaluate(&self, a: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut term = Rational::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let km1 = Rational::from_integer(BigInt::from(k as i64 - 1));
                term = term * (a - km1) / Rational::from_integer(BigInt::from(k as i64));
            }
            acc += c * &term;
        }
        acc
    }

    pub fn is_int_valued(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// `f(Z) * ambient`.
    pub fn value_module(&self, ambient: &OverringZ) -> Result<FracIdeal> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        zmodule_generator(&self.coeffs, ambient)
    }

    /// `(ambient : f(Z) * ambient)`.
    pub fn conductor(&self, ambient: &OverringZ) -> Result<FracIdeal> {
        FracIdeal::unit(ambient).colon(&self.value_module(ambient)?)
    }

    /// Positive generator of `f(Z)Z` for `f` in `Int(Z)`.
    pub fn fixed_divisor(&self) -> Result<BigInt> {
        if !self.is_int_valued() {
            return Err(Error::NotIntegerValued(self.to_string()));
        }
        let m = self.value_module(&OverringZ::integers())?;
        Ok(m.generator().numer().clone())
    }

    pub fn scale(&self, c: &Rational) -> BinPoly {
        BinPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl Add for &BinPoly {
    type Output = BinPoly;
    fn add(self, rhs: &BinPoly) -> BinPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        BinPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &BinPoly {
    type Output = BinPoly;
    fn neg(self) -> BinPoly {
        BinPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &BinPoly {
    type Output = BinPoly;
    fn sub(self, rhs: &BinPoly) -> BinPoly {
        self + &(-rhs)
    }
}

impl Mul for &BinPoly {
    type Output = BinPoly;
    fn mul(self, rhs: &BinPoly) -> BinPoly {
        let (da, a) = self.integer_form();
        let (db, b) = rhs.integer_form();
        let prod = power_mul(a, b);
        let den = da * db;
        if den.is_one() {
            BinPoly::from_integer_power(prod)
        } else {
            let power: Vec<Rational> = prod
                .into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect();
            BinPoly::from_power(&power)
        }
    }
}

/// Power-basis coefficient list, e.g. `[0, -1/5, 0, 0, 0, 1/5]`.
impl FromStr for BinPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let body = t
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::parse(t, "expected a bracketed coefficient list"))?;
        let coeffs = body
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(BinPoly::from_power(&coeffs))
    }
}

/// Prints the power-basis coefficient list.
impl fmt::Display for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_power().iter().map(format_rational).collect();
        if parts.is_empty() {
            return write!(f, "[0]");
        }
        write!(f, "[{}]", parts.join(", "))
    }
}
