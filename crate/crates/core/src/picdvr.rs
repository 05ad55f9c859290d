//! Classes of `Pic(Int(Z_(p)))` as locally constant functions `Z_p -> Z`
//! modulo constants.
//!
//! A unitary ideal `I = (m, f_1, ..., f_k)` has the characteristic function
//! `x ↦ min(v_p(m), min_i v_p(f_i(x)))` on `Z_p`. It is locally constant, and
//! its class modulo constants is the Picard class of `I`.
//!
//! Value functions are computed by adaptive refinement over the balls
//! `a + p^n Z_p`. On each ball every generator is Taylor-expanded,
//! `f(a + p^n y) = f(a) + Σ_k c_k y^k`, and `min_k v_p(c_k)` bounds how far
//! `v_p(f)` can move inside the ball. A ball is accepted only when some
//! generator (or the constant) attains the minimum at the centre with a
//! strictly larger variation bound, and no generator can dip below it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{check_prime, val_int, Rational};
use crate::intpoly::BinPoly;

/// Default refinement depth at which value-function computations give up.
pub const DEFAULT_MAX_LEVEL: u32 = 24;

fn pow_u64(p: u64, n: u32) -> Result<u64> {
    p.checked_pow(n).ok_or(Error::PrecisionCap { cap: n })
}

/// A locally constant function on `Z_p`, constant on the balls of level
/// `level`, modulo constant functions.
///
/// Canonical form: `values[0] == 0` and `level` is minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepClass {
    p: u64,
    level: u32,
    values: Vec<i64>,
}

impl StepClass {
    /// Canonicalizes raw values given at `level`.
    pub fn new(p: u64, level: u32, values: Vec<i64>) -> Result<Self> {
        check_prime(p)?;
        let size = pow_u64(p, level)?;
        if values.len() as u64 != size {
            return Err(Error::parse(
                format!("{values:?}"),
                format!("expected {size} values for p = {p}, level {level}"),
            ));
        }
        let base = values[0];
        let mut values: Vec<i64> = values.into_iter().map(|v| v - base).collect();
        let mut level = level;
        while level > 0 {
            let coarse = values.len() / p as usize;
            if values
                .iter()
                .enumerate()
                .all(|(r, v)| *v == values[r % coarse])
            {
                values.truncate(coarse);
                level -= 1;
            } else {
                break;
            }
        }
        Ok(StepClass { p, level, values })
    }

    /// Infers the level from the number of values, which must be a power of `p`.
    pub fn from_values(p: u64, values: Vec<i64>) -> Result<Self> {
        check_prime(p)?;
        let mut level = 0;
        let mut size = 1usize;
        while size < values.len() {
            size = size.saturating_mul(p as usize);
            level += 1;
        }
        if size != values.len() {
            return Err(Error::parse(
                format!("{values:?}"),
                format!("length is not a power of {p}"),
            ));
        }
        StepClass::new(p, level, values)
    }

    pub fn zero(p: u64) -> Result<Self> {
        StepClass::new(p, 0, vec![0])
    }

    /// The class of the indicator of `r + p^n Z_p`.
    pub fn ball_indicator(p: u64, r: u64, n: u32) -> Result<Self> {
        check_prime(p)?;
        let size = pow_u64(p, n)?;
        if r >= size {
            return Err(Error::ResidueOutOfRange {
                p,
                residue: r,
                level: n,
            });
        }
        let values = (0..size).map(|x| i64::from(x == r)).collect();
        StepClass::new(p, n, values)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0
    }

    /// Values on the residues mod `p^n`, `n >= level`.
    pub fn refine(&self, n: u32) -> Result<Vec<i64>> {
        if n < self.level {
            return Err(Error::LevelTooLow {
                have: self.level,
                want: n,
            });
        }
        let size = pow_u64(self.p, n)? as usize;
        let here = self.values.len();
        Ok((0..size).map(|r| self.values[r % here]).collect())
    }

    pub fn add(&self, other: &StepClass) -> Result<StepClass> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let n = self.level.max(other.level);
        let a = self.refine(n)?;
        let b = other.refine(n)?;
        StepClass::new(self.p, n, a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self) -> StepClass {
        StepClass {
            p: self.p,
            level: self.level,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn sub(&self, other: &StepClass) -> Result<StepClass> {
        self.add(&other.neg())
    }
}

/// `p=2 n=1 [0,1]`
impl fmt::Display for StepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(i64::to_string).collect();
        write!(f, "p={} n={} [{}]", self.p, self.level, vals.join(","))
    }
}

impl Serialize for StepClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses an integer list such as `[0, 1, -1]` or `0,1,-1`.
pub fn parse_values(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let body = t
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .unwrap_or(t);
    body.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::parse(x, "not an integer")))
        .collect()
}

/// Where an ideal lives: `Int(Z)` or `Int(Z_(p))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Global,
    Local(u64),
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Global => write!(f, "Int(Z)"),
            Ambient::Local(p) => write!(f, "Int(Z_({p}))"),
        }
    }
}

/// A unitary finitely generated ideal `(m, f_1, ..., f_k)` of `Int(Z)` or
/// `Int(Z_(p))`, with `m >= 1` and every `f_i` integer-valued on `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntIdeal {
    ambient: Ambient,
    const_gen: BigInt,
    poly_gens: Vec<BinPoly>,
}

impl IntIdeal {
    pub fn new(ambient: Ambient, const_gen: BigInt, poly_gens: Vec<BinPoly>) -> Result<Self> {
        if let Ambient::Local(p) = ambient {
            check_prime(p)?;
        }
        if !const_gen.is_positive() {
            return Err(Error::parse(
                const_gen.to_string(),
                "the constant generator must be a positive integer",
            ));
        }
        let mut gens: Vec<BinPoly> = Vec::with_capacity(poly_gens.len());
        for g in poly_gens {
            if g.is_zero() || gens.contains(&g) {
                continue;
            }
            let integral_power = g.integer_form().0.is_one();
            if !integral_power && !g.is_int_valued() {
                return Err(Error::NotIntegerValued(g.to_string()));
            }
            gens.push(g);
        }
        Ok(IntIdeal {
            ambient,
            const_gen,
            poly_gens: gens,
        })
    }

    pub fn unit(ambient: Ambient) -> Self {
        IntIdeal {
            ambient,
            const_gen: BigInt::one(),
            poly_gens: Vec::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn const_gen(&self) -> &BigInt {
        &self.const_gen
    }

    pub fn poly_gens(&self) -> &[BinPoly] {
        &self.poly_gens
    }

    /// Same generators, read in `Int(Z_(p))`.
    pub fn localize(&self, p: u64) -> Result<IntIdeal> {
        check_prime(p)?;
        match self.ambient {
            Ambient::Local(q) if q != p => Err(Error::PrimeMismatch(q, p)),
            _ => Ok(IntIdeal {
                ambient: Ambient::Local(p),
                ..self.clone()
            }),
        }
    }

    /// Same generators, read in `Int(Z)`.
    pub fn globalize(&self) -> IntIdeal {
        IntIdeal {
            ambient: Ambient::Global,
            ..self.clone()
        }
    }

    /// Generator-level product: `m m'`, `m f'_j`, `m' f_i`, `f_i f'_j`.
    pub fn mul(&self, other: &IntIdeal) -> Result<IntIdeal> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.to_string(),
                right: other.ambient.to_string(),
            });
        }
        let m = Rational::from_integer(self.const_gen.clone());
        let m2 = Rational::from_integer(other.const_gen.clone());
        let mut gens = Vec::new();
        gens.extend(other.poly_gens.iter().map(|g| g.scale(&m)));
        gens.extend(self.poly_gens.iter().map(|f| f.scale(&m2)));
        for f in &self.poly_gens {
            for g in &other.poly_gens {
                gens.push(f * g);
            }
        }
        IntIdeal::new(self.ambient, &self.const_gen * &other.const_gen, gens)
    }

    pub fn parse(s: &str, ambient: Ambient) -> Result<IntIdeal> {
        let t = s.trim();
        let (m, rest) = match t.split_once(';') {
            Some((m, rest)) => (m.trim(), rest.trim()),
            None => (t, ""),
        };
        let m = BigInt::from_str(m).map_err(|_| Error::parse(m, "expected a positive integer"))?;
        let mut gens = Vec::new();
        let mut rest = rest;
        while !rest.is_empty() {
            let end = rest
                .find(']')
                .ok_or_else(|| Error::parse(rest, "unterminated polynomial"))?;
            gens.push(rest[..=end].parse::<BinPoly>()?);
            rest = rest[end + 1..].trim_start_matches([',', ' ']);
        }
        IntIdeal::new(ambient, m, gens)
    }
}

/// `m; [poly], [poly]`
impl fmt::Display for IntIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.const_gen)?;
        for (i, g) in self.poly_gens.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, g)?;
        }
        Ok(())
    }
}

impl Serialize for IntIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Value function of a local ideal, as a tree over the balls of `Z_p`:
/// children of a ball of level `n` are indexed by the `n`-th p-adic digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueTree {
    Const(i64),
    Split(Vec<ValueTree>),
}

impl ValueTree {
    /// Smallest level at which the function is constant on every ball.
    pub fn depth(&self) -> u32 {
        match self {
            ValueTree::Const(_) => 0,
            ValueTree::Split(ch) => 1 + ch.iter().map(ValueTree::depth).max().unwrap_or(0),
        }
    }

    pub fn at(&self, residue: u64, p: u64) -> i64 {
        match self {
            ValueTree::Const(v) => *v,
            ValueTree::Split(ch) => ch[(residue % p) as usize].at(residue / p, p),
        }
    }

    /// Values on the residues mod `p^n`.
    pub fn sample(&self, p: u64, n: u32) -> Result<Vec<i64>> {
        let depth = self.depth();
        if depth > n {
            return Err(Error::NotLocallyConstant {
                level: n,
                needed: depth,
            });
        }
        let size = pow_u64(p, n)?;
        Ok((0..size).map(|r| self.at(r, p)).collect())
    }

    pub fn is_identically(&self, value: i64) -> bool {
        matches!(self, ValueTree::Const(v) if *v == value)
    }
}

/// Modular arithmetic for Taylor shifts: `u128` when `p^cap` fits in 64
/// bits, big integers otherwise.
enum Modulus {
    Small(u64),
    Big(BigInt),
}

struct LocalGen {
    // v_p of the common denominator
    den_val: i64,
    // clamp for valuations of the integral numerator
    cap: u32,
    modulus: Modulus,
    small: Vec<u64>,
    big: Vec<BigInt>,
}

struct LocalContext {
    p: u64,
    const_val: i64,
    gens: Vec<LocalGen>,
    max_level: u32,
}

fn val_u64_clamped(mut r: u64, p: u64, cap: u32) -> u32 {
    if r == 0 {
        return cap;
    }
    let mut v = 0;
    while r.is_multiple_of(p) && v < cap {
        r /= p;
        v += 1;
    }
    v
}

impl LocalContext {
    fn new(ideal: &IntIdeal, max_level: u32) -> Result<Self> {
        let Ambient::Local(p) = ideal.ambient else {
            return Err(Error::NotLocal(ideal.to_string()));
        };
        let const_val = val_int(&ideal.const_gen, p).unwrap_or(0) as i64;
        let gens = ideal
            .poly_gens
            .iter()
            .map(|g| {
                let (den, num) = g.integer_form();
                let den_val = val_int(den, p).unwrap_or(0) as i64;
                // valuations of g at or above const_val + 1 never matter
                let cap = (const_val + den_val + 1) as u32;
                let big_mod = num_traits::pow(BigInt::from(p), cap as usize);
                let reduce = |c: &BigInt| c.mod_floor(&big_mod);
                match big_mod.to_u64().filter(|m| *m < (1u64 << 63)) {
                    Some(m) => LocalGen {
                        den_val,
                        cap,
                        modulus: Modulus::Small(m),
                        small: num
                            .iter()
                            .map(|c| reduce(c).to_u64().unwrap_or(0))
                            .collect(),
                        big: Vec::new(),
                    },
                    None => LocalGen {
                        den_val,
                        cap,
                        small: Vec::new(),
                        big: num.iter().map(reduce).collect(),
                        modulus: Modulus::Big(big_mod),
                    },
                }
            })
            .collect();
        Ok(LocalContext {
            p,
            const_val,
            gens,
            max_level,
        })
    }

    /// `(v(g(a)), min_{k>=1} v(c_k))` on the ball `a + p^n Z_p`, clamped.
    fn ball_stats(&self, g: &LocalGen, a: &BigInt, n: u32) -> (i64, i64) {
        let p = self.p;
        let (v0, delta) = match &g.modulus {
            Modulus::Small(m) => {
                let m = *m as u128;
                let a = a.mod_floor(&BigInt::from(m)).to_u64().unwrap_or(0) as u128;
                let step = (p as u128).checked_pow(n).map_or(0, |s| s % m);
                let mut q: Vec<u128> = Vec::with_capacity(g.small.len());
                for c in g.small.iter().rev() {
                    q.push(0);
                    for k in (0..q.len()).rev() {
                        let lower = if k > 0 { q[k - 1] * step % m } else { 0 };
                        q[k] = (q[k] * a % m + lower) % m;
                    }
                    q[0] = (q[0] + *c as u128) % m;
                }
                let v0 = q
                    .first()
                    .map_or(g.cap, |c| val_u64_clamped(*c as u64, p, g.cap));
                let delta = q
                    .iter()
                    .skip(1)
                    .map(|c| val_u64_clamped(*c as u64, p, g.cap))
                    .min()
                    .unwrap_or(g.cap);
                (v0, delta)
            }
            Modulus::Big(m) => {
                let step = num_traits::pow(BigInt::from(p), n as usize).mod_floor(m);
                let a = a.mod_floor(m);
                let mut q: Vec<BigInt> = Vec::with_capacity(g.big.len());
                for c in g.big.iter().rev() {
                    q.push(BigInt::zero());
                    for k in (0..q.len()).rev() {
                        let lower = if k > 0 {
                            &q[k - 1] * &step
                        } else {
                            BigInt::zero()
                        };
                        q[k] = (&q[k] * &a + lower).mod_floor(m);
                    }
                    q[0] = (&q[0] + c).mod_floor(m);
                }
                let clamp = |c: &BigInt| val_int(c, p).map_or(g.cap, |v| (v as u32).min(g.cap));
                let v0 = q.first().map_or(g.cap, clamp);
                let delta = q.iter().skip(1).map(clamp).min().unwrap_or(g.cap);
                (v0, delta)
            }
        };
        (v0 as i64 - g.den_val, delta as i64 - g.den_val)
    }

    fn tree(&self, a: &BigInt, n: u32) -> Result<ValueTree> {
        let stats: Vec<(i64, i64)> = self.gens.iter().map(|g| self.ball_stats(g, a, n)).collect();
        let w = stats.iter().map(|s| s.0).fold(self.const_val, i64::min);
        let bounded = stats.iter().all(|&(v0, d)| v0.min(d) >= w);
        let witnessed = self.const_val == w || stats.iter().any(|&(v0, d)| v0 == w && d > w);
        if bounded && witnessed {
            return Ok(ValueTree::Const(w));
        }
        if n >= self.max_level {
            return Err(Error::PrecisionCap {
                cap: self.max_level,
            });
        }
        let step = num_traits::pow(BigInt::from(self.p), n as usize);
        let children = (0..self.p)
            .map(|j| self.tree(&(a + &step * BigInt::from(j)), n + 1))
            .collect::<Result<Vec<_>>>()?;
        if let ValueTree::Const(v) = children[0] {
            if children.iter().all(|c| c.is_identically(v)) {
                return Ok(ValueTree::Const(v));
            }
        }
        Ok(ValueTree::Split(children))
    }
}

/// The certified value function of a local ideal as a tree.
pub fn value_tree(ideal: &IntIdeal, max_level: u32) -> Result<ValueTree> {
    LocalContext::new(ideal, max_level)?.tree(&BigInt::zero(), 0)
}

/// `a ↦ min(v_p(m), min_f v_p(f(a)))` on the residues mod `p^n`.
pub fn value_function(ideal: &IntIdeal, n: u32) -> Result<Vec<i64>> {
    let Ambient::Local(p) = ideal.ambient else {
        return Err(Error::NotLocal(ideal.to_string()));
    };
    value_tree(ideal, DEFAULT_MAX_LEVEL.max(n))?.sample(p, n)
}

pub fn class_of_ideal_with(ideal: &IntIdeal, max_level: u32) -> Result<StepClass> {
    let Ambient::Local(p) = ideal.ambient else {
        return Err(Error::NotLocal(ideal.to_string()));
    };
    let tree = value_tree(ideal, max_level)?;
    let level = tree.depth();
    StepClass::new(p, level, tree.sample(p, level)?)
}

pub fn class_of_ideal(ideal: &IntIdeal) -> Result<StepClass> {
    class_of_ideal_with(ideal, DEFAULT_MAX_LEVEL)
}

/// `v_p((p^n - 1)!)`.
fn factorial_valuation(p: u64, n: u32) -> u64 {
    let top = p.pow(n) - 1;
    let mut e = 0;
    let mut q = p;
    while q <= top {
        e += top / q;
        q = match q.checked_mul(p) {
            Some(q) => q,
            None => break,
        };
    }
    e
}

/// An ideal of `Int(Z_(p))` whose class is `sigma`.
///
/// With `n` the level and `e = v_p((p^n - 1)!)`, the polynomial
/// `h_r = Π_{0 <= j < p^n, j != r} (X - j)` has valuation exactly `e` on the
/// ball `r + p^n Z_p` and at least `e + 1` off it. Writing
/// `max(sigma) - sigma = Σ_r β_r 1_{ball r}` and `K = (e + 1) max β`, the ideal
/// `(p^K, p^(K - (e+1) β_r) h_r^(β_r) : β_r > 0)` has value function
/// `K - β`, hence class `sigma`. It is the product `Π_r (p^(e+1), h_r)^(β_r)`
/// divided by a power of `p`.
pub fn realize_class(sigma: &StepClass) -> Result<IntIdeal> {
    let p = sigma.p;
    let n = sigma.level;
    if n == 0 {
        return Ok(IntIdeal::unit(Ambient::Local(p)));
    }
    let top = sigma.values.iter().copied().max().unwrap_or(0);
    let beta: Vec<u64> = sigma.values.iter().map(|v| (top - v) as u64).collect();
    let e = factorial_valuation(p, n);
    let beta_max = beta.iter().copied().max().unwrap_or(0);
    let k = (e + 1) * beta_max;
    let size = sigma.values.len() as u64;
    let pb = BigInt::from(p);
    let mut gens = Vec::new();
    for (r, &b) in beta.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let mut h = vec![BigInt::one()];
        for j in (0..size).filter(|&j| j != r as u64) {
            h = mul_linear(&h, &BigInt::from(j));
        }
        let mut g = vec![num_traits::pow(pb.clone(), (k - (e + 1) * b) as usize)];
        for _ in 0..b {
            g = mul_poly(&g, &h);
        }
        gens.push(BinPoly::from_integer_power(g));
    }
    IntIdeal::new(Ambient::Local(p), num_traits::pow(pb, k as usize), gens)
}

/// `f * (X - root)`
fn mul_linear(f: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len() + 1];
    for (i, c) in f.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

fn mul_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn local(p: u64, s: &str) -> IntIdeal {
        IntIdeal::parse(s, Ambient::Local(p)).unwrap()
    }

    /// Brute-force value function: evaluate the generators at many integer
    /// points of each residue class and take the minimum valuation seen.
    fn sampled_value(ideal: &IntIdeal, p: u64, residue: u64, n: u32, samples: u64) -> i64 {
        let m = val_int(ideal.const_gen(), p).unwrap() as i64;
        let step = p.pow(n);
        (0..samples)
            .map(|k| {
                let x = Rational::from_integer(BigInt::from(residue + k * step));
                ideal
                    .poly_gens()
                    .iter()
                    .filter_map(|f| {
                        let v = f.evaluate(&x);
                        (!v.is_zero()).then(|| crate::exactnum::val_p(&v, p).unwrap())
                    })
                    .fold(m, i64::min)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn canonical_forms() {
        let c = StepClass::new(2, 1, vec![3, 4]).unwrap();
        assert_eq!((c.level(), c.values()), (1, &[0, 1][..]));
        let z = StepClass::new(2, 1, vec![0, 1])
            .unwrap()
            .add(&StepClass::new(2, 1, vec![0, -1]).unwrap())
            .unwrap();
        assert!(z.is_zero());
        assert_eq!(z.values(), &[0]);
        let c = StepClass::new(2, 2, vec![5, 5, 5, 5]).unwrap();
        assert!(c.is_zero());
        // constant on classes mod 2 at level 2 collapses to level 1
        let c = StepClass::new(2, 2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!((c.level(), c.values()), (1, &[0, 1][..]));
        assert!(StepClass::new(2, 1, vec![0]).is_err());
        assert!(StepClass::new(4, 1, vec![0; 4]).is_err());
        assert_eq!(c.to_string(), "p=2 n=1 [0,1]");
    }

    #[test]
    fn group_law() {
        let a = StepClass::new(3, 1, vec![0, 2, 1]).unwrap();
        let b = StepClass::new(3, 2, (0..9).map(|r| r % 4).collect()).unwrap();
        assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        assert!(a.add(&a.neg()).unwrap().is_zero());
        assert_eq!(a.refine(2).unwrap()[4], 2);
        assert_eq!(b.refine(0), Err(Error::LevelTooLow { have: 2, want: 0 }));
        let c = StepClass::zero(2).unwrap();
        assert_eq!(a.add(&c), Err(Error::PrimeMismatch(3, 2)));
    }

    #[test]
    fn ball_indicators() {
        assert_eq!(
            StepClass::ball_indicator(2, 1, 1).unwrap().values(),
            &[0, 1]
        );
        assert_eq!(
            StepClass::ball_indicator(2, 0, 1).unwrap().values(),
            &[0, -1]
        );
        assert_eq!(
            StepClass::ball_indicator(3, 2, 1).unwrap().values(),
            &[0, 0, 1]
        );
        assert_eq!(
            StepClass::ball_indicator(2, 4, 2),
            Err(Error::ResidueOutOfRange {
                p: 2,
                residue: 4,
                level: 2
            })
        );
    }

    #[test]
    fn value_functions() {
        let i = local(2, "2; [-1, 1]");
        assert_eq!(value_function(&i, 2).unwrap(), vec![0, 1, 0, 1]);
        for r in 0..4 {
            assert_eq!(sampled_value(&i, 2, r, 2, 40), [0, 1, 0, 1][r as usize]);
        }
        let i = local(2, "2; [0, -1, 1]");
        assert_eq!(value_function(&i, 1).unwrap(), vec![1, 1]);
        assert_eq!(value_function(&local(5, "1"), 1).unwrap(), vec![0; 5]);
        // a level-1 function cannot be sampled at level 0
        assert_eq!(
            value_function(&local(2, "2; [-1, 1]"), 0),
            Err(Error::NotLocallyConstant {
                level: 0,
                needed: 1
            })
        );
    }

    #[test]
    fn precision_cap_is_reported() {
        let i = local(2, "1099511627776; [0, 1]");
        assert_eq!(
            class_of_ideal_with(&i, 8),
            Err(Error::PrecisionCap { cap: 8 })
        );
        // (2^40, X) has value function min(40, v(x)): needs level 40
        assert_eq!(class_of_ideal(&i), Err(Error::PrecisionCap { cap: 24 }));
    }

    #[test]
    fn denominators_are_respected() {
        // C(X,2) at p = 2: values v_2(x(x-1)/2), min with v_2(4) = 2
        let i = local(2, "4; [0, -1/2, 1/2]");
        let f = value_function(&i, 3).unwrap();
        for r in 0..8 {
            assert_eq!(f[r as usize], sampled_value(&i, 2, r, 3, 64), "residue {r}");
        }
    }

    #[test]
    fn classes_of_ideals() {
        assert!(class_of_ideal(&local(2, "2; [0, -1, 1]"))
            .unwrap()
            .is_zero());
        assert_eq!(
            class_of_ideal(&local(2, "2; [-1, 1]")).unwrap(),
            StepClass::ball_indicator(2, 1, 1).unwrap()
        );
        // principal ideals generated by a constant have trivial class
        assert!(class_of_ideal(&local(3, "9")).unwrap().is_zero());
        assert!(matches!(
            class_of_ideal(&IntIdeal::unit(Ambient::Global)),
            Err(Error::NotLocal(_))
        ));
    }

    #[test]
    fn realization() {
        let sigma = StepClass::ball_indicator(2, 1, 1).unwrap();
        let i = realize_class(&sigma).unwrap();
        assert_eq!(i, local(2, "2; [-1, 1]"));
        assert_eq!(class_of_ideal(&i).unwrap(), sigma);

        let sigma = StepClass::ball_indicator(3, 0, 1).unwrap();
        let i = realize_class(&sigma).unwrap();
        assert_eq!(i, local(3, "3; [0, -2, 1], [0, -1, 1]"));
        let product = local(3, "3; [0, -2, 1]")
            .mul(&local(3, "3; [0, -1, 1]"))
            .unwrap();
        assert_eq!(value_function(&product, 1).unwrap(), vec![2, 1, 1]);
        assert_eq!(class_of_ideal(&product).unwrap(), sigma);
        assert_eq!(class_of_ideal(&i).unwrap(), sigma);

        assert_eq!(
            realize_class(&StepClass::zero(5).unwrap()).unwrap(),
            IntIdeal::unit(Ambient::Local(5))
        );
    }

    #[test]
    fn realization_matches_naive_product() {
        // the reduced generating set and the full product of the factors
        // (p^(e+1), h_r) differ by a constant shift of the value function
        let sigma = StepClass::new(2, 2, vec![0, 2, 1, 0]).unwrap();
        let reduced = realize_class(&sigma).unwrap();
        let e = factorial_valuation(2, 2);
        assert_eq!(e, 1);
        let top = 2;
        let mut naive = IntIdeal::unit(Ambient::Local(2));
        for r in 0..4u64 {
            let mut h = vec![BigInt::one()];
            for j in (0..4).filter(|&j| j != r) {
                h = mul_linear(&h, &BigInt::from(j));
            }
            let factor = IntIdeal::new(
                Ambient::Local(2),
                BigInt::from(4),
                vec![BinPoly::from_integer_power(h)],
            )
            .unwrap();
            for _ in 0..(top - sigma.values()[r as usize]) {
                naive = naive.mul(&factor).unwrap();
            }
        }
        let a = value_function(&reduced, 2).unwrap();
        let b = value_function(&naive, 2).unwrap();
        let shift = b[0] - a[0];
        assert!(a.iter().zip(&b).all(|(x, y)| y - x == shift));
        assert_eq!(class_of_ideal(&naive).unwrap(), sigma);
    }

    #[test]
    fn ideal_products() {
        let a = local(2, "2; [0, 1]");
        let b = local(2, "2; [-1, 1]");
        assert_eq!(
            a.mul(&b).unwrap(),
            local(2, "4; [-2, 2], [0, 2], [0, -1, 1]")
        );
        let u = IntIdeal::unit(Ambient::Local(2));
        assert_eq!(u.mul(&b).unwrap(), b);
        assert_eq!(b.mul(&b).unwrap(), local(2, "4; [-2, 2], [1, -2, 1]"));
        assert!(matches!(
            a.mul(&a.globalize()),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn ideal_syntax() {
        let i = local(2, "6; [-1, 1], [0, 0, 1]");
        assert_eq!(i.to_string(), "6; [-1, 1], [0, 0, 1]");
        assert!(IntIdeal::parse("0; [0, 1]", Ambient::Global).is_err());
        assert!(matches!(
            IntIdeal::parse("2; [0, 1/2]", Ambient::Global),
            Err(Error::NotIntegerValued(_))
        ));
        assert!(IntIdeal::parse("2; [0, 1", Ambient::Global).is_err());
        assert_eq!(parse_values("[0, 1,-1]").unwrap(), vec![0, 1, -1]);
        assert_eq!(parse_values("0,2").unwrap(), vec![0, 2]);
    }

    #[test]
    fn localization_of_ideals() {
        let g = IntIdeal::parse("6; [-1, 1]", Ambient::Global).unwrap();
        assert_eq!(g.localize(3).unwrap().ambient(), Ambient::Local(3));
        let l = g.localize(3).unwrap();
        assert_eq!(l.localize(2), Err(Error::PrimeMismatch(3, 2)));
        assert_eq!(l.globalize(), g);
    }
}
