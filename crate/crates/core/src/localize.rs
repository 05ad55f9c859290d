//! Per-polynomial localization criterion for `Int(Z)` at a flat overring `T`.
//!
//! `f` lies in `Int(Z)T` iff `(Z :_Z f(Z))T = T`, and in `Int(T)` iff
//! `(T :_T f(Z)T) = T`. Comparing the two conductors polynomial by
//! polynomial decides one instance of `Int(Z)T = Int(T)`; the ring-level
//! statement quantifies over all of `Q[X]`, so it is only ever sampled.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{FracIdeal, OverringZ, Rational};
use crate::intpoly::BinPoly;
use crate::serde_display;

/// Parameters of a deterministic pseudo-random sample.
///
/// Draws come from `XorShiftRng::seed_from_u64(seed)` (Marsaglia xorshift128),
/// so a given spec yields the same sequence on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    pub degree_bound: usize,
    pub height_bound: u64,
    pub count: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn rng(&self) -> XorShiftRng {
        XorShiftRng::seed_from_u64(self.seed)
    }

    /// `count` nonzero polynomials with power-basis coefficients `a/b`,
    /// `|a| <= height_bound`, `1 <= b <= height_bound`.
    pub fn polynomials(&self) -> Vec<BinPoly> {
        let mut rng = self.rng();
        (0..self.count)
            .map(|_| random_poly(&mut rng, self.degree_bound, self.height_bound))
            .collect()
    }
}

pub(crate) fn random_poly(rng: &mut impl Rng, degree_bound: usize, height: u64) -> BinPoly {
    let h = height.max(1) as i64;
    loop {
        let degree = rng.random_range(0..=degree_bound);
        let coeffs: Vec<Rational> = (0..=degree)
            .map(|_| {
                let n = rng.random_range(-h..=h);
                let d = rng.random_range(1..=h);
                Rational::new(BigInt::from(n), BigInt::from(d))
            })
            .collect();
        let f = BinPoly::from_power(&coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Both sides of the conductor comparison for one polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    #[serde(with = "serde_display")]
    pub f: BinPoly,
    #[serde(with = "serde_display")]
    pub t: OverringZ,
    /// `(Z :_Z f(Z)) T`
    #[serde(with = "serde_display")]
    pub lhs: FracIdeal,
    /// `(T :_T f(Z)T)`
    #[serde(with = "serde_display")]
    pub rhs: FracIdeal,
    pub equal: bool,
}

/// `f ∈ Int(Z)T`.
pub fn member_int_extension(f: &BinPoly, t: &OverringZ) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(f.conductor(&OverringZ::integers())?.extend(t)?.is_unit())
}

/// `f ∈ Int(T)`.
pub fn member_int_of_t(f: &BinPoly, t: &OverringZ) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(FracIdeal::unit(t).colon(&f.value_module(t)?)?.is_unit())
}

pub fn criterion_holds(f: &BinPoly, t: &OverringZ) -> Result<CriterionVerdict> {
    let lhs = f.conductor(&OverringZ::integers())?.extend(t)?;
    let rhs = FracIdeal::unit(t).colon(&f.value_module(&OverringZ::integers())?.extend(t)?)?;
    let equal = lhs.equals(&rhs)?;
    Ok(CriterionVerdict {
        f: f.clone(),
        t: t.clone(),
        lhs,
        rhs,
        equal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    #[serde(with = "serde_display")]
    pub overring: OverringZ,
    pub sample: SampleSpec,
    pub total: usize,
    pub equal: usize,
    pub counterexamples: Vec<CriterionVerdict>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.equal == self.total
    }
}

/// Runs the criterion over a seeded sample. `Z` is Noetherian, so every
/// sampled instance must come out equal; a counterexample is a bug.
pub fn noetherian_oracle(sample: &SampleSpec, t: &OverringZ) -> Result<OracleReport> {
    let mut equal = 0;
    let mut counterexamples = Vec::new();
    let polys = sample.polynomials();
    for f in &polys {
        let v = criterion_holds(f, t)?;
        if v.equal {
            equal += 1;
        } else {
            counterexamples.push(v);
        }
    }
    Ok(OracleReport {
        overring: t.clone(),
        sample: *sample,
        total: polys.len(),
        equal,
        counterexamples,
    })
}

/// Element-level transfer through a complete family: if `f ∈ Int(S)` for
/// every `S` in `family`, then `f ∈ Int(Z)T`. Returns whether the
/// implication held.
pub fn intersection_transfer_check(
    f: &BinPoly,
    family: &[OverringZ],
    t: &OverringZ,
) -> Result<bool> {
    let covered = family
        .iter()
        .map(OverringZ::non_inverted)
        .reduce(|a, b| a.union(&b));
    if covered.as_ref() != Some(&t.non_inverted()) {
        return Err(Error::FamilyIncomplete);
    }
    for s in family {
        if !member_int_of_t(f, s)? {
            return Ok(true);
        }
    }
    member_int_extension(f, t)
}
