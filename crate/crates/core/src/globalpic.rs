//! Globalization over `Z` with the family `{Z_(p)}`: the extension map
//! `Pic(Int(Z)) -> ⊕_p Pic(Int(Z_(p)))`, a section of it, and a kernel test.
//!
//! `Int(Z)` is Prüfer, so a unitary finitely generated ideal is invertible
//! and is determined by its extensions to the `Int(Z_(p))`. Two such ideals
//! with the same local value functions at every prime are equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{check_prime, prime_factors, Rational};
use crate::picdvr::{
    class_of_ideal, parse_values, realize_class, value_tree, Ambient, IntIdeal, StepClass,
    ValueTree, DEFAULT_MAX_LEVEL,
};
use crate::serde_display;

/// A finitely supported family of local classes, one per prime.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LocalClassVector {
    entries: BTreeMap<u64, StepClass>,
}

impl LocalClassVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zero classes are dropped.
    pub fn insert(&mut self, class: StepClass) {
        if class.is_zero() {
            self.entries.remove(&class.p());
        } else {
            self.entries.insert(class.p(), class);
        }
    }

    pub fn from_classes(classes: impl IntoIterator<Item = StepClass>) -> Result<Self> {
        let mut v = Self::new();
        for c in classes {
            if v.entries.contains_key(&c.p()) {
                return Err(Error::parse(c.to_string(), "prime listed twice"));
            }
            v.insert(c);
        }
        Ok(v)
    }

    pub fn get(&self, p: u64) -> Option<&StepClass> {
        self.entries.get(&p)
    }

    pub fn entries(&self) -> &BTreeMap<u64, StepClass> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &LocalClassVector) -> Result<LocalClassVector> {
        let mut out = self.clone();
        for (p, c) in &other.entries {
            let sum = match out.entries.get(p) {
                Some(a) => a.add(c)?,
                None => c.clone(),
            };
            out.insert(sum);
        }
        Ok(out)
    }

    pub fn neg(&self) -> LocalClassVector {
        LocalClassVector {
            entries: self.entries.iter().map(|(p, c)| (*p, c.neg())).collect(),
        }
    }
}

/// `2:[0,1];3:[0,0,1]`, empty for the zero vector.
impl fmt::Display for LocalClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, c)) in self.entries.iter().enumerate() {
            let vals: Vec<String> = c.values().iter().map(i64::to_string).collect();
            write!(
                f,
                "{}{}:[{}]",
                if i == 0 { "" } else { ";" },
                p,
                vals.join(",")
            )?;
        }
        Ok(())
    }
}

impl FromStr for LocalClassVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut classes = Vec::new();
        for part in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            let (p, vals) = part
                .split_once(':')
                .ok_or_else(|| Error::parse(part, "expected prime:[values]"))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(p.trim(), "not a prime"))?;
            classes.push(StepClass::from_values(p, parse_values(vals)?)?);
        }
        LocalClassVector::from_classes(classes)
    }
}

impl Serialize for LocalClassVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn local_tree(i: &IntIdeal, p: u64) -> Result<ValueTree> {
    value_tree(&i.localize(p)?, DEFAULT_MAX_LEVEL)
}

fn require_global(i: &IntIdeal) -> Result<()> {
    match i.ambient() {
        Ambient::Global => Ok(()),
        Ambient::Local(p) => Err(Error::AmbientMismatch {
            left: Ambient::Local(p).to_string(),
            right: Ambient::Global.to_string(),
        }),
    }
}

/// Primes `p` with `I Int(Z_(p)) != Int(Z_(p))`: the prime factors of the
/// constant generator, minus those where the local value function is zero.
pub fn support(i: &IntIdeal) -> Result<BTreeSet<u64>> {
    require_global(i)?;
    let mut out = BTreeSet::new();
    for p in prime_factors(i.const_gen())? {
        if !local_tree(i, p)?.is_identically(0) {
            out.insert(p);
        }
    }
    Ok(out)
}

/// `[I] ↦ ([I Int(Z_(p))])_p`.
pub fn pi_theta(i: &IntIdeal) -> Result<LocalClassVector> {
    let mut v = LocalClassVector::new();
    for p in support(i)? {
        v.insert(class_of_ideal(&i.localize(p)?)?);
    }
    Ok(v)
}

/// An ideal of `Int(Z)` whose local classes are `v`.
///
/// Each class is realized locally as `(p^K_p; gens_p)`. The product of these
/// ideals over `Int(Z)` is generated by `Π_p p^K_p` together with
/// `(Π_{q != p} q^K_q) g` for `g` in `gens_p`: at `p` the cofactor is a unit,
/// and every other generator already lies in `p^K_p Int(Z_(p))`.
pub fn globalize(v: &LocalClassVector) -> Result<IntIdeal> {
    let locals = v
        .entries
        .values()
        .map(realize_class)
        .collect::<Result<Vec<_>>>()?;
    let total: BigInt = locals.iter().map(|l| l.const_gen().clone()).product();
    let mut gens = Vec::new();
    for l in &locals {
        let cofactor = Rational::from_integer(&total / l.const_gen());
        gens.extend(l.poly_gens().iter().map(|g| g.scale(&cofactor)));
    }
    IntIdeal::new(Ambient::Global, total, gens)
}

/// Outcome of the principal-ideal test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalVerdict {
    pub principal: bool,
    /// The generator `c` with `I = c Int(Z)` when principal.
    #[serde(serialize_with = "serialize_opt")]
    pub generator: Option<BigInt>,
    #[serde(with = "serde_display")]
    pub classes: LocalClassVector,
}

fn serialize_opt<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(c) => s.collect_str(c),
        None => s.serialize_none(),
    }
}

/// Whether `I` is principal in `Int(Z)`.
///
/// A unitary ideal has no nonconstant common factor in `Q[X]`, so the only
/// candidate generator is the constant `c = Π p^φ_p` where `φ_p` is the
/// (constant) local value function at `p`. The inclusion `I ⊆ c Int(Z)` is
/// checked exactly on generators; `c ∈ I` holds locally everywhere since
/// `φ_p = v_p(c)`.
pub fn divisorially_principal(i: &IntIdeal) -> Result<PrincipalVerdict> {
    require_global(i)?;
    let classes = pi_theta(i)?;
    if !classes.is_zero() {
        return Ok(PrincipalVerdict {
            principal: false,
            generator: None,
            classes,
        });
    }
    let mut c = BigInt::one();
    for p in prime_factors(i.const_gen())? {
        match local_tree(i, p)? {
            ValueTree::Const(v) => c *= num_traits::pow(BigInt::from(p), v as usize),
            ValueTree::Split(_) => {
                return Err(Error::NotLocallyConstant {
                    level: 0,
                    needed: 1,
                })
            }
        }
    }
    let inv = Rational::new(BigInt::one(), c.clone());
    let contained = (i.const_gen() % &c).is_zero()
        && i.poly_gens().iter().all(|g| g.scale(&inv).is_int_valued());
    Ok(PrincipalVerdict {
        principal: contained,
        generator: contained.then_some(c),
        classes,
    })
}

/// Parameters of the exactness experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessSpec {
    pub seed: u64,
    pub count: usize,
    pub primes: Vec<u64>,
    pub max_level: u32,
    pub max_value: i64,
}

impl ExactnessSpec {
    pub fn new(seed: u64, count: usize) -> Self {
        ExactnessSpec {
            seed,
            count,
            primes: vec![2, 3],
            max_level: 2,
            max_value: 3,
        }
    }

    /// `count` seeded vectors supported on `primes`, levels `<= max_level`,
    /// raw values in `[0, max_value]`.
    pub fn vectors(&self) -> Result<Vec<LocalClassVector>> {
        for &p in &self.primes {
            check_prime(p)?;
        }
        let mut rng = crate::localize::SampleSpec {
            degree_bound: 0,
            height_bound: 0,
            count: 0,
            seed: self.seed,
        }
        .rng();
        (0..self.count)
            .map(|_| {
                let mut v = LocalClassVector::new();
                for &p in &self.primes {
                    if rng.random_bool(0.25) {
                        continue;
                    }
                    let level = rng.random_range(0..=self.max_level);
                    let values = (0..p.pow(level))
                        .map(|_| rng.random_range(0..=self.max_value))
                        .collect();
                    v.insert(StepClass::new(p, level, values)?);
                }
                Ok(v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessSample {
    pub index: usize,
    #[serde(with = "serde_display")]
    pub vector: LocalClassVector,
    /// `pi_theta(globalize(v)) = v`
    pub surjective: bool,
    /// `globalize(v) globalize(-v)` is principal
    pub kernel: bool,
    /// `globalize(v)` is not principal, for `v != 0`
    pub nontrivial_rejected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub spec: ExactnessSpec,
    pub surjectivity: Tally,
    pub kernel: Tally,
    pub nontrivial: Tally,
    pub samples: Vec<ExactnessSample>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.surjectivity.fail == 0 && self.kernel.fail == 0 && self.nontrivial.fail == 0
    }
}

/// Samples the exact sequence `0 -> Pic(Int(Z)) -> ⊕_p Pic(Int(Z_(p))) -> 0`.
pub fn exactness_report(spec: &ExactnessSpec) -> Result<ExactnessReport> {
    let mut report = ExactnessReport {
        spec: spec.clone(),
        surjectivity: Tally::default(),
        kernel: Tally::default(),
        nontrivial: Tally::default(),
        samples: Vec::new(),
    };
    for (index, v) in spec.vectors()?.into_iter().enumerate() {
        let ideal = globalize(&v)?;
        let surjective = pi_theta(&ideal)? == v;
        let product = ideal.mul(&globalize(&v.neg())?)?;
        let kernel = divisorially_principal(&product)?.principal;
        let nontrivial_rejected = if v.is_zero() {
            None
        } else {
            Some(!divisorially_principal(&ideal)?.principal)
        };
        report.surjectivity.record(surjective);
        report.kernel.record(kernel);
        if let Some(ok) = nontrivial_rejected {
            report.nontrivial.record(ok);
        }
        report.samples.push(ExactnessSample {
            index,
            vector: v,
            surjective,
            kernel,
            nontrivial_rejected,
        });
    }
    Ok(report)
}

/// Convenience for building global ideals from text.
pub fn parse_global(s: &str) -> Result<IntIdeal> {
    IntIdeal::parse(s, Ambient::Global)
}
