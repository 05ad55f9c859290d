//! Seeded self-check suites, one per acceptance property.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;
use serde::Serialize;

use crate::error::Result;
use crate::exactnum::{int, OverringZ, Rational};
use crate::globalpic::{exactness_report, ExactnessSpec};
use crate::intpoly::BinPoly;
use crate::localize::{noetherian_oracle, random_poly, SampleSpec};
use crate::picdvr::{class_of_ideal, realize_class, StepClass};
use crate::spectra::{
    build_example_weakjaff, derived_sequence, full_model, localization_report,
    picpol_decomposition, Classification, Point, SetExpr, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            passed: true,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }
}

pub const LOCALIZATION_RINGS: [&str; 6] = ["Z_(2)", "Z_(3)", "Z_(5)", "Z[1/2]", "Z[1/6]", "Q"];

/// The conductor criterion over the six standard overrings.
pub fn localization_suite(seed: u64, count: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("localization");
    let sample = SampleSpec {
        degree_bound: 6,
        height_bound: 100,
        count,
        seed,
    };
    for t in LOCALIZATION_RINGS {
        let t: OverringZ = t.parse()?;
        let report = noetherian_oracle(&sample, &t)?;
        for v in &report.counterexamples {
            r.check(false, || {
                format!("{} over {}: {} != {}", v.f, v.t, v.lhs, v.rhs)
            });
        }
        r.checks += report.equal;
    }
    Ok(r)
}

/// Value modules against gcds of sampled values, plus two fixed divisors.
pub fn value_module_suite(seed: u64, count: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("value_modules");
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let z = OverringZ::integers();
    for _ in 0..count {
        let f = random_poly(&mut rng, 6, 100);
        let module = f.value_module(&z)?;
        let top = f.degree().unwrap_or(0) as i64 + 10;
        let (num, den) = (0..=top).fold((BigInt::zero(), BigInt::from(1)), |(n, d), x| {
            let v = f.evaluate(&int(x));
            let l = d.lcm(v.denom());
            ((n * (&l / &d)).gcd(&(v.numer() * (&l / v.denom()))), l)
        });
        let sampled = Rational::new(num, den);
        r.check(*module.generator() == sampled, || {
            format!(
                "{f}: module {} but sampled values generate {sampled}",
                module.generator()
            )
        });
    }
    for (text, want) in [("[0, -1, 0, 0, 0, 1]", 30), ("[0, 1, 1]", 2)] {
        let d = text.parse::<BinPoly>()?.fixed_divisor()?;
        r.check(d == BigInt::from(want), || {
            format!("fixed divisor of {text} is {d}")
        });
    }
    Ok(r)
}

/// Canonical classes with `values[0] = 0`, other values in `[0, max_value]`
/// and minimal level `<= max_level`.
pub fn canonical_classes(p: u64, max_level: u32, max_value: i64) -> Result<Vec<StepClass>> {
    let mut out = Vec::new();
    for level in 0..=max_level {
        let size = p.pow(level) as usize;
        let mut values = vec![0i64; size];
        loop {
            let c = StepClass::new(p, level, values.clone())?;
            if c.level() == level {
                out.push(c);
            }
            // odometer over values[1..]
            let mut i = 1;
            while i < size && values[i] == max_value {
                values[i] = 0;
                i += 1;
            }
            if i >= size {
                break;
            }
            values[i] += 1;
        }
    }
    Ok(out)
}

/// Round trip over every small canonical class and the homomorphism law on
/// random pairs.
pub fn pic_suite(seed: u64, pairs: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("local_picard");
    for p in [2, 3] {
        for sigma in canonical_classes(p, 2, 3)? {
            let back = class_of_ideal(&realize_class(&sigma)?)?;
            r.check(back == sigma, || format!("round trip {sigma} -> {back}"));
        }
    }
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let pool = [canonical_classes(2, 2, 3)?, canonical_classes(3, 2, 3)?];
    for _ in 0..pairs {
        let classes = &pool[rng.random_range(0..2)];
        let a = &classes[rng.random_range(0..classes.len())];
        let b = &classes[rng.random_range(0..classes.len())];
        let product = realize_class(a)?.mul(&realize_class(b)?)?;
        let got = class_of_ideal(&product)?;
        let want = a.add(b)?;
        r.check(got == want, || {
            format!("[{a}] + [{b}]: product has class {got}")
        });
    }
    Ok(r)
}

pub fn exactness_suite(seed: u64, count: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("global_exactness");
    let report = exactness_report(&ExactnessSpec::new(seed, count))?;
    for s in &report.samples {
        r.check(s.surjective, || {
            format!("pi_theta(globalize({})) differs", s.vector)
        });
        r.check(s.kernel, || {
            format!("class {} times its inverse is not principal", s.vector)
        });
        if let Some(ok) = s.nontrivial_rejected {
            r.check(ok, || {
                format!("nontrivial class {} reported principal", s.vector)
            });
        }
    }
    Ok(r)
}

pub fn weakjaff_suite() -> Result<SuiteResult> {
    let mut r = SuiteResult::new("weak_jaffard_example");
    let m = build_example_weakjaff(2)?;
    let seq = derived_sequence(&m);
    r.check(
        matches!(&seq.classification, Classification::WeakJaffard { point, .. } if point.is_root()),
        || format!("classification {:?}", seq.classification),
    );
    r.check(seq.sharp && seq.rank == Some(2), || {
        format!("rank {:?}", seq.rank)
    });
    let root = localization_report(&m, &Point::root())?;
    r.check(root.localization == Verdict::No, || {
        format!("root: {:?}", root.localization)
    });
    let leaf = localization_report(&m, &Point(vec![0]))?;
    r.check(leaf.localization == Verdict::Yes, || {
        format!("leaf: {:?}", leaf.localization)
    });
    let d = picpol_decomposition(&m);
    r.check(!d.is_decomposed(), || "decomposition emitted".into());
    Ok(r)
}

pub fn scattered_suite() -> Result<SuiteResult> {
    let mut r = SuiteResult::new("scattered_sharp");
    for k in 0..=3 {
        let m = full_model(k, 2, Some(true))?;
        let seq = derived_sequence(&m);
        r.check(seq.sharp && seq.rank == Some(k as usize + 1), || {
            format!("depth {k}: rank {:?}", seq.rank)
        });
        let d = picpol_decomposition(&m);
        r.check(d.is_decomposed(), || format!("depth {k}: {d:?}"));
    }
    Ok(r)
}

pub fn closure_suite(seed: u64, count: usize) -> Result<SuiteResult> {
    let mut r = SuiteResult::new("closure_derivative");
    let mut rng = XorShiftRng::seed_from_u64(seed);
    for _ in 0..count {
        let a = SetExpr::random(&mut rng, 3, 4, 3).eval(3)?;
        let b = SetExpr::random(&mut rng, 3, 4, 3).eval(3)?;
        let c = a.closure();
        r.check(c.closure() == c, || {
            format!("closure of {a} not idempotent")
        });
        r.check(a.is_subset(&c), || format!("closure of {a} not extensive"));
        r.check(a.derivative().is_subset(&a), || {
            format!("derivative of {a} grows")
        });
        let u = a.union(&b);
        r.check(a.derivative().is_subset(&u.derivative()), || {
            format!("derivative not monotone on {a} within {u}")
        });
        // S' = S ∩ d(S) is additive only on closed sets: {root} ∪ leaves
        let (ca, cb) = (a.closure(), b.closure());
        r.check(
            ca.union(&cb).derivative() == ca.derivative().union(&cb.derivative()),
            || format!("derivative not additive on closed {ca}, {cb}"),
        );
    }
    Ok(r)
}

/// Every suite at the acceptance sizes.
pub fn all_suites(seed: u64) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        localization_suite(seed, 500)?,
        value_module_suite(seed, 200)?,
        pic_suite(seed, 100)?,
        exactness_suite(seed, 100)?,
        weakjaff_suite()?,
        scattered_suite()?,
        closure_suite(seed, 200)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_enumeration() {
        // p = 2: 1 + 3 + (4^3 - 4) canonical classes with values in [0, 3]
        assert_eq!(canonical_classes(2, 2, 3).unwrap().len(), 1 + 3 + 60);
        assert_eq!(canonical_classes(3, 1, 1).unwrap().len(), 4);
    }

    #[test]
    fn small_suites_pass() {
        for r in [
            localization_suite(1, 20).unwrap(),
            value_module_suite(1, 20).unwrap(),
            weakjaff_suite().unwrap(),
            scattered_suite().unwrap(),
            closure_suite(1, 30).unwrap(),
        ] {
            assert!(r.passed, "{r:?}");
        }
    }
}
