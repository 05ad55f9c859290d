//! The `ivp` command line: every library operation behind a subcommand,
//! with JSON reports on standard output.
//!
//! Exit codes: `0` success, `1` a check failed or a computation gave up,
//! `2` malformed input.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, OverringZ};
use crate::globalpic::{
    divisorially_principal, exactness_report, globalize, pi_theta, support, ExactnessSpec,
    LocalClassVector,
};
use crate::intpoly::BinPoly;
use crate::localize::{
    criterion_holds, intersection_transfer_check, member_int_extension, member_int_of_t,
    noetherian_oracle, SampleSpec,
};
use crate::picdvr::{
    class_of_ideal_with, parse_values, realize_class, value_function, Ambient, IntIdeal, StepClass,
    DEFAULT_MAX_LEVEL,
};
use crate::spectra::analysis::{prufer_split, stage};
use crate::spectra::{
    build_example_weakjaff, derived_sequence, localization_report, picpol_decomposition,
    AlmDedModel, PointSet, SetExpr,
};
use crate::verify;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(
    name = "ivp",
    version,
    about = "Exact computations with integer-valued polynomials"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare (Z : f(Z))T with (T : f(Z)T) for one polynomial.
    Localize {
        /// Power-basis coefficients, e.g. "[0,-1/5,0,0,0,1/5]".
        #[arg(long)]
        poly: String,
        #[arg(long)]
        overring: String,
    },
    /// Run the criterion over a seeded random sample.
    LocalizeOracle {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        height: u64,
        /// Repeatable; defaults to Z_(2), Z_(3), Z_(5), Z[1/2], Z[1/6], Q.
        #[arg(long = "overring")]
        overrings: Vec<String>,
    },
    /// Membership in Int(Z)T through a complete family of overrings.
    Transfer {
        #[arg(long)]
        poly: String,
        /// Repeatable member of the family.
        #[arg(long = "member", required = true)]
        family: Vec<String>,
        #[arg(long)]
        overring: String,
    },
    /// Binomial coefficients, value module and conductor of a polynomial.
    Poly {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "Z")]
        overring: String,
    },
    /// Local Picard group of Int(Z_(p))
    #[command(subcommand)]
    Pic(PicCommand),
    /// Ideals of Int(Z) and their local classes
    #[command(subcommand)]
    Global(GlobalCommand),
    /// Models of the maximal spectrum of an almost Dedekind domain
    #[command(subcommand)]
    Spectra(SpectraCommand),
    /// Run every self-check suite.
    VerifyAll {
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum PicCommand {
    /// Class of a unitary ideal "m; [poly], [poly]" of Int(Z_(p)).
    ClassOf {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
    },
    /// Value function of an ideal on the residues mod p^level.
    Value {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        level: u32,
    },
    /// An ideal realizing a class given by its values.
    Realize {
        #[arg(long)]
        p: u64,
        /// Inferred from the number of values when omitted.
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        values: String,
    },
    /// Sum of two classes; `--negate` subtracts the second.
    Add {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        negate: bool,
    },
    /// Class of the indicator of a ball r + p^n Z_p.
    Ball {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        residue: u64,
        #[arg(long)]
        level: u32,
    },
    /// Product of two ideals.
    Mul {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

#[derive(Debug, Subcommand)]
enum GlobalCommand {
    /// Local classes of an ideal of Int(Z).
    PiTheta {
        #[arg(long)]
        ideal: String,
    },
    /// An ideal of Int(Z) with prescribed local classes, e.g. "2:[0,1];3:[0,0,1]".
    Globalize {
        #[arg(long)]
        vector: String,
    },
    /// Whether an ideal of Int(Z) is principal.
    Principal {
        #[arg(long)]
        ideal: String,
    },
    /// Sample the exact sequence over Z.
    Exactness {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SpectraCommand {
    /// Derived sequence, localization verdicts and Prüfer split of a model.
    Analyze { model: PathBuf },
    /// Decomposition of picpol, or the first violated hypothesis.
    Decompose { model: PathBuf },
    /// Localization verdict at one point (label or path such as /0/3).
    Point {
        model: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Closure, derivative and rank of a set expression.
    Set {
        #[arg(long)]
        depth: u32,
        /// JSON set expression, e.g. '{"level": 1}'.
        #[arg(long)]
        expr: String,
    },
    /// The weak Jaffard example: leaves with infinite residue fields
    /// accumulating at a point with residue field F_p.
    ExampleWeakjaff {
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// One row of the operation coverage table: a library operation and an
/// invocation reaching it. `{fixtures}` stands for the test fixture directory.
#[derive(Debug, Clone, Copy)]
pub struct Coverage {
    pub operation: &'static str,
    pub argv: &'static [&'static str],
}

pub const COVERAGE: &[Coverage] = &[
    Coverage {
        operation: "exactnum::OverringZ::from_str",
        argv: &["localize", "--poly", "[0,1/2]", "--overring", "Z[1/6]"],
    },
    Coverage {
        operation: "exactnum::FracIdeal::colon",
        argv: &["poly", "--poly", "[0,1/3]", "--overring", "Z_(3)"],
    },
    Coverage {
        operation: "intpoly::BinPoly::from_power",
        argv: &["poly", "--poly", "[0,-1,0,0,0,1]"],
    },
    Coverage {
        operation: "intpoly::BinPoly::value_module",
        argv: &["poly", "--poly", "[0,1,1]"],
    },
    Coverage {
        operation: "intpoly::BinPoly::fixed_divisor",
        argv: &["poly", "--poly", "[0,-1,0,0,0,1]"],
    },
    Coverage {
        operation: "intpoly::BinPoly::conductor",
        argv: &["poly", "--poly", "[0,1/2]", "--overring", "Z_(2)"],
    },
    Coverage {
        operation: "localize::member_int_extension",
        argv: &["poly", "--poly", "[0,1/2]", "--overring", "Z_(3)"],
    },
    Coverage {
        operation: "localize::member_int_of_t",
        argv: &["poly", "--poly", "[0,1/2]", "--overring", "Z_(3)"],
    },
    Coverage {
        operation: "localize::criterion_holds",
        argv: &[
            "localize",
            "--poly",
            "[0,-1/5,0,0,0,1/5]",
            "--overring",
            "Z_(5)",
        ],
    },
    Coverage {
        operation: "localize::noetherian_oracle",
        argv: &["localize-oracle", "--seed", "1", "--count", "20"],
    },
    Coverage {
        operation: "localize::intersection_transfer_check",
        argv: &[
            "transfer",
            "--poly",
            "[0,1/6]",
            "--member",
            "Z_(2)",
            "--member",
            "Z[1/2]",
            "--overring",
            "Z",
        ],
    },
    Coverage {
        operation: "picdvr::StepClass::new",
        argv: &[
            "pic", "realize", "--p", "2", "--level", "1", "--values", "3,4",
        ],
    },
    Coverage {
        operation: "picdvr::StepClass::add",
        argv: &["pic", "add", "--p", "2", "--a", "0,1", "--b", "0,-1"],
    },
    Coverage {
        operation: "picdvr::StepClass::neg",
        argv: &[
            "pic", "add", "--p", "3", "--a", "0,1,2", "--b", "0,0,1", "--negate",
        ],
    },
    Coverage {
        operation: "picdvr::StepClass::refine",
        argv: &["pic", "add", "--p", "2", "--a", "0,1", "--b", "0,0,1,1"],
    },
    Coverage {
        operation: "picdvr::StepClass::ball_indicator",
        argv: &["pic", "ball", "--p", "2", "--residue", "0", "--level", "1"],
    },
    Coverage {
        operation: "picdvr::value_function",
        argv: &[
            "pic",
            "value",
            "--p",
            "2",
            "--ideal",
            "2; [-1,1]",
            "--level",
            "2",
        ],
    },
    Coverage {
        operation: "picdvr::class_of_ideal",
        argv: &["pic", "class-of", "--p", "2", "--ideal", "2; [-1,1]"],
    },
    Coverage {
        operation: "picdvr::realize_class",
        argv: &["pic", "realize", "--p", "3", "--values", "0,-1,-1"],
    },
    Coverage {
        operation: "picdvr::IntIdeal::mul",
        argv: &[
            "pic",
            "mul",
            "--p",
            "2",
            "--left",
            "2; [0,1]",
            "--right",
            "2; [-1,1]",
        ],
    },
    Coverage {
        operation: "globalpic::support",
        argv: &["global", "pi-theta", "--ideal", "6; [-1,1]"],
    },
    Coverage {
        operation: "globalpic::pi_theta",
        argv: &["global", "pi-theta", "--ideal", "2; [-1,1]"],
    },
    Coverage {
        operation: "globalpic::globalize",
        argv: &["global", "globalize", "--vector", "2:[0,1];3:[0,0,1]"],
    },
    Coverage {
        operation: "globalpic::divisorially_principal",
        argv: &[
            "global",
            "principal",
            "--ideal",
            "4; [0,2], [-2,2], [0,-1,1]",
        ],
    },
    Coverage {
        operation: "globalpic::exactness_report",
        argv: &["global", "exactness", "--seed", "3", "--count", "5"],
    },
    Coverage {
        operation: "spectra::PointSet::closure",
        argv: &["spectra", "set", "--depth", "2", "--expr", "{\"level\": 2}"],
    },
    Coverage {
        operation: "spectra::PointSet::derivative",
        argv: &["spectra", "set", "--depth", "3", "--expr", "\"full\""],
    },
    Coverage {
        operation: "spectra::PointSet::cb_rank",
        argv: &[
            "spectra",
            "set",
            "--depth",
            "1",
            "--expr",
            "{\"points\": [[0], [1]]}",
        ],
    },
    Coverage {
        operation: "spectra::AlmDedModel::load",
        argv: &["spectra", "analyze", "{fixtures}/weakjaff.json"],
    },
    Coverage {
        operation: "spectra::derived_sequence",
        argv: &["spectra", "analyze", "{fixtures}/depth2_full.json"],
    },
    Coverage {
        operation: "spectra::int_trivial_point",
        argv: &[
            "spectra",
            "point",
            "{fixtures}/weakjaff.json",
            "--point",
            "/3",
        ],
    },
    Coverage {
        operation: "spectra::localization_report",
        argv: &[
            "spectra",
            "point",
            "{fixtures}/weakjaff.json",
            "--point",
            "W_inf",
        ],
    },
    Coverage {
        operation: "spectra::prufer_split",
        argv: &["spectra", "analyze", "{fixtures}/leaves_finite.json"],
    },
    Coverage {
        operation: "spectra::picpol_decomposition",
        argv: &["spectra", "decompose", "{fixtures}/depth1_flagged.json"],
    },
    Coverage {
        operation: "spectra::build_example_weakjaff",
        argv: &["spectra", "example-weakjaff"],
    },
    Coverage {
        operation: "verify::all_suites",
        argv: &["verify-all", "--seed", "7"],
    },
];

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::NotPrime(_)
            | Error::NotIntegerValued(_)
            | Error::ResidueOutOfRange { .. }
            | Error::PrimeMismatch(..)
            | Error::LevelTooLow { .. }
            | Error::Model(_)
            | Error::ZeroPolynomial
            | Error::FamilyIncomplete
    )
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

struct Done {
    command: &'static str,
    inputs: Value,
    results: Value,
    ok: bool,
}

impl Done {
    fn new(command: &'static str, inputs: Value, results: Value) -> Result<Done> {
        Ok(Done {
            command,
            inputs,
            results,
            ok: true,
        })
    }

    fn checked(mut self, ok: bool) -> Done {
        self.ok = ok;
        self
    }
}

fn poly(s: &str) -> Result<BinPoly> {
    s.parse()
}

fn ring(s: &str) -> Result<OverringZ> {
    s.parse()
}

fn local_ideal(p: u64, s: &str) -> Result<IntIdeal> {
    IntIdeal::parse(s, Ambient::Local(p))
}

fn class(p: u64, level: Option<u32>, values: &str) -> Result<StepClass> {
    let values = parse_values(values)?;
    match level {
        Some(n) => StepClass::new(p, n, values),
        None => StepClass::from_values(p, values),
    }
}

fn class_json(c: &StepClass) -> Value {
    json!({"class": c.to_string(), "p": c.p(), "level": c.level(), "values": c.values(), "zero": c.is_zero()})
}

fn execute(command: Command) -> Result<Done> {
    match command {
        Command::Localize { poly: f, overring } => {
            let (f, t) = (poly(&f)?, ring(&overring)?);
            let v = criterion_holds(&f, &t)?;
            let ok = v.equal;
            Done::new(
                "localize",
                json!({"poly": f.to_string(), "overring": t.to_string()}),
                json!({
                    "lhs": v.lhs.to_string(),
                    "rhs": v.rhs.to_string(),
                    "equal": v.equal,
                    "in_int_z_t": member_int_extension(&f, &t)?,
                    "in_int_t": member_int_of_t(&f, &t)?,
                }),
            )
            .map(|d| d.checked(ok))
        }
        Command::LocalizeOracle {
            seed,
            count,
            degree,
            height,
            overrings,
        } => {
            let names: Vec<String> = if overrings.is_empty() {
                verify::LOCALIZATION_RINGS
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            } else {
                overrings
            };
            let rings = names.iter().map(|s| ring(s)).collect::<Result<Vec<_>>>()?;
            let sample = SampleSpec {
                degree_bound: degree,
                height_bound: height,
                count,
                seed,
            };
            let mut reports = Vec::new();
            let mut ok = true;
            for t in &rings {
                let r = noetherian_oracle(&sample, t)?;
                ok &= r.passed();
                reports.push(json!({
                    "overring": t.to_string(),
                    "total": r.total,
                    "equal": r.equal,
                    "counterexamples": to_value(&r.counterexamples),
                }));
            }
            let rings: Vec<String> = rings.iter().map(ToString::to_string).collect();
            Done::new(
                "localize-oracle",
                json!({"sample": to_value(&sample), "overrings": rings}),
                json!({"passed": ok, "reports": reports}),
            )
            .map(|d| d.checked(ok))
        }
        Command::Transfer {
            poly: f,
            family,
            overring,
        } => {
            let f = poly(&f)?;
            let fam = family.iter().map(|s| ring(s)).collect::<Result<Vec<_>>>()?;
            let t = ring(&overring)?;
            let holds = intersection_transfer_check(&f, &fam, &t)?;
            let fam: Vec<String> = fam.iter().map(ToString::to_string).collect();
            Done::new(
                "transfer",
                json!({"poly": f.to_string(), "family": fam, "overring": t.to_string()}),
                json!({"implication_holds": holds, "in_int_z_t": member_int_extension(&f, &t)?}),
            )
            .map(|d| d.checked(holds))
        }
        Command::Poly { poly: f, overring } => {
            let (f, t) = (poly(&f)?, ring(&overring)?);
            if f.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            let binomial: Vec<String> = f.coeffs().iter().map(format_rational).collect();
            let fixed = if f.is_int_valued() {
                Value::String(f.fixed_divisor()?.to_string())
            } else {
                Value::Null
            };
            Done::new(
                "poly",
                json!({"poly": f.to_string(), "overring": t.to_string()}),
                json!({
                    "binomial_coefficients": binomial,
                    "integer_valued": f.is_int_valued(),
                    "fixed_divisor": fixed,
                    "value_module": f.value_module(&t)?.to_string(),
                    "conductor": f.conductor(&t)?.to_string(),
                    "in_int_z_t": member_int_extension(&f, &t)?,
                    "in_int_t": member_int_of_t(&f, &t)?,
                }),
            )
        }
        Command::Pic(cmd) => execute_pic(cmd),
        Command::Global(cmd) => execute_global(cmd),
        Command::Spectra(cmd) => execute_spectra(cmd),
        Command::VerifyAll { seed } => {
            let suites = verify::all_suites(seed)?;
            let ok = suites.iter().all(|s| s.passed);
            Done::new(
                "verify-all",
                json!({"seed": seed}),
                json!({"passed": ok, "suites": to_value(&suites)}),
            )
            .map(|d| d.checked(ok))
        }
    }
}

fn execute_pic(cmd: PicCommand) -> Result<Done> {
    match cmd {
        PicCommand::ClassOf {
            p,
            ideal,
            max_level,
        } => {
            let i = local_ideal(p, &ideal)?;
            let c = class_of_ideal_with(&i, max_level)?;
            Done::new(
                "pic class-of",
                json!({"p": p, "ideal": i.to_string(), "max_level": max_level}),
                class_json(&c),
            )
        }
        PicCommand::Value { p, ideal, level } => {
            let i = local_ideal(p, &ideal)?;
            let v = value_function(&i, level)?;
            Done::new(
                "pic value",
                json!({"p": p, "ideal": i.to_string(), "level": level}),
                json!({"values": v}),
            )
        }
        PicCommand::Realize { p, level, values } => {
            let c = class(p, level, &values)?;
            let i = realize_class(&c)?;
            Done::new(
                "pic realize",
                json!({"p": p, "class": c.to_string()}),
                json!({
                    "ideal": i.to_string(),
                    "const_gen": i.const_gen().to_string(),
                    "generators": i.poly_gens().len(),
                }),
            )
        }
        PicCommand::Add { p, a, b, negate } => {
            let (a, b) = (class(p, None, &a)?, class(p, None, &b)?);
            let sum = if negate { a.sub(&b)? } else { a.add(&b)? };
            Done::new(
                "pic add",
                json!({"p": p, "a": a.to_string(), "b": b.to_string(), "negate": negate}),
                class_json(&sum),
            )
        }
        PicCommand::Ball { p, residue, level } => {
            let c = StepClass::ball_indicator(p, residue, level)?;
            Done::new(
                "pic ball",
                json!({"p": p, "residue": residue, "level": level}),
                class_json(&c),
            )
        }
        PicCommand::Mul { p, left, right } => {
            let (l, r) = (local_ideal(p, &left)?, local_ideal(p, &right)?);
            let prod = l.mul(&r)?;
            Done::new(
                "pic mul",
                json!({"p": p, "left": l.to_string(), "right": r.to_string()}),
                json!({"ideal": prod.to_string()}),
            )
        }
    }
}

fn execute_global(cmd: GlobalCommand) -> Result<Done> {
    match cmd {
        GlobalCommand::PiTheta { ideal } => {
            let i = IntIdeal::parse(&ideal, Ambient::Global)?;
            let supp: Vec<u64> = support(&i)?.into_iter().collect();
            let v = pi_theta(&i)?;
            Done::new(
                "global pi-theta",
                json!({"ideal": i.to_string()}),
                json!({"support": supp, "vector": v.to_string(), "trivial": v.is_zero()}),
            )
        }
        GlobalCommand::Globalize { vector } => {
            let v: LocalClassVector = vector.parse()?;
            let i = globalize(&v)?;
            let back = pi_theta(&i)?;
            let ok = back == v;
            Done::new(
                "global globalize",
                json!({"vector": v.to_string()}),
                json!({"ideal": i.to_string(), "round_trip": back.to_string(), "round_trip_equal": ok}),
            )
            .map(|d| d.checked(ok))
        }
        GlobalCommand::Principal { ideal } => {
            let i = IntIdeal::parse(&ideal, Ambient::Global)?;
            let v = divisorially_principal(&i)?;
            Done::new(
                "global principal",
                json!({"ideal": i.to_string()}),
                to_value(&v),
            )
        }
        GlobalCommand::Exactness { seed, count } => {
            let r = exactness_report(&ExactnessSpec::new(seed, count))?;
            let ok = r.passed();
            Done::new(
                "global exactness",
                json!({"seed": seed, "count": count}),
                json!({
                    "passed": ok,
                    "surjectivity": to_value(&r.surjectivity),
                    "kernel": to_value(&r.kernel),
                    "nontrivial": to_value(&r.nontrivial),
                    "samples": to_value(&r.samples),
                }),
            )
            .map(|d| d.checked(ok))
        }
    }
}

/// Localization verdicts at the labelled points and at the first point of
/// each Cantor–Bendixson layer.
fn sample_points(m: &AlmDedModel) -> Vec<crate::spectra::Point> {
    let mut pts: Vec<_> = m.spec().labels.values().cloned().collect();
    let mut s = m.space().clone();
    while !s.is_empty() {
        let next = s.derivative();
        if let Some(p) = s.minus(&next).first_point() {
            pts.push(p);
        }
        s = next;
    }
    pts.sort();
    pts.dedup();
    pts
}

fn analyze(m: &AlmDedModel) -> Result<Value> {
    let seq = derived_sequence(m);
    let reports = sample_points(m)
        .iter()
        .map(|p| localization_report(m, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "space": m.space().to_string(),
        "derived_sequence": to_value(&seq),
        "localization": to_value(&reports),
        "prufer_split": to_value(&prufer_split(m)),
        "int_trivial": m.int_trivial().to_string(),
    }))
}

fn execute_spectra(cmd: SpectraCommand) -> Result<Done> {
    match cmd {
        SpectraCommand::Analyze { model } => {
            let m = AlmDedModel::load(&model)?;
            Done::new(
                "spectra analyze",
                json!({"model": model.display().to_string(), "depth": m.depth()}),
                analyze(&m)?,
            )
        }
        SpectraCommand::Decompose { model } => {
            let m = AlmDedModel::load(&model)?;
            Done::new(
                "spectra decompose",
                json!({"model": model.display().to_string(), "depth": m.depth()}),
                to_value(&picpol_decomposition(&m)),
            )
        }
        SpectraCommand::Point { model, point } => {
            let m = AlmDedModel::load(&model)?;
            let p = m.find_point(&point)?;
            let r = localization_report(&m, &p)?;
            Done::new(
                "spectra point",
                json!({"model": model.display().to_string(), "point": point}),
                json!({
                    "report": to_value(&r),
                    "int_trivial": crate::spectra::int_trivial_point(&r.meta),
                    "stage": stage(&m, &p),
                }),
            )
        }
        SpectraCommand::Set { depth, expr } => {
            let e: SetExpr = serde_json::from_str(&expr)
                .map_err(|err| Error::parse(expr.clone(), err.to_string()))?;
            if depth > crate::spectra::model::DEFAULT_DEPTH_CAP {
                return Err(Error::Model(format!("depth {depth} exceeds the cap")));
            }
            let s: PointSet = e.eval(depth)?;
            let points: Option<Vec<String>> = s
                .finite_points()
                .map(|ps| ps.iter().map(ToString::to_string).collect());
            Done::new(
                "spectra set",
                json!({"depth": depth, "expr": to_value(&e)}),
                json!({
                    "set": s.to_string(),
                    "points": points,
                    "closed": s.is_closed(),
                    "closure": s.closure().to_string(),
                    "isolated": s.isolated().to_string(),
                    "derivative": s.derivative().to_string(),
                    "cb_rank": s.cb_rank(),
                }),
            )
        }
        SpectraCommand::ExampleWeakjaff { p } => {
            let m = build_example_weakjaff(p)?;
            let mut results = analyze(&m)?;
            results["decomposition"] = to_value(&picpol_decomposition(&m));
            results["model"] = to_value(m.spec());
            Done::new("spectra example-weakjaff", json!({"p": p}), results)
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).unwrap_or_default();
            s.push('\n');
            s
        }
        Format::Table => {
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter()
                .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                .collect()
        }
    }
}

/// Runs `ivp` on `argv` (program name first).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let start = Instant::now();
    match execute(cli.command) {
        Ok(done) => {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "command": done.command,
                "inputs": done.inputs,
                "results": done.results,
                "timing_ms": start.elapsed().as_millis() as u64,
            });
            Outcome {
                code: if done.ok { 0 } else { 1 },
                stdout: render(&report, cli.format),
                stderr: if done.ok {
                    String::new()
                } else {
                    format!("check failed: {}\n", done.command)
                },
            }
        }
        Err(e) => Outcome {
            code: if is_input_error(&e) { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
