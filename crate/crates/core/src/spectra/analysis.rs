//! Derived sequences, localization verdicts and decompositions of `picpol`
//! on almost Dedekind models.
//!
//! Every report rests on one modelling assumption, repeated in each report
//! as `axiom`: a point is a Jaffard overring of `T_α` exactly when it is
//! isolated in `njaff^α`. Then `njaff^(α+1)` is the Cantor–Bendixson
//! derivative of `njaff^α`.

use serde::Serialize;

use crate::error::Result;
use crate::spectra::model::{AlmDedModel, DvrMeta};
use crate::spectra::pointset::{Point, PointSet};

pub const AXIOM: &str =
    "a point is a Jaffard overring of T_alpha iff it is isolated in njaff^alpha";

/// Summand attached to a point with finite residue field.
pub const FREE_SUMMAND: &str = "C(completion, Z)/constants";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedStep {
    pub alpha: usize,
    pub njaff: PointSet,
    /// Labels of the points when the set is finite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    pub t_alpha: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    Jaffard,
    WeakJaffard { pointed_at: String, point: Point },
    PreJaffard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSequenceResult {
    pub axiom: &'static str,
    pub steps: Vec<DerivedStep>,
    pub classification: Classification,
    pub sharp: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

fn labels(m: &AlmDedModel, s: &PointSet) -> Option<Vec<String>> {
    s.finite_points()
        .map(|ps| ps.iter().map(|p| m.label(p)).collect())
}

/// `njaff^0 = Max(D)`, `njaff^(α+1) = (njaff^α)'`, until empty or stable.
pub fn derived_sequence(m: &AlmDedModel) -> DerivedSequenceResult {
    let mut steps = Vec::new();
    let mut current = m.space().clone();
    // finite depth k gives rank at most k + 1
    for alpha in 0..=(m.depth() as usize + 1) {
        let t_alpha = if current.is_empty() {
            "K".to_string()
        } else if alpha == 0 {
            "D".to_string()
        } else {
            format!("intersection of D_M over M in njaff^{alpha}")
        };
        steps.push(DerivedStep {
            alpha,
            points: labels(m, &current),
            njaff: current.clone(),
            t_alpha,
        });
        if current.is_empty() {
            break;
        }
        let next = current.derivative();
        if next == current {
            break;
        }
        current = next;
    }
    let first = steps
        .get(1)
        .map(|s| s.njaff.clone())
        .unwrap_or_else(|| PointSet::empty(m.depth()));
    let classification = match first.finite_points().as_deref() {
        Some([]) => Classification::Jaffard,
        Some([p]) => Classification::WeakJaffard {
            pointed_at: m.label(p),
            point: p.clone(),
        },
        _ => Classification::PreJaffard,
    };
    let rank = steps.iter().find(|s| s.njaff.is_empty()).map(|s| s.alpha);
    DerivedSequenceResult {
        axiom: AXIOM,
        steps,
        classification,
        sharp: rank.is_some(),
        rank,
    }
}

/// The `α` with `p ∈ njaff^α ∖ njaff^(α+1)`.
pub fn stage(m: &AlmDedModel, p: &Point) -> Option<usize> {
    let mut s = m.space().clone();
    let mut alpha = 0;
    while s.contains(p) {
        let next = s.derivative();
        if !next.contains(p) {
            return Some(alpha);
        }
        s = next;
        alpha += 1;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub point: String,
    pub position: Point,
    pub stage: usize,
    pub meta: DvrMeta,
    /// `Int(D) D_M = Int(D_M)`
    pub localization: Verdict,
    pub reason: String,
}

/// Limit points with finite residue field at which localization provably
/// fails: when the Int-trivial points are dense, their intersection is
/// already `D`, so `Int(D) = D[X]`, while `Int(D_M) != D_M[X]`.
pub fn derived_failures(m: &AlmDedModel) -> PointSet {
    let trivial = m.int_trivial();
    if trivial.closure() == *m.space() {
        m.space().derivative().intersection(&m.finite_residue())
    } else {
        PointSet::empty(m.depth())
    }
}

pub fn localization_report(m: &AlmDedModel, p: &Point) -> Result<LocalizationReport> {
    let meta = m.meta(p)?;
    let stage = stage(m, p).unwrap_or(0);
    let (localization, reason) = if m.space().isolated().contains(p) {
        (
            Verdict::Yes,
            "isolated, hence a Jaffard overring".to_string(),
        )
    } else if derived_failures(m).contains(p) {
        (
            Verdict::No,
            "limit point with finite residue field; the Int-trivial points form a complete subfamily"
                .to_string(),
        )
    } else {
        match meta.localization_ok {
            Some(true) => (Verdict::Yes, "model flag".to_string()),
            Some(false) => (Verdict::No, "model flag".to_string()),
            None => (Verdict::Unknown, "no rule applies".to_string()),
        }
    };
    Ok(LocalizationReport {
        point: m.label(p),
        position: p.clone(),
        stage,
        meta,
        localization,
        reason,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruferSplit {
    /// Points with `Int(D_M) != D_M[X]`.
    pub x: PointSet,
    pub x_closure: PointSet,
    /// Points outside the closure, each contributing `Pic = 0`.
    pub vanishing: PointSet,
    pub isomorphism: String,
}

pub fn prufer_split(m: &AlmDedModel) -> PruferSplit {
    let x = m.finite_residue();
    let x_closure = x.closure();
    let vanishing = m.space().minus(&x_closure);
    PruferSplit {
        isomorphism: format!(
            "picpol(D) = picpol(D, T) with T = intersection of D_M over M in {x_closure}"
        ),
        x,
        x_closure,
        vanishing,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub points: PointSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listed: Option<Vec<String>>,
    pub summand: &'static str,
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Decomposition {
    Decomposed {
        axiom: &'static str,
        rank: usize,
        summands: Vec<Summand>,
    },
    Refused {
        axiom: &'static str,
        message: String,
        point: String,
        position: Point,
        stage: usize,
    },
}

impl Decomposition {
    pub fn is_decomposed(&self) -> bool {
        matches!(self, Decomposition::Decomposed { .. })
    }
}

/// `picpol(D) = ⊕_M picpol(D_M)`, emitted only when the model is sharp and
/// localization holds at every point.
pub fn picpol_decomposition(m: &AlmDedModel) -> Decomposition {
    let space = m.space();
    let failing = derived_failures(m).union(&m.flagged(false).minus(&space.isolated()));
    let holding = space.isolated().union(&m.flagged(true).minus(&failing));
    let unknown = space.minus(&failing).minus(&holding);
    let refuse = |p: Point, what: &str| {
        let stage = stage(m, &p).unwrap_or(0);
        let label = m.label(&p);
        Decomposition::Refused {
            axiom: AXIOM,
            message: format!("hypothesis violated at {p}: {what} at {label} (stage {stage})"),
            point: label,
            position: p,
            stage,
        }
    };
    if let Some(p) = failing.first_point() {
        return refuse(p, "localization fails");
    }
    if let Some(p) = unknown.first_point() {
        return refuse(p, "localization unverified");
    }
    let seq = derived_sequence(m);
    let Some(rank) = seq.rank else {
        let p = seq
            .steps
            .last()
            .and_then(|s| s.njaff.first_point())
            .unwrap_or_default();
        return refuse(p, "derived sequence does not reach the quotient field");
    };
    let summands = [
        (m.finite_residue(), FREE_SUMMAND, true),
        (m.int_trivial(), "0", false),
    ]
    .into_iter()
    .filter(|(s, _, _)| !s.is_empty())
    .map(|(points, summand, free)| Summand {
        listed: labels(m, &points),
        points,
        summand,
        free,
    })
    .collect();
    Decomposition::Decomposed {
        axiom: AXIOM,
        rank,
        summands,
    }
}
