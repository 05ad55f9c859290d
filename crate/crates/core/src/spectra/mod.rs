//! Symbolic models of the maximal spectrum of an almost Dedekind domain.

pub mod analysis;
pub mod model;
pub mod pointset;

pub use analysis::{
    derived_sequence, localization_report, picpol_decomposition, prufer_split, Classification,
    Decomposition, DerivedSequenceResult, Verdict,
};
pub use model::{build_example_weakjaff, full_model, int_trivial_point, AlmDedModel, DvrMeta};
pub use pointset::{Point, PointSet, SetExpr};
