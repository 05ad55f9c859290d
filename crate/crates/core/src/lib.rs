//! Exact computations with rings of integer-valued polynomials over `Z`.
//!
//! * [`exactnum`]: rationals, p-adic valuations, principal fractional ideals
//!   of the overrings `Z_S`.
//! * [`intpoly`]: polynomials in the binomial basis, `Int(Z)` membership,
//!   value modules and conductors.
//! * [`localize`]: the conductor criterion for `Int(Z)T = Int(T)`.
//! * [`picdvr`]: classes of `Pic(Int(Z_(p)))` as step functions on `Z_p`
//!   modulo constants, and the bridge between ideals and classes.
//! * [`globalpic`]: the extension map to `⊕_p Pic(Int(Z_(p)))`, its kernel,
//!   and an explicit section.
//! * [`spectra`]: symbolic scattered spaces modelling the maximal spectrum of
//!   an almost Dedekind domain, derived sequences and decompositions.
//! * [`cli`]: the `ivp` command line front end.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod globalpic;
pub mod intpoly;
pub mod localize;
pub mod picdvr;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{FracIdeal, OverringZ, Rational};
pub use intpoly::BinPoly;
pub use localize::SampleSpec;
pub use picdvr::{IntIdeal, StepClass};

/// Serialize through `Display`.
pub(crate) mod serde_display {
    use std::fmt::Display;

    use serde::Serializer;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }
}
