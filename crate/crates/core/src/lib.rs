//! Short intervals `I(f, E) = f + H^0(C, O(E))` on curves over finite fields.
//!
//! The crate provides exact arithmetic in `F_q`, dense polynomials with complete
//! factorization, two curve models (the projective line and odd-degree
//! hyperelliptic curves in odd characteristic) with explicit Riemann-Roch bases,
//! and the census machinery that tallies factorization types of interval
//! elements against the cycle-type law of the symmetric group.
//!
//! Brute-force reference implementations used to validate the fast paths live in
//! [`oracle`].

pub mod config;
pub mod curve;
mod error;
pub mod expr;
pub mod field;
pub mod interval;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod stats;

pub use curve::{
    CurveModel, DivisorSpec, ElementFactorization, FactorizationType, FunctionElem, Place,
    PlaceClass, PrimeDescriptor, PrimeDivisor,
};
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElem};
pub use interval::{HypothesisReport, IntervalSpec, Mode};
pub use poly::{Factorization, Poly};
pub use stats::{CensusOptions, CountReport, Histogram, Partition};
