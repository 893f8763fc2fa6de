//! Computable Beurling generalized number systems.
//!
//! A g-number system is generated by an unbounded set of real "primes"
//! greater than 1. This crate represents the associated prime, integer and
//! Moebius measures as truncated Stieltjes measures, derives them from one
//! another through the multiplicative convolution exponential, evaluates
//! their Mellin transforms near the abscissa `Re s = 1`, and packages the
//! diagnostics used to probe Mertens-type estimates (`M(x) = o(x)`),
//! Chebyshev bounds and density conditions at finite scale.

pub mod diagnostics;
pub mod error;
pub mod io;
pub mod measure;
pub mod quad;
pub mod studies;
pub mod systems;
pub mod zeta;

pub use error::{Error, Result};
pub use measure::{Atom, LatticeMeasure, LogGrid, Measure, StieltjesMeasure};
pub use systems::GNumberSystem;
