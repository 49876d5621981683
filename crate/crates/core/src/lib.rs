//! Numerical machinery around the Minkowski question mark function `?(x)`:
//! exact tree/continued-fraction arithmetic, Stieltjes integration against
//! `dF`, dyadic transfer operators and their spectra, moment tables with
//! extended-precision solves, the period function `G(z)`, Fourier
//! coefficients of the periodic remainder `Ψ(x)`, and the associated dyadic
//! zeta function.
//!
//! The crate is organized so that every quantity has at least two
//! independent evaluation routes (exact combinatorics vs. analysis, series
//! vs. quadrature, operator solve vs. direct integral); `verify` wires those
//! cross-checks into a reproducible report.

pub mod contfrac;
pub mod error;
pub mod minkowski;
pub mod moments;
pub mod periodfn;
pub mod precision;
pub mod quadrature;
pub mod special;
pub mod transfer;
pub mod verify;
pub mod zeta;

pub use contfrac::{ContinuedFraction, Rational, TreeGeneration};
pub use error::Error;
pub use minkowski::DyadicRational;
pub use moments::MomentTable;
pub use precision::{PrecisionConfig, PrecisionMode};
pub use transfer::{EigenPair, EigenPolynomial, TransferMatrix};
pub use verify::{VerifyCheck, VerifyReport};
