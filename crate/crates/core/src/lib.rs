//! Exact operator calculus for S-Heun operators on the continuum, the discrete
//! linear grid and the q-linear grid.
//!
//! Everything is computed over an exact scalar tower (big-integer rationals,
//! Gaussian rationals, univariate rational functions in one formal parameter),
//! so operator identities are decided by canonical-form equality rather than
//! numerical tolerance. Floating point appears only in the truncated-family
//! spectra.

pub mod error;
pub mod field;
pub mod upoly;
pub mod scalar;
pub mod poly;
pub mod op;
pub mod opparse;
pub mod gauss;
pub mod sheun;
pub mod families;
pub mod structure;
pub mod freealg;
pub mod sklyanin;
pub mod tridiag;
pub mod trunc;
pub mod heun;
pub mod report;
pub mod sample;

pub use error::Error;
pub use scalar::{GRat, Rat, Scalar, Sym};

/// Laurent polynomial over the exact scalar tower.
pub type Poly = poly::LaurentPoly<Scalar>;
/// Grid operator over the exact scalar tower.
pub type Op = op::GridOperator<Scalar>;
/// Grid tag over the exact scalar tower.
pub type Grid = op::GridKind<Scalar>;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
