//! Discrete fractional calculus and the operator calculus built on it:
//! Cesaro kernels, Weyl fractional sums and differences on finitely
//! supported sequences, weighted convolution algebra norms, Cesaro orbits
//! of a matrix with their characterizing functional equation, the induced
//! algebra homomorphism, pseudo-resolvents and Abel means.
//!
//! Everything is generic over a scalar backend: exact rational arithmetic,
//! where the algebraic identities hold with defect exactly zero, or `f64`,
//! where each truncated comparison carries an explicit tail bound.

pub mod error;
pub mod gamma;
pub mod instances;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod opcalc;
pub mod scalar;
pub mod seq;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use kernels::{cesaro_kernel, KernelTable};
pub use matrix::{DenseOperator, NormKind};
pub use opcalc::CesaroOrbit;
pub use scalar::{Rational, RealScalar, Scalar, ScalarMode};
pub use seq::{FiniteSeq, WindowedSeq};
pub use weights::Weight;
