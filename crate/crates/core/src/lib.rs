//! Numerical toolkit for Riemann-Liouville and Marchaud fractional operators on the
//! half-line, their Lebesgue, Besov and grand Lebesgue space norms, and a laboratory
//! that checks two-sided norm inequalities against computed values.
//!
//! Functions live on `(0, b)` with `b` possibly infinite and are extended by zero.
//! Every integral is computed by adaptive Gauss-Kronrod quadrature with endpoint
//! grading, so singular kernels and jump discontinuities are handled without
//! tuning at the call site.

// `!(x > 0.0)` guards reject NaN on purpose; tabulated nodes keep their full digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod constants;
pub mod error;
pub mod funcspace;
pub mod lab;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod spec;
pub mod special;

pub use error::{Error, Result};
pub use funcspace::{Loc, ScalarFunction};
pub use quadrature::QuadratureSpec;
