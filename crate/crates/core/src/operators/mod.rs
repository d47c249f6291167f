//! Fractional integrals, derivatives and potentials evaluated pointwise.
//!
//! Every operator integrates over pieces delimited by the input's breakpoints and
//! the evaluation point. Piece ends carry the local power exponent of the
//! integrand so the quadrature can grade toward them.

mod derivative;
mod integral;
mod mixed;

pub use derivative::{
    derivative_function, indicator_derivative, indicator_derivative_function, marchaud_derivative,
    marchaud_derivative_at, marchaud_function, rl_derivative_fd, step_derivative_at, step_derivative_function,
    DerivativeFlag, DerivativeValue,
};
pub use integral::{
    riesz_function, riesz_potential_1d, riesz_potential_at, rl_integral, rl_integral_at, rl_integral_function,
    weighted_potential, weighted_potential_at, weighted_potential_function,
};
pub use mixed::{
    mixed_derivative_factorable, mixed_integral_factorable, mixed_integral_iterated,
};

use crate::error::{domain, Error, Result};
use crate::funcspace::Loc;
use crate::quadrature::{integrate_length, Abscissa, Estimate, QuadratureSpec};

/// Orders and geometry shared by the operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractionalParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub d: u32,
    pub b: f64,
}

impl FractionalParams {
    /// A single order `alpha` on the half-line in dimension one.
    pub fn new(alpha: f64) -> Result<Self> {
        check_order("alpha", alpha)?;
        Ok(FractionalParams { alpha, beta: 0.0, gamma: 0.0, d: 1, b: f64::INFINITY })
    }

    /// Parameters of the weighted potential: `alpha, beta, gamma` in `(0, 1)` with
    /// `alpha + beta + gamma < 2` and `beta^2 + gamma^2 > 0`.
    pub fn weighted(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_order("alpha", alpha)?;
        check_order("beta", beta)?;
        check_order("gamma", gamma)?;
        if !(alpha + beta + gamma < 2.0) {
            return domain(format!("need alpha + beta + gamma < 2, got {}", alpha + beta + gamma));
        }
        if !(beta * beta + gamma * gamma > 0.0) {
            return domain("need beta^2 + gamma^2 > 0");
        }
        Ok(FractionalParams { alpha, beta, gamma, d: 1, b: f64::INFINITY })
    }

    pub fn with_dimension(mut self, d: u32) -> Result<Self> {
        if d == 0 {
            return domain("dimension d must be at least 1");
        }
        self.d = d;
        Ok(self)
    }

    pub fn with_bound(mut self, b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return domain(format!("domain bound b = {b} must be positive"));
        }
        self.b = b;
        Ok(self)
    }
}

pub(crate) fn check_order(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return domain(format!("order {name} = {v} must lie in (0, 1)"));
    }
    Ok(())
}

/// A sub-interval between two anchored points with the integrand's exponents at its ends.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Piece {
    pub start: Loc,
    pub end: Loc,
    pub e_start: f64,
    pub e_end: f64,
}

impl Piece {
    pub fn len(&self) -> f64 {
        self.end.minus_loc(&self.start)
    }

    /// The node, anchored at the nearer end of the piece.
    pub fn point(&self, ab: &Abscissa) -> Loc {
        if ab.from_a <= ab.to_b {
            self.start.shifted(ab.from_a)
        } else {
            self.end.shifted(-ab.to_b)
        }
    }

    /// Signed distance `x - node`, exact when `x` is one of the piece ends.
    pub fn distance_from(&self, x: &Loc, ab: &Abscissa) -> f64 {
        if ab.from_a <= ab.to_b {
            x.minus_loc(&self.start) - ab.from_a
        } else {
            x.minus_loc(&self.end) + ab.to_b
        }
    }

    pub fn integrate<F: Fn(Loc, &Abscissa) -> f64>(&self, f: F, spec: &QuadratureSpec) -> Result<Estimate> {
        let len = self.len();
        if !(len > 0.0) {
            return Ok(Estimate { value: 0.0, error: 0.0, subdivisions: 0 });
        }
        integrate_length(
            |ab| f(self.point(&ab), &ab),
            self.start.value(),
            len,
            (self.e_start, self.e_end),
            spec,
        )
    }
}

/// Accepts a best estimate when adaptive refinement runs out of budget.
pub(crate) fn value_or_estimate(r: Result<Estimate>) -> Result<f64> {
    match r {
        Ok(e) => Ok(e.value),
        Err(Error::NoConvergence { estimate, .. }) => Ok(estimate),
        Err(e) => Err(e),
    }
}

/// Pointwise evaluator for use inside a function rule: non-fatal failures map to NaN,
/// which the enclosing quadrature reports as a non-finite integrand.
pub(crate) fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}
