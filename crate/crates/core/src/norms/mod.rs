//! Lebesgue, mixed, Besov and grand Lebesgue norms.
//!
//! Divergent norms are returned as `f64::INFINITY` rather than as errors, so that
//! sweeps can record them; errors are reserved for invalid input.

mod besov;
mod gls;

pub use besov::{besov_natural_psi, besov_norm, besov_norm_parts, modulus_of_continuity, shift_difference_norm, BesovParts};
pub use gls::{fundamental_function, gls_norm, gls_sup, natural_psi, PsiFunction};

use crate::error::{domain, Error, Result};
use crate::funcspace::{Loc, ScalarFunction, TensorFunction};
use crate::operators::value_or_estimate;
use crate::quadrature::{integrate_length, integrate_to_infinity_with, QuadratureSpec, SMOOTH};

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return domain(format!("norm exponent p = {p} must be finite and at least 1"));
    }
    Ok(())
}

/// `int |f|^p`, or infinity when the declared annotations make it diverge.
pub fn lp_integral(f: &ScalarFunction, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_p(p)?;
    if f.is_identically_zero() {
        return Ok(0.0);
    }
    for s in f.singularities() {
        if s.exponent * p <= -1.0 && s.at >= f.support().0 && s.at <= f.support().1 {
            return Ok(f64::INFINITY);
        }
    }
    let (lo, hi) = f.support();
    let decay = if hi.is_finite() {
        None
    } else {
        match f.decay() {
            None => return domain("lp norm: unbounded support needs a decay hint"),
            Some(d) if d * p >= -1.0 => return Ok(f64::INFINITY),
            Some(d) => Some(d),
        }
    };
    let exp_at = |c: f64| {
        let e = f.exponent_at(c);
        if e.is_finite() {
            e * p
        } else {
            SMOOTH
        }
    };
    let mut marks = vec![lo];
    marks.extend(f.breakpoints_in(lo, hi));
    if hi.is_finite() {
        marks.push(hi);
    }
    let integrand = |x: Loc| {
        let v = f.value_at(x);
        if v == 0.0 {
            0.0
        } else {
            v.abs().powf(p)
        }
    };
    let mut total = 0.0;
    for w in marks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let r = integrate_length(
            |ab| {
                let x = if ab.from_a <= ab.to_b { Loc::new(a, ab.from_a) } else { Loc::new(b, -ab.to_b) };
                integrand(x)
            },
            a,
            b - a,
            (exp_at(a), exp_at(b)),
            spec,
        );
        match r {
            Err(Error::Divergent(_)) => return Ok(f64::INFINITY),
            r => total += value_or_estimate(r)?,
        }
    }
    if let Some(d) = decay {
        let last = *marks.last().expect("non-empty");
        let r = integrate_to_infinity_with(|ab| integrand(Loc::new(last, ab.from_a)), last, exp_at(last), d * p, spec);
        match r {
            Err(Error::Divergent(_)) => return Ok(f64::INFINITY),
            r => total += value_or_estimate(r)?,
        }
    }
    Ok(total)
}

/// `|f|_p = (int |f|^p)^(1/p)`; infinite when the integral diverges.
pub fn lp_norm(f: &ScalarFunction, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(lp_integral(f, p, spec)?.powf(1.0 / p))
}

/// Mixed norm `{ int [ int |F(x, y)|^p1 dx ]^(p2/p1) dy }^(1/p2)`, via the product of
/// the one-dimensional norms.
pub fn mixed_norm(f: &TensorFunction, p1: f64, p2: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_p(p1)?;
    check_p(p2)?;
    let a = lp_norm(&f.g1, p1, spec)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(a * lp_norm(&f.g2, p2, spec)?)
}

/// The mixed norm by iterated quadrature of the two-variable function.
pub fn mixed_norm_iterated(f: &TensorFunction, p1: f64, p2: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_p(p1)?;
    check_p(p2)?;
    let tensor = f.clone();
    let sp = *spec;
    let inner = f.g2.with_same_annotations(move |y: Loc| {
        let t = tensor.clone();
        let slice = tensor.g1.with_same_annotations(move |x: Loc| t.value_at(x, y));
        lp_norm(&slice, p1, &sp).unwrap_or(f64::NAN)
    });
    lp_norm(&inner, p2, spec)
}

/// `x^e f(x)` with annotations adjusted at the origin and at infinity.
pub fn power_weighted(f: &ScalarFunction, e: f64) -> ScalarFunction {
    let g = f.clone();
    let mut out = f.with_same_annotations(move |x: Loc| {
        let v = g.value_at(x);
        if v == 0.0 {
            0.0
        } else {
            v * x.value().powf(e)
        }
    });
    if f.support().0 == 0.0 {
        let e0 = f.exponent_at(0.0);
        out = out.with_singularity(0.0, if e0.is_finite() { e0 + e } else { e });
    }
    if let Some(d) = f.decay() {
        out = out.with_decay(d + e);
    }
    out
}
