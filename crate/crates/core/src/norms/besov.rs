//! Moduli of continuity and Besov-type norms.

use rayon::prelude::*;
use serde::Serialize;

use super::gls::PsiFunction;
use super::{lp_norm, power_weighted};
use crate::error::{domain, Error, Result};
use crate::funcspace::{Loc, ScalarFunction};
use crate::operators::value_or_estimate;
use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSpec, SMOOTH};

/// Number of shifts sampled in `(0, delta]` by the modulus of continuity.
const SHIFTS: usize = 32;
/// Lower cut of the `t` integral; the remainder is extrapolated from a power law.
const T_MIN: f64 = 1e-8;

/// `y -> f(y) - f(y - h)` on the line, with `f` extended by zero.
fn shift_difference(f: &ScalarFunction, h: f64) -> Result<ScalarFunction> {
    let (lo, hi) = f.support();
    let dom_hi = if hi.is_finite() { hi + h } else { f64::INFINITY };
    let g = f.clone();
    let rule = move |y: Loc| {
        if hi.is_finite() && y.minus(hi) >= 0.0 {
            -g.value_at(y.shifted(-h))
        } else {
            g.increment(y, h)
        }
    };
    let mut d = ScalarFunction::with_local_rule(lo, dom_hi, rule)?.with_support(lo, dom_hi)?;
    for s in f.singularities() {
        d = d.with_singularity(s.at, s.exponent).with_singularity(s.at + h, s.exponent);
    }
    for &j in f.jumps().iter().chain([lo, hi].iter()) {
        if j.is_finite() {
            d = d.with_jump(j).with_jump(j + h);
        }
    }
    if let Some(dec) = f.decay() {
        d = d.with_decay(dec - 1.0);
    }
    Ok(d)
}

/// `|f(. + h) - f|_p` on the line, with `f` extended by zero.
pub fn shift_difference_norm(f: &ScalarFunction, h: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(h >= 0.0) || !h.is_finite() {
        return domain(format!("shift h = {h} must be finite and non-negative"));
    }
    if h == 0.0 || f.is_identically_zero() {
        return Ok(0.0);
    }
    lp_norm(&shift_difference(f, h)?, p, spec)
}

/// `omega(f, delta)_p`: the largest shifted difference over the shifts `delta k / 32`.
pub fn modulus_of_continuity(f: &ScalarFunction, delta: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return domain(format!("modulus step delta = {delta} must be finite and positive"));
    }
    let norms: Vec<Result<f64>> = (1..=SHIFTS)
        .into_par_iter()
        .map(|k| shift_difference_norm(f, delta * k as f64 / SHIFTS as f64, p, spec))
        .collect();
    let mut best: f64 = 0.0;
    for n in norms {
        best = best.max(n?);
    }
    Ok(best)
}

/// The two terms of the Besov-type norm and the extrapolated share of the second.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesovParts {
    /// `|x^-alpha f|_p`.
    pub weighted: f64,
    /// `alpha int_0^b t^(-1-alpha) omega(f, t)_p dt`.
    pub modulus: f64,
    /// Contribution of `(0, 1e-8)` to `modulus`, from the power-law tail.
    pub extrapolated: f64,
    /// Power-law exponent of `omega` at the lower cut.
    pub tail_slope: f64,
}

impl BesovParts {
    pub fn total(&self) -> f64 {
        self.weighted + self.modulus
    }
}

fn check_besov(alpha: f64, p: f64, b: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("smoothness alpha = {alpha} must lie in (0, 1)"));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return domain(format!("Besov exponent p = {p} must be finite and at least 1"));
    }
    if !(b > 0.0) {
        return domain(format!("upper limit b = {b} must be positive"));
    }
    Ok(())
}

/// Both terms of `|x^-alpha f|_p + alpha int_0^b t^(-1-alpha) omega(f, t)_p dt`.
pub fn besov_norm_parts(f: &ScalarFunction, alpha: f64, p: f64, b: f64, spec: &QuadratureSpec) -> Result<BesovParts> {
    check_besov(alpha, p, b)?;
    if f.is_identically_zero() {
        return Ok(BesovParts { weighted: 0.0, modulus: 0.0, extrapolated: 0.0, tail_slope: f64::NAN });
    }
    let weighted = lp_norm(&power_weighted(f, -alpha), p, spec)?;
    let omega = |t: f64| modulus_of_continuity(f, t, p, spec);

    let w_min = omega(T_MIN)?;
    let slope = (omega(2.0 * T_MIN)? / w_min).log2();
    let extrapolated = if w_min == 0.0 {
        0.0
    } else if slope > alpha {
        w_min * T_MIN.powf(-alpha) / (slope - alpha)
    } else {
        f64::INFINITY
    };
    if !weighted.is_finite() || !extrapolated.is_finite() {
        return Ok(BesovParts { weighted, modulus: f64::INFINITY, extrapolated, tail_slope: slope });
    }

    let failure = std::sync::Mutex::new(None::<Error>);
    let record = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.lock().expect("poisoned").get_or_insert(e);
            0.0
        }
    };
    // Log coordinates below 1, where omega varies like a power of t.
    let upper = b.min(1.0);
    let mut body = value_or_estimate(integrate(
        |ab| {
            let tau = T_MIN.ln() + ab.from_a;
            let t = tau.exp();
            record(omega(t)) * t.powf(-alpha)
        },
        0.0,
        upper.ln() - T_MIN.ln(),
        (SMOOTH, SMOOTH),
        spec,
    ))?;
    if b > 1.0 {
        let r = if b.is_finite() {
            integrate(|ab| record(omega(ab.x)) * ab.x.powf(-1.0 - alpha), 1.0, b, (SMOOTH, SMOOTH), spec)
        } else {
            integrate_to_infinity(|ab| record(omega(ab.x)) * ab.x.powf(-1.0 - alpha), 1.0, -1.0 - alpha, spec)
        };
        body += value_or_estimate(r)?;
    }
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(BesovParts { weighted, modulus: alpha * (body + extrapolated), extrapolated: alpha * extrapolated, tail_slope: slope })
}

/// `|x^-alpha f|_p + alpha int_0^b t^(-1-alpha) omega(f, t)_p dt`; infinite when either term diverges.
pub fn besov_norm(f: &ScalarFunction, alpha: f64, p: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(besov_norm_parts(f, alpha, p, b, spec)?.total())
}

/// `p -> |f|_{B(alpha, p)}` on `(1, beta)`, with the `t` integral taken up to the end of `f`'s domain.
pub fn besov_natural_psi(f: &ScalarFunction, alpha: f64, beta: f64, spec: &QuadratureSpec) -> Result<PsiFunction> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("smoothness alpha = {alpha} must lie in (0, 1)"));
    }
    if !(beta > 1.0 && beta <= 1.0 / alpha) {
        return domain(format!("beta = {beta} must lie in (1, 1/alpha]"));
    }
    if f.is_identically_zero() {
        return domain("the zero function has no natural psi");
    }
    let g = f.clone();
    let b = f.domain().1;
    let sp = *spec;
    PsiFunction::from_fn(1.0, beta, move |p| besov_norm(&g, alpha, p, b, &sp))
}
