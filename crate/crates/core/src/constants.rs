//! Exponent relations and analytic envelopes for the fractional operator norms.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::norms::PsiFunction;
use crate::special::ball_volume;

fn check_alpha_d(alpha: f64, d: u32) -> Result<()> {
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    if !(alpha > 0.0 && alpha < d as f64) {
        return domain(format!("alpha = {alpha} must lie in (0, d) with d = {d}"));
    }
    Ok(())
}

/// `q` with `1/q = 1/p - alpha/d`, for `1 < p < d/alpha`.
pub fn sobolev_q(p: f64, alpha: f64, d: u32) -> Result<f64> {
    check_alpha_d(alpha, d)?;
    let p_plus = d as f64 / alpha;
    if !(p > 1.0 && p < p_plus) {
        return domain(format!("p = {p} must lie in (1, {p_plus})"));
    }
    Ok(1.0 / (1.0 / p - alpha / d as f64))
}

/// Inverse of [`sobolev_q`]: `p` with `1/p = 1/q + alpha/d`, for `q > d/(d - alpha)`.
pub fn p_of_q(q: f64, alpha: f64, d: u32) -> Result<f64> {
    check_alpha_d(alpha, d)?;
    let q_min = d as f64 / (d as f64 - alpha);
    if !(q > q_min) {
        return domain(format!("q = {q} must exceed {q_min}"));
    }
    Ok(1.0 / (1.0 / q + alpha / d as f64))
}

/// A Sobolev-conjugate pair `(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SobolevPair {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub d: u32,
}

impl SobolevPair {
    pub fn new(p: f64, alpha: f64, d: u32) -> Result<Self> {
        Ok(SobolevPair { p, q: sobolev_q(p, alpha, d)?, alpha, d })
    }
}

/// Which bound on the maximal-function constant `S(d)` to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SteinMode {
    /// `S(d) = 2 * 5^d`.
    Classical,
    /// A dimension-free constant.
    Flat(f64),
}

impl SteinMode {
    /// The flat mode with its default constant 2.
    pub fn flat() -> Self {
        SteinMode::Flat(2.0)
    }
}

pub fn stein_constant(d: u32, mode: SteinMode) -> Result<f64> {
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    match mode {
        SteinMode::Classical => Ok(2.0 * 5f64.powi(d as i32)),
        SteinMode::Flat(c) if c > 0.0 && c.is_finite() => Ok(c),
        SteinMode::Flat(c) => domain(format!("flat Stein constant {c} must be finite and positive")),
    }
}

/// `V2 = Omega(d)^(-1 - a/d) p^(1 - 2ap/d) d^(1 + (1 - ap)/d) S^(1 - ap)` on `1 <= p <= 1/a`.
pub fn v2(alpha: f64, d: u32, p: f64, s: f64) -> Result<f64> {
    check_alpha_d(alpha, d)?;
    if !(p >= 1.0 && p <= 1.0 / alpha) {
        return domain(format!("p = {p} must lie in [1, {}]", 1.0 / alpha));
    }
    if !(s > 0.0) || !s.is_finite() {
        return domain(format!("Stein constant S = {s} must be finite and positive"));
    }
    let df = d as f64;
    let ap = alpha * p;
    let ln = -(1.0 + alpha / df) * ball_volume(d)?.ln()
        + (1.0 - 2.0 * ap / df) * p.ln()
        + (1.0 + (1.0 - ap) / df) * df.ln()
        + (1.0 - ap) * s.ln();
    Ok(ln.exp())
}

/// Right end of the range where the upper envelope is finite: `min(d/alpha, 1/alpha)`.
pub fn k_upper_end(alpha: f64, d: u32) -> f64 {
    (d as f64 / alpha).min(1.0 / alpha)
}

/// Upper envelope `V2 / (alpha [(p - 1)(1 - alpha p)]^(1 - alpha/d))` for `1 < p < min(d/alpha, 1/alpha)`;
/// infinite at both ends.
pub fn k_upper(alpha: f64, d: u32, p: f64, s: f64) -> Result<f64> {
    check_alpha_d(alpha, d)?;
    let end = k_upper_end(alpha, d);
    if !(p >= 1.0 && p <= end) {
        return domain(format!("p = {p} must lie in [1, {end}]"));
    }
    let denom = (p - 1.0) * (1.0 - alpha * p);
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(v2(alpha, d, p, s)? / alpha * denom.powf(-(1.0 - alpha / d as f64)))
}

/// Lower-envelope shape `[(p - 1)(1 - alpha p)]^-(1 - alpha)` for `1 < p < 1/alpha`; infinite at both ends.
pub fn k_lower_shape(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha = {alpha} must lie in (0, 1)"));
    }
    if !(p >= 1.0 && p <= 1.0 / alpha) {
        return domain(format!("p = {p} must lie in [1, {}]", 1.0 / alpha));
    }
    let denom = (p - 1.0) * (1.0 - alpha * p);
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(denom.powf(-(1.0 - alpha)))
}

/// Exponents of the weighted potential's two-sided estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightedBracket {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `2 - alpha - beta - gamma`.
    pub kappa: f64,
    /// `1 / (1 - beta)`.
    pub p_minus: f64,
    /// `1 / (2 - alpha - beta)`.
    pub p_plus: f64,
    /// `1 / (alpha + gamma - 1)`, infinite when `alpha + gamma <= 1`.
    pub q_minus: f64,
    /// `1 / gamma`.
    pub q_plus: f64,
}

impl WeightedBracket {
    /// True when `(p_minus, p_plus]` is empty.
    pub fn is_empty(&self) -> bool {
        !(self.p_minus < self.p_plus)
    }

    pub fn contains(&self, p: f64) -> bool {
        p > self.p_minus && p <= self.p_plus
    }

    /// `q` with `1/q = 1/p - kappa`.
    pub fn q_of_p(&self, p: f64) -> Result<f64> {
        let inv = 1.0 / p - self.kappa;
        if !(inv > 0.0) {
            return domain(format!("1/p - kappa = {inv} must be positive"));
        }
        Ok(1.0 / inv)
    }

    /// The envelope shape `(p - p_minus)^-kappa`.
    pub fn envelope(&self, p: f64) -> Result<f64> {
        if !(p > self.p_minus) {
            return domain(format!("p = {p} must exceed p_minus = {}", self.p_minus));
        }
        Ok((p - self.p_minus).powf(-self.kappa))
    }
}

pub fn weighted_bracket(alpha: f64, beta: f64, gamma: f64) -> Result<WeightedBracket> {
    crate::operators::FractionalParams::weighted(alpha, beta, gamma)?;
    let kappa = 2.0 - alpha - beta - gamma;
    Ok(WeightedBracket {
        alpha,
        beta,
        gamma,
        kappa,
        p_minus: 1.0 / (1.0 - beta),
        p_plus: 1.0 / (2.0 - alpha - beta),
        q_minus: if alpha + gamma > 1.0 { 1.0 / (alpha + gamma - 1.0) } else { f64::INFINITY },
        q_plus: 1.0 / gamma,
    })
}

/// `q -> K(p(q)) psi(p(q))` on the image of `psi`'s support under `p -> q`, with
/// [`k_upper`] standing in for the unknown sharp constant.
pub fn transported_psi(psi: &PsiFunction, alpha: f64, d: u32, s: f64) -> Result<PsiFunction> {
    check_alpha_d(alpha, d)?;
    let (s1, s2) = psi.support();
    let end = k_upper_end(alpha, d);
    if !(s1 >= 1.0 && s2 <= end) {
        return domain(format!("psi support ({s1}, {s2}) must lie inside (1, {end})"));
    }
    let q1 = d as f64 / (d as f64 - alpha);
    let q1 = if s1 > 1.0 { sobolev_q(s1, alpha, d)? } else { q1 };
    let q2 = if s2 < d as f64 / alpha { sobolev_q(s2, alpha, d)? } else { f64::INFINITY };
    let base = psi.clone();
    PsiFunction::from_fn(q1, q2, move |q| {
        let p = p_of_q(q, alpha, d)?;
        Ok(k_upper(alpha, d, p, s)? * base.eval(p)?)
    })
}
