//! Extremal witnesses evaluated in logarithmic coordinates.
//!
//! Near the ends of the `p` range the mass of `f0` and `h_delta` sits at scales far
//! outside double precision (`x^(-1 + eps)` with tiny `eps`). Substituting `x = e^u`
//! turns every norm into `int exp(phi(u)) du` with a unimodal `phi`, which
//! [`integrate_log_unimodal`] handles at any scale.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_log_unimodal, integrate_to_infinity_with, QuadratureSpec, SMOOTH};

use super::Potential;

/// Beyond this point `1 - e^-w` is 1 to double precision.
const FLAT: f64 = 40.0;

fn nonfinite(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// `J(u) = int_0^u (1 - e^-w)^(alpha - 1) dw`.
fn j_integral(alpha: f64, u: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(u > 0.0) {
        return Ok(0.0);
    }
    let e = alpha - 1.0;
    let head = integrate(|t| (-(-t.x).exp_m1()).powf(e), 0.0, u.min(FLAT), (e, SMOOTH), spec)?.value;
    Ok(head + (u - FLAT).max(0.0))
}

/// `int_0^inf (e^w - 1)^(alpha - 1) dw = pi / sin(pi alpha)`.
fn reflection(alpha: f64) -> f64 {
    PI / (PI * alpha).sin()
}

/// `ln |f0|_p = -ln(p - 1) / p`.
pub(crate) fn f0_log_norm(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Divergent(format!("|f0|_p diverges at p = {p}")));
    }
    Ok(-(p - 1.0).ln() / p)
}

/// `ln |T f0|_q` for the unnormalised kernel `|x - y|^(alpha - 1)` (one- or two-sided).
pub(crate) fn f0_log_potential_norm(alpha: f64, q: f64, potential: Potential, spec: &QuadratureSpec) -> Result<f64> {
    let e = alpha - 1.0;
    let log_int = match potential {
        Potential::RiemannLiouville => {
            // T f0(e^u) = e^((alpha - 1) u) J(u) for u > 0, zero below.
            let lambda = (1.0 - alpha) * q - 1.0;
            if !(lambda > 0.0) {
                return Err(Error::Divergent(format!("|I^alpha f0|_q diverges at q = {q}")));
            }
            let phi = |u: f64| -lambda * u + q * nonfinite(j_integral(alpha, u, spec)).ln();
            integrate_log_unimodal(phi, 0.0, f64::INFINITY, q / lambda, (q * alpha, SMOOTH), spec)?
        }
        Potential::Riesz => {
            let b = reflection(alpha);
            let log_r = |u: f64| -> f64 {
                if u >= 0.0 {
                    return e * u + nonfinite(j_integral(alpha, u, spec).map(|j| j + b)).ln();
                }
                // Only the part y > 1 contributes: int_0^inf e^((alpha - 1) s) (1 - e^-(s + |u|))^(alpha - 1) ds.
                let a = -u;
                let start = if a < 0.5 { e } else { SMOOTH };
                let v = integrate_to_infinity_with(
                    |t| (e * t.x).exp() * (-(-(t.from_a + a)).exp_m1()).powf(e),
                    0.0,
                    start,
                    -4.0,
                    spec,
                );
                nonfinite(v.map(|v| v.value)).ln()
            };
            let lambda = (1.0 - alpha) * q - 1.0;
            if !(lambda > 0.0) {
                return Err(Error::Divergent(format!("|R_alpha f0|_q diverges at q = {q}")));
            }
            integrate_log_unimodal(|u| q * log_r(u) + u, f64::NEG_INFINITY, f64::INFINITY, q / lambda, (SMOOTH, SMOOTH), spec)?
        }
    };
    Ok(log_int / q)
}

/// `ln |h_delta|_p` with `h_delta(x) = x^-alpha |ln x|^delta I(x < 1/e)`.
pub(crate) fn h_delta_log_norm(alpha: f64, delta: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    let eps = 1.0 - alpha * p;
    if !(eps > 0.0) {
        return Err(Error::Divergent(format!("|h_delta|_p diverges at p = {p}")));
    }
    let dp = delta * p;
    let phi = |u: f64| -eps * u + dp * u.ln();
    Ok(integrate_log_unimodal(phi, 1.0, f64::INFINITY, (dp / eps).max(1.0), (SMOOTH, SMOOTH), spec)? / p)
}

/// `ln T h_delta(e^-u)` with the unnormalised kernel.
fn h_delta_log_potential(alpha: f64, delta: f64, u: f64, potential: Potential, spec: &QuadratureSpec) -> Result<f64> {
    let e = alpha - 1.0;
    // Points y < x, that is v > u in y = e^-v.
    let log_far = if u >= 1.0 {
        let v = integrate_to_infinity_with(
            |t| (u + t.from_a).powf(delta) * (e * t.from_a).exp() * (-(-t.from_a).exp_m1()).powf(e),
            0.0,
            e,
            -4.0,
            spec,
        )?;
        v.value.ln()
    } else {
        let gap = 1.0 - u;
        let start = if gap < 0.5 { e } else { SMOOTH };
        let v = integrate_to_infinity_with(
            |t| (1.0 + t.from_a).powf(delta) * (e * t.from_a).exp() * (-(-(t.from_a + gap)).exp_m1()).powf(e),
            0.0,
            start,
            -4.0,
            spec,
        )?;
        e * gap + v.value.ln()
    };
    if potential == Potential::RiemannLiouville || u <= 1.0 {
        return Ok(log_far);
    }
    // Points y > x inside the support: v in (1, u).
    let near = integrate(
        |t| t.x.powf(delta) * (-(-t.to_b).exp_m1()).powf(e),
        1.0,
        u,
        (SMOOTH, e),
        spec,
    )?
    .value;
    let m = log_far.max(near.ln());
    Ok(m + ((log_far - m).exp() + (near.ln() - m).exp()).ln())
}

/// `ln |T h_delta|_q` with the unnormalised kernel.
pub(crate) fn h_delta_log_potential_norm(
    alpha: f64,
    delta: f64,
    q: f64,
    potential: Potential,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let phi = |u: f64| q * nonfinite(h_delta_log_potential(alpha, delta, u, potential, spec)) - u;
    let peak = q * (1.0 + delta);
    Ok(integrate_log_unimodal(phi, f64::NEG_INFINITY, f64::INFINITY, peak, (SMOOTH, SMOOTH), spec)? / q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{make_f0, make_h_delta};
    use crate::norms::lp_norm;
    use crate::operators::{riesz_function, rl_integral_function};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn j_integral_matches_closed_form_at_half() {
        // alpha = 1/2: J(u) = 2 ln(e^(u/2) + sqrt(e^u - 1)).
        let s = QuadratureSpec::default();
        for &u in &[0.01, 0.5, 3.0, 45.0] {
            let exact = 2.0 * ((u / 2.0f64).exp() + u.exp_m1().sqrt()).ln();
            assert!(rel(j_integral(0.5, u, &s).unwrap(), exact) < 1e-9, "u = {u}");
        }
    }

    #[test]
    fn f0_witness_agrees_with_direct_quadrature() {
        let s = QuadratureSpec::default();
        let (alpha, p) = (0.5, 1.5);
        let q = 1.0 / (1.0 / p - alpha);
        let f = make_f0().function;
        let direct = lp_norm(&rl_integral_function(&f, alpha, &s).unwrap(), q, &s).unwrap();
        let g = crate::special::gamma(alpha).unwrap();
        let log = f0_log_potential_norm(alpha, q, Potential::RiemannLiouville, &s).unwrap();
        assert!(rel(log.exp() / g, direct) < 1e-6);
        let direct = lp_norm(&riesz_function(&f, alpha, &s).unwrap(), q, &s).unwrap();
        let log = f0_log_potential_norm(alpha, q, Potential::Riesz, &s).unwrap();
        assert!(rel(log.exp(), direct) < 1e-6);
        assert!(rel(f0_log_norm(p).unwrap().exp(), lp_norm(&f, p, &s).unwrap()) < 1e-9);
    }

    #[test]
    fn h_delta_witness_agrees_with_direct_quadrature() {
        let s = QuadratureSpec::default();
        let (alpha, delta, p) = (0.5, 0.1, 1.5);
        let q = 1.0 / (1.0 / p - alpha);
        let h = make_h_delta(delta, alpha).unwrap().function;
        assert!(rel(h_delta_log_norm(alpha, delta, p, &s).unwrap().exp(), lp_norm(&h, p, &s).unwrap()) < 1e-8);
        let r = riesz_function(&h, alpha, &s).unwrap();
        let direct = lp_norm(&r, q, &s).unwrap();
        let log = h_delta_log_potential_norm(alpha, delta, q, Potential::Riesz, &s).unwrap();
        assert!(rel(log.exp(), direct) < 1e-6, "{} vs {direct}", log.exp());
        let ext = h.clone().with_domain_and_support(f64::INFINITY, h.support()).unwrap();
        let direct = lp_norm(&rl_integral_function(&ext, alpha, &s).unwrap(), q, &s).unwrap();
        let g = crate::special::gamma(alpha).unwrap();
        let log = h_delta_log_potential_norm(alpha, delta, q, Potential::RiemannLiouville, &s).unwrap();
        assert!(rel(log.exp() / g, direct) < 1e-6, "{} vs {direct}", log.exp() / g);
    }
}
