//! Riemann-Liouville integral, the weighted Cesaro-Hardy potential and the Riesz potential.

use super::{check_order, or_nan, value_or_estimate, Piece};
use crate::error::{domain, Result};
use crate::funcspace::{Loc, ScalarFunction};
use crate::quadrature::{integrate_to_infinity_with, QuadratureSpec, SMOOTH};
use crate::special::gamma;

/// Exponent of a product of two local powers; `SMOOTH` acts as exponent zero.
pub(crate) fn combine(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => a + b,
        (true, false) => a,
        (false, true) => b,
        (false, false) => SMOOTH,
    }
}

fn exponent_at_loc(f: &ScalarFunction, x: &Loc) -> f64 {
    if x.offset == 0.0 {
        f.exponent_at(x.anchor)
    } else {
        SMOOTH
    }
}

/// `int_0^x y^-beta f(y) (x - y)^kernel dy`, with `f` extended by zero.
pub(crate) fn left_integral(f: &ScalarFunction, x: Loc, kernel: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (lo, hi) = f.support();
    let x = f.snap(x);
    if f.is_identically_zero() || x.minus(lo) <= 0.0 {
        return Ok(0.0);
    }
    let beyond = hi.is_finite() && x.minus(hi) >= 0.0;
    let (end, e_end) = if beyond {
        let e = if x.minus(hi) == 0.0 { combine(f.exponent_at(hi), kernel) } else { f.exponent_at(hi) };
        (Loc::at(hi), e)
    } else {
        (x, combine(exponent_at_loc(f, &x), kernel))
    };
    let weight_exp = if beta != 0.0 && lo == 0.0 { -beta } else { SMOOTH };
    let mut marks: Vec<(Loc, f64)> = vec![(Loc::at(lo), combine(f.exponent_at(lo), weight_exp))];
    for c in f.breakpoints_in(lo, if beyond { hi } else { f64::INFINITY }) {
        if beyond || x.minus(c) > 0.0 {
            marks.push((Loc::at(c), f.exponent_at(c)));
        }
    }
    marks.push((end, e_end));
    let mut total = 0.0;
    for w in marks.windows(2) {
        let piece = Piece { start: w[0].0, end: w[1].0, e_start: w[0].1, e_end: w[1].1 };
        let r = piece.integrate(
            |t, ab| {
                let v = f.value_at(t);
                if v == 0.0 {
                    return 0.0;
                }
                let dist = piece.distance_from(&x, ab);
                let mut out = v * dist.powf(kernel);
                if beta != 0.0 {
                    out *= t.value().powf(-beta);
                }
                out
            },
            spec,
        );
        total += value_or_estimate(r)?;
    }
    Ok(total)
}

/// `I^alpha f` at an anchored point.
pub fn rl_integral_at(f: &ScalarFunction, alpha: f64, x: Loc, spec: &QuadratureSpec) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok(left_integral(f, x, alpha - 1.0, 0.0, spec)? / gamma(alpha)?)
}

/// Riemann-Liouville integral `I^alpha f(x) = Gamma(alpha)^-1 int_0^x f(t) (x - t)^(alpha - 1) dt`.
pub fn rl_integral(f: &ScalarFunction, alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("rl_integral: x = {x} must be positive"));
    }
    rl_integral_at(f, alpha, Loc::at(x), spec)
}

fn output_decay(f: &ScalarFunction, shift: f64) -> Option<f64> {
    if f.is_identically_zero() {
        return None;
    }
    if f.has_bounded_support() {
        Some(shift - 1.0)
    } else {
        f.decay().map(|d| d + shift)
    }
}

/// `I^alpha f` as a function, annotated for use in further quadrature.
pub fn rl_integral_function(f: &ScalarFunction, alpha: f64, spec: &QuadratureSpec) -> Result<ScalarFunction> {
    check_order("alpha", alpha)?;
    let g = f.clone();
    let sp = *spec;
    let (lo, hi) = f.domain();
    let mut out = ScalarFunction::with_local_rule(lo, hi, move |x| or_nan(rl_integral_at(&g, alpha, x, &sp)))?;
    if f.is_identically_zero() {
        return Ok(out.scale(0.0));
    }
    out = out.with_support(f.support().0, hi)?;
    for s in f.singularities() {
        out = out.with_singularity(s.at, s.exponent + alpha);
    }
    for &j in f.jumps() {
        out = out.with_singularity(j, alpha);
    }
    if hi == f64::INFINITY {
        if let Some(d) = output_decay(f, alpha) {
            out = out.with_decay(d);
        }
    }
    Ok(out)
}

fn check_weights(beta: f64, gamma_: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) || !(0.0..1.0).contains(&gamma_) {
        return domain(format!("weights beta = {beta}, gamma = {gamma_} must lie in [0, 1)"));
    }
    Ok(())
}

/// Weighted potential at an anchored point.
pub fn weighted_potential_at(
    f: &ScalarFunction,
    alpha: f64,
    beta: f64,
    gamma_: f64,
    x: Loc,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_weights(beta, gamma_)?;
    let xv = x.value();
    if !(xv > 0.0) {
        return Ok(0.0);
    }
    Ok(xv.powf(-gamma_) * left_integral(f, x, alpha - 1.0, beta, spec)? / gamma(alpha)?)
}

/// `x^-gamma Gamma(alpha)^-1 int_0^x y^-beta f(y) (x - y)^(alpha - 1) dy`.
pub fn weighted_potential(
    f: &ScalarFunction,
    alpha: f64,
    beta: f64,
    gamma_: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("weighted_potential: x = {x} must be positive"));
    }
    weighted_potential_at(f, alpha, beta, gamma_, Loc::at(x), spec)
}

/// The weighted potential as a function on the domain of `f`.
pub fn weighted_potential_function(
    f: &ScalarFunction,
    alpha: f64,
    beta: f64,
    gamma_: f64,
    spec: &QuadratureSpec,
) -> Result<ScalarFunction> {
    check_order("alpha", alpha)?;
    check_weights(beta, gamma_)?;
    let g = f.clone();
    let sp = *spec;
    let (lo, hi) = f.domain();
    let mut out = ScalarFunction::with_local_rule(lo, hi, move |x| {
        or_nan(weighted_potential_at(&g, alpha, beta, gamma_, x, &sp))
    })?;
    if f.is_identically_zero() {
        return Ok(out.scale(0.0));
    }
    out = out.with_support(f.support().0, hi)?;
    if f.support().0 == 0.0 {
        out = out.with_singularity(0.0, combine(f.exponent_at(0.0), 0.0) + alpha - beta - gamma_);
    }
    for &j in f.jumps() {
        out = out.with_singularity(j, alpha);
    }
    if hi == f64::INFINITY {
        if let Some(d) = output_decay(f, alpha - beta) {
            out = out.with_decay(d - gamma_);
        }
    }
    Ok(out)
}

/// Riesz potential at an anchored point, `int f(y) |x - y|^(alpha - 1) dy`.
pub fn riesz_potential_at(f: &ScalarFunction, alpha: f64, x: Loc, spec: &QuadratureSpec) -> Result<f64> {
    check_order("alpha", alpha)?;
    if f.is_identically_zero() {
        return Ok(0.0);
    }
    let (lo, hi) = f.support();
    let x = f.snap(x);
    let kernel = alpha - 1.0;
    let mut marks: Vec<(Loc, f64)> = Vec::new();
    let mut pts = vec![lo];
    pts.extend(f.breakpoints_in(lo, hi));
    if hi.is_finite() {
        pts.push(hi);
    }
    let mut placed = false;
    for c in pts {
        let side = x.minus(c);
        if !placed && side < 0.0 && x.minus(lo) > 0.0 {
            marks.push((x, kernel));
            placed = true;
        }
        if side == 0.0 {
            marks.push((x, combine(f.exponent_at(c), kernel)));
            placed = true;
        } else {
            marks.push((Loc::at(c), f.exponent_at(c)));
        }
    }
    if !placed && !hi.is_finite() && x.minus(lo) > 0.0 {
        marks.push((x, kernel));
    }
    let mut total = 0.0;
    for w in marks.windows(2) {
        let piece = Piece { start: w[0].0, end: w[1].0, e_start: w[0].1, e_end: w[1].1 };
        let r = piece.integrate(
            |t, ab| {
                let v = f.value_at(t);
                if v == 0.0 {
                    return 0.0;
                }
                v * piece.distance_from(&x, ab).abs().powf(kernel)
            },
            spec,
        );
        total += value_or_estimate(r)?;
    }
    if !hi.is_finite() {
        let Some(decay) = f.decay() else {
            return domain("riesz potential: unbounded support needs a decay hint");
        };
        let (last, e_last) = *marks.last().expect("support start is always present");
        let r = integrate_to_infinity_with(
            |ab| {
                let y = last.shifted(ab.from_a);
                let v = f.value_at(y);
                if v == 0.0 {
                    return 0.0;
                }
                v * (x.minus_loc(&last) - ab.from_a).abs().powf(kernel)
            },
            last.value(),
            e_last,
            decay + kernel,
            spec,
        );
        total += value_or_estimate(r)?;
    }
    Ok(total)
}

/// Riesz potential of order `alpha` in dimension one.
pub fn riesz_potential_1d(f: &ScalarFunction, alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("riesz_potential_1d: x = {x} must be finite"));
    }
    riesz_potential_at(f, alpha, Loc::at(x), spec)
}

/// The Riesz potential restricted to the half-line, as a function.
pub fn riesz_function(f: &ScalarFunction, alpha: f64, spec: &QuadratureSpec) -> Result<ScalarFunction> {
    check_order("alpha", alpha)?;
    let g = f.clone();
    let sp = *spec;
    let lo = f.domain().0;
    let mut out = ScalarFunction::with_local_rule(lo, f64::INFINITY, move |x| or_nan(riesz_potential_at(&g, alpha, x, &sp)))?;
    if f.is_identically_zero() {
        return Ok(out.scale(0.0));
    }
    for s in f.singularities() {
        out = out.with_singularity(s.at, s.exponent + alpha);
    }
    for &j in f.jumps() {
        out = out.with_singularity(j, alpha);
    }
    if let Some(d) = output_decay(f, alpha) {
        out = out.with_decay(d);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{make_constant, make_indicator};
    use crate::special::beta as beta_fn;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rl_of_constant() {
        let spec = QuadratureSpec::default();
        let one = make_constant(1.0).unwrap().function;
        let v = rl_integral(&one, 0.5, 1.0, &spec).unwrap();
        assert!(rel(v, 2.0 / PI.sqrt()) < 1e-9);
        let zero = make_constant(0.0).unwrap().function;
        assert_eq!(rl_integral(&zero, 0.5, 1.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn rl_of_power_oracle() {
        // I^a x^(b-1) = Gamma(b)/Gamma(a+b) x^(a+b-1)
        let spec = QuadratureSpec::default();
        let f = ScalarFunction::new(0.0, f64::INFINITY, |x| x.powf(-0.4)).unwrap().with_singularity(0.0, -0.4);
        for &x in &[0.3f64, 1.0, 7.0] {
            let want = gamma(0.6).unwrap() / gamma(0.9).unwrap() * x.powf(-0.1);
            assert!(rel(rl_integral(&f, 0.3, x, &spec).unwrap(), want) < 1e-8);
        }
    }

    #[test]
    fn semigroup_on_constant() {
        let spec = QuadratureSpec::default();
        let one = make_constant(1.0).unwrap().function;
        let inner = rl_integral_function(&one, 0.3, &spec).unwrap();
        for &x in &[0.5, 1.0, 3.0] {
            let v = rl_integral(&inner, 0.4, x, &spec).unwrap();
            let want = x.powf(0.7) / gamma(1.7).unwrap();
            assert!(rel(v, want) < 1e-6, "x = {x}: {v} vs {want}");
        }
    }

    #[test]
    fn weighted_potential_oracle() {
        let spec = QuadratureSpec::default();
        let one = make_constant(1.0).unwrap().function;
        let (a, b, g) = (0.6, 0.3, 0.4);
        for &x in &[0.5f64, 2.0] {
            let want = x.powf(a - b - g) * beta_fn(1.0 - b, a).unwrap() / gamma(a).unwrap();
            assert!(rel(weighted_potential(&one, a, b, g, x, &spec).unwrap(), want) < 1e-8);
        }
        let rl = rl_integral(&one, a, 2.0, &spec).unwrap();
        assert!(rel(weighted_potential(&one, a, 0.0, 0.0, 2.0, &spec).unwrap(), rl) < 1e-12);
        let zero = make_constant(0.0).unwrap().function;
        assert_eq!(weighted_potential(&zero, a, b, g, 1.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn riesz_of_unit_indicator() {
        let spec = QuadratureSpec::default();
        let g = make_indicator(0.0, 1.0).unwrap().function;
        assert!(rel(riesz_potential_1d(&g, 0.5, 2.0, &spec).unwrap(), 2.0 * (2f64.sqrt() - 1.0)) < 1e-9);
        assert!(rel(riesz_potential_1d(&g, 0.5, 0.5, &spec).unwrap(), 2.0 * 2f64.sqrt()) < 1e-9);
        assert!(rel(riesz_potential_1d(&g, 0.5, 1.0, &spec).unwrap(), 2.0) < 1e-9);
        assert!(rel(riesz_potential_1d(&g, 0.5, -3.0, &spec).unwrap(), 2.0 * (2.0 - 3f64.sqrt())) < 1e-9);
        let zero = make_constant(0.0).unwrap().function;
        assert_eq!(riesz_potential_1d(&zero, 0.5, 1.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn riesz_with_unbounded_support() {
        // f0 at x < 1 with a = 1/2: int_1^inf dy / (y sqrt(y - x)) = (pi - 2 atan(sqrt((1 - x)/x))) / sqrt(x)
        let spec = QuadratureSpec::default();
        let f0 = crate::funcspace::make_f0().function;
        for &x in &[0.3f64, 0.5, 0.9] {
            let want = (PI - 2.0 * ((1.0 - x) / x).sqrt().atan()) / x.sqrt();
            assert!(rel(riesz_potential_1d(&f0, 0.5, x, &spec).unwrap(), want) < 1e-8);
        }
    }

    #[test]
    fn linearity() {
        let spec = QuadratureSpec::default();
        let g = make_indicator(0.2, 0.7).unwrap().function;
        let g3 = g.scale(-3.5);
        for &x in &[0.5, 0.9] {
            let a = rl_integral(&g, 0.4, x, &spec).unwrap();
            let b = rl_integral(&g3, 0.4, x, &spec).unwrap();
            assert!(rel(b, -3.5 * a) < 1e-10);
            let a = riesz_potential_1d(&g, 0.4, x, &spec).unwrap();
            let b = riesz_potential_1d(&g3, 0.4, x, &spec).unwrap();
            assert!(rel(b, -3.5 * a) < 1e-10);
        }
    }
}
