//! Marchaud derivative, the finite-difference Riemann-Liouville derivative and the
//! closed-form derivatives of step functions.

use serde::Serialize;

use super::integral::left_integral;
use super::{check_order, value_or_estimate, Piece};
use crate::error::{domain, Error, Result};
use crate::funcspace::{CatalogEntry, KnownTransform, Loc, ScalarFunction};
use crate::quadrature::QuadratureSpec;
use crate::special::gamma;

/// How a derivative value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeFlag {
    Regular,
    /// The point is a jump or pole; the value 0 is a convention.
    ConventionZero,
    /// The defining integral failed to converge at this point; the value 0 is a convention.
    NonDifferentiable,
}

impl DerivativeFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            DerivativeFlag::Regular => "ok",
            DerivativeFlag::ConventionZero => "jump",
            DerivativeFlag::NonDifferentiable => "nondifferentiable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeValue {
    pub value: f64,
    pub flag: DerivativeFlag,
}

impl DerivativeValue {
    fn regular(value: f64) -> Self {
        DerivativeValue { value, flag: DerivativeFlag::Regular }
    }

    fn convention(flag: DerivativeFlag) -> Self {
        DerivativeValue { value: 0.0, flag }
    }
}

fn is_break(f: &ScalarFunction, x: &Loc) -> bool {
    if x.offset != 0.0 {
        return false;
    }
    let c = x.anchor;
    let (lo, hi) = f.support();
    f.jumps().contains(&c) || f.exponent_at(c) < 0.0 || (c == lo && lo > 0.0) || c == hi
}

/// Marchaud derivative at an anchored point:
/// `Gamma(1 - a) D^a f(x) = x^-a f(x) + a int_0^x (f(x) - f(t)) (x - t)^(-1-a) dt`.
pub fn marchaud_derivative_at(f: &ScalarFunction, alpha: f64, x: Loc, spec: &QuadratureSpec) -> Result<DerivativeValue> {
    check_order("alpha", alpha)?;
    if f.domain().0 != 0.0 {
        return domain("marchaud derivative: the function must live on (0, b)");
    }
    let x = f.snap(x);
    let xv = x.value();
    if !(xv > 0.0) || f.is_identically_zero() {
        return Ok(DerivativeValue::regular(0.0));
    }
    if is_break(f, &x) {
        return Ok(DerivativeValue::convention(DerivativeFlag::ConventionZero));
    }
    let fx = f.value_at(x);
    let (lo, hi) = f.support();
    let mut marks = vec![Loc::at(0.0)];
    for c in f.breakpoints_in(0.0, f64::INFINITY) {
        if x.minus(c) > 0.0 {
            marks.push(Loc::at(c));
        }
    }
    marks.push(x);
    let n = marks.len() - 1;
    let mut u = 0.0;
    for (i, w) in marks.windows(2).enumerate() {
        let (start, end) = (w[0], w[1]);
        let last = i + 1 == n;
        let outside = end.minus(lo) <= 0.0 || (hi.is_finite() && start.minus(hi) >= 0.0);
        if outside {
            if fx != 0.0 {
                // f vanishes here: a int (f(x) - 0)(x - t)^(-1-a) dt in closed form.
                let d_end = x.minus_loc(&end);
                let d_start = x.minus_loc(&start);
                u += fx * (d_end.powf(-alpha) - d_start.powf(-alpha));
            }
            continue;
        }
        let e_start = f.exponent_at(start.anchor);
        let e_end = if last { -alpha } else { f.exponent_at(end.anchor) };
        let piece = Piece { start, end, e_start, e_end };
        let short_last = last && piece.len() < 0.5 * xv;
        let r = piece.integrate(
            |t, ab| {
                // The increment rule avoids cancellation in f(x) - f(t) as t -> x. On a
                // short last piece every node is close to x in relative terms.
                if last && (ab.to_b < ab.from_a || short_last) {
                    let s = if ab.to_b < ab.from_a { ab.to_b } else { piece.distance_from(&x, ab) };
                    let inc = f.increment(x, s);
                    if inc == 0.0 {
                        return 0.0;
                    }
                    return inc * s.powf(-1.0 - alpha);
                }
                let inc = fx - f.value_at(t);
                if inc == 0.0 {
                    return 0.0;
                }
                inc * piece.distance_from(&x, ab).powf(-1.0 - alpha)
            },
            spec,
        );
        match r {
            Ok(e) => u += alpha * e.value,
            Err(Error::NoConvergence { .. } | Error::Divergent(_) | Error::NonFinite(_)) if last => {
                return Ok(DerivativeValue::convention(DerivativeFlag::NonDifferentiable));
            }
            Err(e) => u += alpha * value_or_estimate(Err(e))?,
        }
    }
    let value = (xv.powf(-alpha) * fx + u) / gamma(1.0 - alpha)?;
    Ok(DerivativeValue::regular(value))
}

/// Marchaud fractional derivative `D^alpha f(x)`.
pub fn marchaud_derivative(f: &ScalarFunction, alpha: f64, x: f64, spec: &QuadratureSpec) -> Result<DerivativeValue> {
    if !(x > 0.0) {
        return domain(format!("marchaud_derivative: x = {x} must be positive"));
    }
    marchaud_derivative_at(f, alpha, Loc::at(x), spec)
}

/// `D^alpha f` as a function, annotated with the `-alpha` blow-ups at the jumps of `f`.
pub fn marchaud_function(f: &ScalarFunction, alpha: f64, spec: &QuadratureSpec) -> Result<ScalarFunction> {
    check_order("alpha", alpha)?;
    let (lo, hi) = f.domain();
    if lo != 0.0 {
        return domain("marchaud derivative: the function must live on (0, b)");
    }
    if f.is_identically_zero() {
        return ScalarFunction::zero(lo, hi);
    }
    let g = f.clone();
    let sp = *spec;
    let mut out = ScalarFunction::with_local_rule(lo, hi, move |x| match marchaud_derivative_at(&g, alpha, x, &sp) {
        Ok(v) => v.value,
        Err(_) => f64::NAN,
    })?
    .with_support(f.support().0, hi)?;
    for &j in f.jumps() {
        out = out.with_singularity(j, -alpha);
    }
    let s0 = f.support().0;
    if s0 > 0.0 && f.exponent_at(s0).is_infinite() {
        out = out.with_singularity(s0, -alpha);
    }
    for s in f.singularities() {
        out = out.with_singularity(s.at, s.exponent - alpha);
    }
    if hi == f64::INFINITY {
        let d = if f.has_bounded_support() { -1.0 } else { f.decay().unwrap_or(0.0).min(-1.0) };
        out = out.with_decay(d - alpha);
    }
    Ok(out)
}

/// Riemann-Liouville derivative `d/dx int_0^x f(t)(x - t)^-a dt / Gamma(1 - a)`
/// by a central difference of the inner integral with half-width `step`.
pub fn rl_derivative_fd(f: &ScalarFunction, alpha: f64, x: f64, step: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_order("alpha", alpha)?;
    if !(step > 0.0) || !(x - step > 0.0) {
        return domain(format!("rl_derivative_fd: need 0 < step < x, got step = {step}, x = {x}"));
    }
    if x + step > f.domain().1 {
        return domain(format!("rl_derivative_fd: x + step = {} leaves the domain", x + step));
    }
    let j = |y: f64| left_integral(f, Loc::at(y), -alpha, 0.0, spec);
    Ok((j(x + step)? - j(x - step)?) / (2.0 * step) / gamma(1.0 - alpha)?)
}

fn check_blocks(blocks: &[(f64, f64, f64)]) -> Result<()> {
    for &(h1, h2, c) in blocks {
        if !(h1 >= 0.0 && h1 < h2) || !h1.is_finite() || h2.is_nan() || !c.is_finite() {
            return domain(format!("step derivative: need 0 <= h1 < h2, got ({h1}, {h2})"));
        }
    }
    Ok(())
}

/// `D^alpha` of `sum c I(h1 < x < h2)` at an anchored point, in closed form.
pub fn step_derivative_at(blocks: &[(f64, f64, f64)], alpha: f64, x: Loc) -> Result<DerivativeValue> {
    check_order("alpha", alpha)?;
    check_blocks(blocks)?;
    let mut total = 0.0;
    for &(h1, h2, c) in blocks {
        let d1 = x.minus(h1);
        let d2 = if h2.is_finite() { x.minus(h2) } else { -1.0 };
        if d1 == 0.0 || d2 == 0.0 {
            return Ok(DerivativeValue::convention(DerivativeFlag::ConventionZero));
        }
        if d1 > 0.0 {
            total += c * d1.powf(-alpha);
        }
        if d2 > 0.0 {
            total -= c * d2.powf(-alpha);
        }
    }
    Ok(DerivativeValue::regular(total / gamma(1.0 - alpha)?))
}

/// Closed-form `D^alpha` of the indicator `I(h1 < x < h2)` (`h2 = inf` allowed):
/// `Gamma(1 - a) D^a g(x) = I(x > h1)(x - h1)^-a - I(x > h2)(x - h2)^-a`.
pub fn indicator_derivative(h1: f64, h2: f64, alpha: f64, x: f64) -> Result<DerivativeValue> {
    step_derivative_at(&[(h1, h2, 1.0)], alpha, Loc::at(x))
}

/// The closed-form derivative of a step function as a function on `(0, b)`.
pub fn step_derivative_function(blocks: &[(f64, f64, f64)], alpha: f64, b: f64) -> Result<ScalarFunction> {
    check_order("alpha", alpha)?;
    check_blocks(blocks)?;
    if blocks.is_empty() || blocks.iter().all(|blk| blk.2 == 0.0) {
        return ScalarFunction::zero(0.0, b);
    }
    let owned: Vec<(f64, f64, f64)> = blocks.to_vec();
    let g1 = gamma(1.0 - alpha)?;
    let rule = move |x: Loc| {
        let mut total = 0.0;
        for &(h1, h2, c) in &owned {
            let d1 = x.minus(h1);
            if d1 > 0.0 {
                total += c * d1.powf(-alpha);
            }
            if h2.is_finite() {
                let d2 = x.minus(h2);
                if d2 > 0.0 {
                    total -= c * d2.powf(-alpha);
                }
            }
        }
        total / g1
    };
    let start = blocks.iter().map(|blk| blk.0).fold(f64::INFINITY, f64::min);
    let mut out = ScalarFunction::with_local_rule(0.0, b, rule)?.with_support(start, b)?;
    for &(h1, h2, _) in blocks {
        out = out.with_singularity(h1, -alpha);
        if h2 < b {
            out = out.with_singularity(h2, -alpha);
        }
    }
    if b == f64::INFINITY {
        let bounded = blocks.iter().all(|blk| blk.1.is_finite());
        out = out.with_decay(if bounded { -1.0 - alpha } else { -alpha });
    }
    Ok(out)
}

/// Closed-form derivative of `I(h1 < x < h2)` as a function on `(0, b)`.
pub fn indicator_derivative_function(h1: f64, h2: f64, alpha: f64, b: f64) -> Result<ScalarFunction> {
    step_derivative_function(&[(h1, h2, 1.0)], alpha, b)
}

/// `D^alpha` of a catalog entry: the closed form when one is known, otherwise the
/// Marchaud derivative.
pub fn derivative_function(entry: &CatalogEntry, alpha: f64, spec: &QuadratureSpec) -> Result<ScalarFunction> {
    let b = entry.function.domain().1;
    match entry.known_transform() {
        Some(KnownTransform::IndicatorDerivative { h1, h2 }) => indicator_derivative_function(h1, h2, alpha, b),
        Some(KnownTransform::StepDerivative { blocks }) => step_derivative_function(&blocks, alpha, b),
        Some(KnownTransform::Annihilated { alpha: a }) if a == alpha => ScalarFunction::zero(0.0, b),
        _ => marchaud_function(&entry.function, alpha, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{make_constant, make_g_h, make_indicator, make_power_alpha};
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn indicator_closed_form_examples() {
        let v = indicator_derivative(0.25, f64::INFINITY, 0.5, 1.0).unwrap();
        assert!(rel(v.value, 0.75f64.powf(-0.5) / PI.sqrt()) < 1e-13);
        assert!((v.value - 0.651_469_9).abs() < 5e-7);
        let v = indicator_derivative(0.0, f64::INFINITY, 0.5, 1.0).unwrap();
        assert!(rel(v.value, 1.0 / PI.sqrt()) < 1e-13);
        assert_eq!(indicator_derivative(0.25, 0.75, 0.5, 0.1).unwrap().value, 0.0);
        let j = indicator_derivative(0.25, 0.75, 0.5, 0.25).unwrap();
        assert_eq!(j.flag, DerivativeFlag::ConventionZero);
        assert!(indicator_derivative(0.5, 0.25, 0.5, 1.0).is_err());
    }

    #[test]
    fn marchaud_of_constant() {
        let spec = QuadratureSpec::default();
        for &c in &[1.0, -2.5] {
            let f = make_constant(c).unwrap().function;
            let v = marchaud_derivative(&f, 0.5, 4.0, &spec).unwrap().value;
            assert!(rel(v, c * 0.282_094_791_773_878_14) < 1e-12);
        }
        let z = make_constant(0.0).unwrap().function;
        assert_eq!(marchaud_derivative(&z, 0.5, 4.0, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn marchaud_annihilates_power() {
        let spec = QuadratureSpec::default();
        for &a in &[0.3, 0.5, 0.7] {
            let f = make_power_alpha(a).unwrap().function;
            for &x in &[0.5, 1.0, 2.0] {
                let v = marchaud_derivative(&f, a, x, &spec).unwrap();
                assert_eq!(v.flag, DerivativeFlag::Regular);
                assert!(v.value.abs() <= 1e-6 / x, "a = {a}, x = {x}: {}", v.value);
            }
        }
    }

    #[test]
    fn marchaud_matches_indicator_closed_form() {
        let spec = QuadratureSpec::default();
        let g = make_indicator(0.2, 0.6).unwrap().function;
        for &x in &[0.1, 0.3, 0.55, 0.7, 0.95] {
            let want = indicator_derivative(0.2, 0.6, 0.4, x).unwrap().value;
            let got = marchaud_derivative(&g, 0.4, x, &spec).unwrap().value;
            assert!((got - want).abs() <= 1e-4 * want.abs().max(1e-300), "x = {x}: {got} vs {want}");
        }
        assert_eq!(marchaud_derivative(&g, 0.4, 0.2, &spec).unwrap().flag, DerivativeFlag::ConventionZero);
    }

    #[test]
    fn rl_fd_examples() {
        let spec = QuadratureSpec::with_tolerances(1e-12, 1e-14);
        let g = make_g_h(0.25).unwrap().function;
        let v = rl_derivative_fd(&g, 0.5, 1.0, 1e-4, &spec).unwrap();
        assert!(rel(v, 0.651_469_9) < 1e-6, "{v}");
        let f = make_power_alpha(0.5).unwrap().function;
        assert!(rl_derivative_fd(&f, 0.5, 1.0, 1e-3, &spec).unwrap().abs() < 1e-5);
        let z = make_constant(0.0).unwrap().function;
        assert_eq!(rl_derivative_fd(&z, 0.5, 1.0, 1e-3, &spec).unwrap(), 0.0);
    }

    #[test]
    fn marchaud_matches_fd_on_smooth_function() {
        let spec = QuadratureSpec::with_tolerances(1e-12, 1e-14);
        let f = ScalarFunction::new(0.0, f64::INFINITY, |x| (-x).exp() * x).unwrap().with_decay(-50.0);
        for &x in &[0.5, 1.0, 2.0] {
            let m = marchaud_derivative(&f, 0.3, x, &spec).unwrap().value;
            let d = rl_derivative_fd(&f, 0.3, x, 1e-4, &spec).unwrap();
            assert!((m - d).abs() < 1e-3 * m.abs().max(1.0), "x = {x}: {m} vs {d}");
        }
    }

    #[test]
    fn marchaud_of_reciprocal_step_near_its_jump() {
        // D^(1/2) of I(x > 1)/x, with d = x - 1:
        // sqrt(pi) D = x^(-3/2) + (d^(-1/2) - x^(-1/2))/x - x^(-3/2) artanh(sqrt(d/x)).
        let f = crate::funcspace::make_f0().function;
        let spec = QuadratureSpec::default();
        for d in [0.5f64, 1e-3, 1e-8, 3e-11, 1e-13] {
            let x = 1.0 + d;
            let oracle = (x.powf(-1.5) + (d.powf(-0.5) - x.powf(-0.5)) / x - x.powf(-1.5) * (d / x).sqrt().atanh())
                / PI.sqrt();
            let v = marchaud_derivative_at(&f, 0.5, Loc::at(1.0).shifted(d), &spec).unwrap();
            assert_eq!(v.flag, DerivativeFlag::Regular);
            assert!(rel(v.value, oracle) < 1e-7, "d = {d}: {} vs {oracle}", v.value);
        }
    }
}
