//! Mixed operators on factorable functions of two variables.

use super::derivative::{marchaud_derivative_at, DerivativeFlag, DerivativeValue};
use super::integral::left_integral;
use super::{check_order, or_nan};
use crate::error::{domain, Result};
use crate::funcspace::{Loc, TensorFunction};
use crate::quadrature::QuadratureSpec;
use crate::special::gamma;

use super::rl_integral;

fn check_point(x: f64, y: f64) -> Result<()> {
    if !(x > 0.0 && y > 0.0) {
        return domain(format!("mixed operator: point ({x}, {y}) must have positive coordinates"));
    }
    Ok(())
}

/// `I^(alpha, beta) F(x, y) = I^alpha g1(x) I^beta g2(y)`.
pub fn mixed_integral_factorable(
    f: &TensorFunction,
    alpha: f64,
    beta: f64,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_point(x, y)?;
    check_order("beta", beta)?;
    let a = rl_integral(&f.g1, alpha, x, spec)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(a * rl_integral(&f.g2, beta, y, spec)?)
}

/// The same mixed integral by iterated double quadrature of the two-variable kernel,
/// without using the factorisation.
pub fn mixed_integral_iterated(
    f: &TensorFunction,
    alpha: f64,
    beta: f64,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_point(x, y)?;
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    let tensor = f.clone();
    let sp = *spec;
    let xl = Loc::at(x);
    // Inner integral over t for a fixed s, as a function of s carrying g2's breakpoints.
    let outer = f.g2.with_same_annotations(move |s: Loc| {
        let t2 = tensor.clone();
        let slice = tensor.g1.with_same_annotations(move |t: Loc| t2.value_at(t, s));
        or_nan(left_integral(&slice, xl, alpha - 1.0, 0.0, &sp))
    });
    let v = left_integral(&outer, Loc::at(y), beta - 1.0, 0.0, spec)?;
    Ok(v / (gamma(alpha)? * gamma(beta)?))
}

/// `D^alpha_x D^beta_y F = D^alpha g1(x) D^beta g2(y)`; the flag is set if either factor is conventional.
pub fn mixed_derivative_factorable(
    f: &TensorFunction,
    alpha: f64,
    beta: f64,
    x: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<DerivativeValue> {
    check_point(x, y)?;
    let a = marchaud_derivative_at(&f.g1, alpha, Loc::at(x), spec)?;
    let b = marchaud_derivative_at(&f.g2, beta, Loc::at(y), spec)?;
    let flag = if a.flag != DerivativeFlag::Regular {
        a.flag
    } else {
        b.flag
    };
    if flag != DerivativeFlag::Regular {
        return Ok(DerivativeValue { value: 0.0, flag });
    }
    Ok(DerivativeValue { value: a.value * b.value, flag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{make_constant, make_g_h, make_indicator, make_power_alpha};
    use std::f64::consts::PI;

    #[test]
    fn constant_pair() {
        let spec = QuadratureSpec::default();
        let one = make_constant(1.0).unwrap().function;
        let t = TensorFunction::new(one.clone(), one);
        let v = mixed_integral_factorable(&t, 0.5, 0.5, 1.0, 1.0, &spec).unwrap();
        assert!(((v - 4.0 / PI) / v).abs() < 1e-9);
    }

    #[test]
    fn zero_factor() {
        let spec = QuadratureSpec::default();
        let one = make_constant(1.0).unwrap().function;
        let z = make_constant(0.0).unwrap().function;
        let t = TensorFunction::new(one, z);
        assert_eq!(mixed_integral_factorable(&t, 0.5, 0.3, 1.0, 2.0, &spec).unwrap(), 0.0);
        assert_eq!(mixed_derivative_factorable(&t, 0.5, 0.3, 1.0, 2.0, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn derivative_of_step_pair() {
        let spec = QuadratureSpec::default();
        let g = make_g_h(0.25).unwrap().function;
        let t = TensorFunction::new(g.clone(), g);
        let v = mixed_derivative_factorable(&t, 0.5, 0.5, 1.0, 1.0, &spec).unwrap().value;
        assert!((v - 0.424_413).abs() < 1e-6, "{v}");
        let one = 0.75f64.powf(-0.5) / PI.sqrt();
        assert!(((v - one * one) / v).abs() < 1e-8);
        let f = make_power_alpha(0.5).unwrap().function;
        let t = TensorFunction::new(f, make_indicator(0.1, 0.9).unwrap().function);
        assert!(mixed_derivative_factorable(&t, 0.5, 0.5, 1.0, 0.5, &spec).unwrap().value.abs() < 1e-8);
    }

    #[test]
    fn iterated_matches_factorable() {
        let spec = QuadratureSpec::with_tolerances(1e-10, 1e-14);
        let g1 = make_indicator(0.2, 0.7).unwrap().function;
        let g2 = make_power_alpha(0.6).unwrap().function;
        let t = TensorFunction::new(g1, g2);
        for &x in &[0.3, 0.6, 0.9] {
            for &y in &[0.5, 1.0, 2.0] {
                let a = mixed_integral_factorable(&t, 0.4, 0.3, x, y, &spec).unwrap();
                let b = mixed_integral_iterated(&t, 0.4, 0.3, x, y, &spec).unwrap();
                assert!(((a - b) / a).abs() < 1e-5, "({x}, {y}): {a} vs {b}");
            }
        }
    }
}
