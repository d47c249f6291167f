//! The catalog of test functions with their closed-form norms and transforms.

use super::{Loc, ScalarFunction, VerySimpleFunction};
use crate::error::{domain, Error, Result};

/// A closed form for a fractional transform of a catalog function.
#[derive(Clone, Debug, PartialEq)]
pub enum KnownTransform {
    /// `Gamma(1 - a) D^a f = I(x > h1)(x - h1)^-a - I(x > h2)(x - h2)^-a`, with `h2 = inf` allowed.
    IndicatorDerivative { h1: f64, h2: f64 },
    /// Weighted sum of indicator derivatives, blocks `(h1, h2, c)` with `h2 = inf` allowed.
    StepDerivative { blocks: Vec<(f64, f64, f64)> },
    /// `D^a f = 0` for the stated order.
    Annihilated { alpha: f64 },
}

/// Which closed-form family an entry belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum CatalogKind {
    Indicator { h1: f64, h2: f64 },
    F0,
    HDelta { delta: f64, alpha: f64 },
    F0PlusHDelta { delta: f64, alpha: f64 },
    PowerAlpha { alpha: f64 },
    Constant { c: f64 },
    VerySimple(VerySimpleFunction),
    Scaled { factor: f64, base: Box<CatalogKind> },
}

/// A named test function with the closed forms known for it.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: CatalogKind,
    pub function: ScalarFunction,
}

impl CatalogKind {
    fn norm(&self, p: f64) -> Option<Result<f64>> {
        match self {
            CatalogKind::Indicator { h1, h2 } => Some(Ok((h2 - h1).powf(1.0 / p))),
            CatalogKind::F0 => {
                if p <= 1.0 {
                    Some(Err(Error::Divergent(format!("|f0|_p diverges at p = {p}"))))
                } else {
                    Some(Ok((p - 1.0).powf(-1.0 / p)))
                }
            }
            CatalogKind::PowerAlpha { .. } => Some(Ok(f64::INFINITY)),
            CatalogKind::Constant { c } => Some(Ok(if *c == 0.0 { 0.0 } else { f64::INFINITY })),
            CatalogKind::VerySimple(v) => Some(v.lp_norm_exact(p)),
            CatalogKind::Scaled { factor, base } => base.norm(p).map(|r| r.map(|n| factor.abs() * n)),
            CatalogKind::HDelta { .. } | CatalogKind::F0PlusHDelta { .. } => None,
        }
    }

    fn transform(&self) -> Option<KnownTransform> {
        match self {
            CatalogKind::Indicator { h1, h2 } => Some(KnownTransform::IndicatorDerivative { h1: *h1, h2: *h2 }),
            CatalogKind::PowerAlpha { alpha } => Some(KnownTransform::Annihilated { alpha: *alpha }),
            CatalogKind::VerySimple(v) => Some(KnownTransform::StepDerivative { blocks: v.blocks().collect() }),
            CatalogKind::Scaled { factor, base } => match base.transform()? {
                KnownTransform::IndicatorDerivative { h1, h2 } => {
                    Some(KnownTransform::StepDerivative { blocks: vec![(h1, h2, *factor)] })
                }
                KnownTransform::StepDerivative { blocks } => Some(KnownTransform::StepDerivative {
                    blocks: blocks.into_iter().map(|(a, b, c)| (a, b, c * factor)).collect(),
                }),
                a @ KnownTransform::Annihilated { .. } => Some(a),
            },
            _ => None,
        }
    }
}

impl CatalogEntry {
    /// `|f|_p` in closed form when one exists. `Some(Ok(inf))` marks a divergent norm.
    pub fn known_norm(&self, p: f64) -> Option<Result<f64>> {
        if !(p >= 1.0) {
            return Some(domain(format!("norm exponent p = {p} must be at least 1")));
        }
        self.kind.norm(p)
    }

    /// Asymptotic value of `|h_delta|_p` as `p -> 1/alpha`, for the `h_delta` family only.
    pub fn norm_asymptotic(&self, p: f64) -> Option<f64> {
        match self.kind {
            CatalogKind::HDelta { delta, alpha } => {
                let eps = 1.0 - alpha * p;
                if !(eps > 0.0) {
                    return Some(f64::INFINITY);
                }
                let lg = crate::special::log_gamma(delta * p + 1.0).ok()?;
                Some((lg / p - (delta + 1.0 / p) * eps.ln()).exp())
            }
            _ => None,
        }
    }

    pub fn known_transform(&self) -> Option<KnownTransform> {
        self.kind.transform()
    }

    /// The entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> CatalogEntry {
        CatalogEntry {
            name: format!("{c}*{}", self.name),
            kind: CatalogKind::Scaled { factor: c, base: Box::new(self.kind.clone()) },
            function: self.function.scale(c),
        }
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {v} must be finite"))
    }
}

/// `I(h1 < x < h2)` on `(0, max(1, h2))`. With `h2 = inf` this is the step
/// `I(h1 < x)` on the half-line.
pub fn make_indicator(h1: f64, h2: f64) -> Result<CatalogEntry> {
    check_finite("h1", h1)?;
    if h2.is_nan() {
        return domain("h2 is NaN");
    }
    if !(h1 >= 0.0) {
        return domain(format!("indicator: h1 = {h1} must be non-negative"));
    }
    if !(h1 < h2) {
        return domain(format!("indicator: need h1 < h2, got h1 = {h1}, h2 = {h2}"));
    }
    let b = if h2.is_finite() { h2.max(1.0) } else { f64::INFINITY };
    let mut f = ScalarFunction::new(0.0, b, |_| 1.0)?.with_support(h1, h2)?;
    if h1 > 0.0 {
        f = f.with_jump(h1);
    }
    if h2 < b {
        f = f.with_jump(h2);
    }
    if !h2.is_finite() {
        f = f.with_decay(0.0);
    }
    f = f.with_increment(move |x: Loc, s: f64| {
        let inside = |y: Loc| y.minus(h1) > 0.0 && (!h2.is_finite() || y.minus(h2) < 0.0);
        let fx = if inside(x) { 1.0 } else { 0.0 };
        let ft = if inside(x.shifted(-s)) { 1.0 } else { 0.0 };
        fx - ft
    });
    let name = if h2.is_finite() {
        format!("indicator:{h1},{h2}")
    } else {
        format!("g_h:{h1}")
    };
    Ok(CatalogEntry {
        name,
        kind: CatalogKind::Indicator { h1, h2 },
        function: f,
    })
}

/// The step `g_h = I(h < x)`.
pub fn make_g_h(h: f64) -> Result<CatalogEntry> {
    if !(h > 0.0 && h < 1.0) {
        return domain(format!("g_h: h = {h} must lie in (0, 1)"));
    }
    make_indicator(h, f64::INFINITY)
}

/// `f0(x) = x^-1 I(x > 1)` on the half-line.
pub fn make_f0() -> CatalogEntry {
    let f = ScalarFunction::new(0.0, f64::INFINITY, |x| 1.0 / x)
        .and_then(|f| f.with_support(1.0, f64::INFINITY))
        .expect("static domain")
        .with_jump(1.0)
        .with_decay(-1.0)
        .with_increment(|x: Loc, s: f64| {
            let t = x.shifted(-s);
            let xv = x.value();
            if x.minus(1.0) <= 0.0 {
                return 0.0;
            }
            if t.minus(1.0) <= 0.0 {
                return 1.0 / xv;
            }
            // 1/x - 1/(x - s) = -s / (x (x - s))
            -s / (xv * t.value())
        });
    CatalogEntry {
        name: "f0".into(),
        kind: CatalogKind::F0,
        function: f,
    }
}

fn h_delta_function(delta: f64, alpha: f64) -> Result<ScalarFunction> {
    let cut = (-1.0f64).exp();
    let f = ScalarFunction::with_local_rule(0.0, f64::INFINITY, move |x: Loc| {
        let v = x.value();
        v.powf(-alpha) * (-v.ln()).powf(delta)
    })?
    .with_support(0.0, cut)?
    .with_singularity(0.0, -alpha)
    .with_jump(cut);
    Ok(f)
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("order alpha = {alpha} must lie in (0, 1)"));
    }
    Ok(())
}

/// `h_delta(x) = x^-alpha |ln x|^delta I(0 < x < 1/e)`.
pub fn make_h_delta(delta: f64, alpha: f64) -> Result<CatalogEntry> {
    if !(delta > 0.0) || !delta.is_finite() {
        return domain(format!("h_delta: delta = {delta} must be positive"));
    }
    check_order(alpha)?;
    Ok(CatalogEntry {
        name: format!("h_delta:{delta}"),
        kind: CatalogKind::HDelta { delta, alpha },
        function: h_delta_function(delta, alpha)?,
    })
}

/// `f0 + h_delta`; the supports `(1, inf)` and `(0, 1/e)` are disjoint.
pub fn make_f0_plus_h_delta(delta: f64, alpha: f64) -> Result<CatalogEntry> {
    let h = make_h_delta(delta, alpha)?;
    let f = make_f0().function.sum(&h.function)?;
    Ok(CatalogEntry {
        name: format!("f0+h_delta:{delta}"),
        kind: CatalogKind::F0PlusHDelta { delta, alpha },
        function: f,
    })
}

/// `f_alpha(x) = x^(alpha - 1)`, annihilated by `D^alpha`.
pub fn make_power_alpha(alpha: f64) -> Result<CatalogEntry> {
    check_order(alpha)?;
    let e = alpha - 1.0;
    let f = ScalarFunction::new(0.0, f64::INFINITY, move |x| x.powf(e))?
        .with_singularity(0.0, e)
        .with_decay(e)
        .with_increment(move |x: Loc, s: f64| {
            let xv = x.value();
            if s >= xv {
                return xv.powf(e);
            }
            // x^e - (x - s)^e = -x^e expm1(e ln(1 - s/x))
            -xv.powf(e) * (e * (-s / xv).ln_1p()).exp_m1()
        });
    Ok(CatalogEntry {
        name: format!("power_alpha:{alpha}"),
        kind: CatalogKind::PowerAlpha { alpha },
        function: f,
    })
}

/// The constant `c` on the half-line.
pub fn make_constant(c: f64) -> Result<CatalogEntry> {
    check_finite("c", c)?;
    let mut f = ScalarFunction::new(0.0, f64::INFINITY, move |_| c)?
        .with_decay(0.0)
        .with_increment(|_, _| 0.0);
    if c == 0.0 {
        f = f.scale(0.0);
    }
    Ok(CatalogEntry {
        name: format!("const:{c}"),
        kind: CatalogKind::Constant { c },
        function: f,
    })
}

/// Wraps a very simple function as a catalog entry.
pub fn make_very_simple(v: VerySimpleFunction) -> Result<CatalogEntry> {
    let function = v.to_scalar()?;
    Ok(CatalogEntry {
        name: "vs".into(),
        kind: CatalogKind::VerySimple(v),
        function,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp_norm;
    use crate::quadrature::QuadratureSpec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn indicator_norms() {
        let g = make_indicator(0.25, 0.75).unwrap();
        assert!(rel(g.known_norm(2.0).unwrap().unwrap(), 0.5f64.sqrt()) < 1e-15);
        assert!(rel(g.known_norm(1.0).unwrap().unwrap(), 0.5) < 1e-15);
        assert_eq!(g.function.evaluate(0.5).unwrap(), 1.0);
        assert_eq!(g.function.evaluate(0.1).unwrap(), 0.0);
        assert!(make_indicator(0.5, 0.5).is_err());
        assert!(make_indicator(0.7, 0.2).is_err());
    }

    #[test]
    fn g_h_is_a_step_on_the_half_line() {
        let g = make_g_h(0.25).unwrap();
        assert_eq!(g.known_norm(2.0).unwrap().unwrap(), f64::INFINITY);
        assert_eq!(g.function.evaluate(3.0).unwrap(), 1.0);
        assert_eq!(g.function.evaluate(0.9).unwrap(), 1.0);
        assert_eq!(g.function.evaluate(0.2).unwrap(), 0.0);
    }

    #[test]
    fn f0_values_and_norms() {
        let f = make_f0();
        assert_eq!(f.function.evaluate(2.0).unwrap(), 0.5);
        assert_eq!(f.function.evaluate(0.5).unwrap(), 0.0);
        assert!(rel(f.known_norm(2.0).unwrap().unwrap(), 1.0) < 1e-15);
        assert!(rel(f.known_norm(1.5).unwrap().unwrap(), 0.5f64.powf(-2.0 / 3.0)) < 1e-15);
        assert!(rel(f.known_norm(1.0001).unwrap().unwrap(), 9999.0) < 1e-3);
        assert!(matches!(f.known_norm(1.0), Some(Err(Error::Divergent(_)))));
    }

    #[test]
    fn h_delta_values() {
        let h = make_h_delta(0.1, 0.5).unwrap();
        let at = h.function.evaluate((-1.0f64).exp() * (1.0 - 1e-15)).unwrap();
        assert!(rel(at, 0.5f64.exp()) < 1e-9);
        assert_eq!(h.function.evaluate(1.0).unwrap(), 0.0);
        assert!(make_h_delta(0.0, 0.5).is_err());
        let spec = QuadratureSpec::default();
        assert!(lp_norm(&h.function, 1.9, &spec).unwrap().is_finite());
    }

    #[test]
    fn power_alpha_values() {
        let f = make_power_alpha(0.5).unwrap();
        assert_eq!(f.function.evaluate(4.0).unwrap(), 0.5);
        assert_eq!(f.function.evaluate(1.0).unwrap(), 1.0);
        assert!(make_power_alpha(1.0).is_err());
        assert!(make_power_alpha(0.0).is_err());
    }

    #[test]
    fn closed_form_norms_match_quadrature() {
        let spec = QuadratureSpec::default();
        let entries = vec![
            make_indicator(0.25, 0.75).unwrap(),
            make_indicator(0.1, 0.3).unwrap(),
            make_f0(),
            make_very_simple(VerySimpleFunction::equal_step(0.1, vec![0.1, 0.5], vec![2.0, -1.0]).unwrap()).unwrap(),
        ];
        for e in &entries {
            let mut p = 1.05;
            while p <= 4.0 {
                let want = e.known_norm(p).unwrap().unwrap();
                let got = lp_norm(&e.function, p, &spec).unwrap();
                assert!(rel(got, want) < 1e-6, "{} at p = {p}: {got} vs {want}", e.name);
                p += 0.35;
            }
        }
    }

    #[test]
    fn h_delta_norm_tracks_asymptotic() {
        let spec = QuadratureSpec::default();
        let h = make_h_delta(0.1, 0.5).unwrap();
        // Near p = 1/alpha the ratio to the asymptotic form tends to one.
        let p = 1.9;
        let got = lp_norm(&h.function, p, &spec).unwrap();
        let asym = h.norm_asymptotic(p).unwrap();
        assert!(rel(got, asym) < 2e-2, "{got} vs {asym}");
    }
}
