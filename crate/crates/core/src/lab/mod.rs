//! Empirical checks of the operator-norm estimates: sup-ratio estimators over
//! extremal families, two-sided bracket checks and blow-up exponent fits.

mod checks;
mod witness;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{k_upper, sobolev_q};
use crate::error::{domain, Error, Result};
use crate::funcspace::{CatalogEntry, CatalogKind, ScalarFunction};
use crate::norms::lp_norm;
use crate::operators::{riesz_function, rl_integral_function};
use crate::quadrature::QuadratureSpec;
use crate::special::log_gamma;

pub use checks::{
    besov_ratio, besov_ratio_entry, restrict, indicator_bracket_grid, verify_abel_inversion, verify_annihilation,
    verify_besov_ratio, verify_closed_form_derivative, verify_factorization, verify_gls_indicator,
    verify_gls_sobolev, verify_indicator_bracket, verify_indicator_grid, verify_prop51, verify_vs_bound,
    verify_weighted_bracket, weighted_slope, BRACKET_SLACK, ENVELOPE_S,
};

/// Sweeps never evaluate closer than this to an end of the admissible `p` range.
pub const MIN_ENDPOINT_DISTANCE: f64 = 1e-3;

/// Fewest samples accepted by a slope fit.
pub const MIN_FIT_SAMPLES: usize = 5;

/// Which fractional potential a ratio is taken for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Potential {
    /// `I^alpha`, normalised by `1 / Gamma(alpha)`.
    RiemannLiouville,
    /// `int |x - y|^(alpha - 1) f(y) dy` over the half-line, unnormalised.
    Riesz,
}

impl Potential {
    pub fn as_str(&self) -> &'static str {
        match self {
            Potential::RiemannLiouville => "rl",
            Potential::Riesz => "riesz",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rl" | "rl-integral" | "riemann-liouville" => Ok(Potential::RiemannLiouville),
            "riesz" => Ok(Potential::Riesz),
            _ => Err(Error::Parse(format!("unknown potential '{s}' (expected rl or riesz)"))),
        }
    }
}

/// One empirical value of `|T f|_q / |f|_p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioSample {
    pub p: f64,
    pub q: f64,
    pub ratio: f64,
    pub witness: String,
}

/// A computed quantity with its analytic envelope.
///
/// `passed` holds when the quantity is finite and lies in
/// `[lower - tolerance |lower|, upper + tolerance |upper|]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub check: String,
    pub quantity: f64,
    pub lower: f64,
    pub upper: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: BTreeMap<String, f64>,
}

impl BracketReport {
    pub fn new(check: &str, quantity: f64, lower: f64, upper: f64, tolerance: f64) -> Self {
        let lo = lower - tolerance * lower.abs();
        let hi = upper + tolerance * upper.abs();
        BracketReport {
            check: check.to_string(),
            quantity,
            lower,
            upper,
            tolerance,
            passed: quantity.is_finite() && quantity >= lo && quantity <= hi,
            context: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.context.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.context.get(key).copied()
    }
}

/// The end of the `p` range a blow-up is measured at.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Endpoint {
    /// `p -> 1+`, distance `p - 1`.
    One,
    /// `p -> (1/alpha)-`, distance `1 - alpha p`.
    InverseAlpha(f64),
}

impl Endpoint {
    pub fn distance(&self, p: f64) -> f64 {
        match *self {
            Endpoint::One => p - 1.0,
            Endpoint::InverseAlpha(alpha) => 1.0 - alpha * p,
        }
    }

    /// The point at distance `2^-k` from the end, for each `k`.
    pub fn geometric_grid(&self, ks: impl IntoIterator<Item = i32>) -> Vec<f64> {
        ks.into_iter()
            .map(|k| {
                let d = 2f64.powi(-k);
                match *self {
                    Endpoint::One => 1.0 + d,
                    Endpoint::InverseAlpha(alpha) => (1.0 - d) / alpha,
                }
            })
            .collect()
    }
}

/// A power law `value = exp(intercept) distance^slope`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub samples: usize,
}

impl SlopeFit {
    /// Extrapolated value at `distance`.
    pub fn predict(&self, distance: f64) -> f64 {
        (self.intercept + self.slope * distance.ln()).exp()
    }
}

/// Least-squares fit of `ln value` against `ln distance`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_FIT_SAMPLES, got: points.len() });
    }
    for &(d, v) in points {
        if !(d > 0.0 && v > 0.0) || !d.is_finite() || !v.is_finite() {
            return domain(format!("fit: distance {d} and value {v} must be finite and positive"));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return domain("fit: distances must not all coincide");
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit { slope, intercept: my - slope * mx, samples: points.len() })
}

/// Power-law fit of the ratios against the distance to `endpoint`.
pub fn fit_blowup(samples: &[RatioSample], endpoint: Endpoint) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (endpoint.distance(s.p), s.ratio)).collect();
    fit_power_law(&pts)
}

/// Slope of `ln ratio` against `ln` of the distance to `endpoint`.
pub fn blowup_slope(samples: &[RatioSample], endpoint: Endpoint) -> Result<f64> {
    Ok(fit_blowup(samples, endpoint)?.slope)
}

fn check_sweep_point(alpha: f64, p: f64) -> Result<()> {
    if !(p - 1.0 >= MIN_ENDPOINT_DISTANCE && 1.0 - alpha * p >= MIN_ENDPOINT_DISTANCE * alpha) {
        return domain(format!(
            "p = {p} is within {MIN_ENDPOINT_DISTANCE} of an end of (1, {}); use slope extrapolation",
            1.0 / alpha
        ));
    }
    Ok(())
}

type NormFn = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;

fn witness_delta(entry: &CatalogEntry, alpha: f64) -> Option<f64> {
    match entry.kind {
        CatalogKind::HDelta { delta, alpha: a } if a == alpha => Some(delta),
        _ => None,
    }
}

/// The entry extended by zero to the half-line.
fn on_half_line(f: &ScalarFunction) -> Result<ScalarFunction> {
    if f.domain().1 == f64::INFINITY {
        return Ok(f.clone());
    }
    let s = f.support();
    f.clone().with_domain_and_support(f64::INFINITY, s)
}

/// `p -> |f|_p`, in closed or logarithmic form for the extremal families.
pub(crate) fn input_norm_fn(entry: &CatalogEntry, alpha: f64, spec: &QuadratureSpec) -> NormFn {
    let sp = *spec;
    if entry.kind == CatalogKind::F0 {
        return Box::new(|p| Ok(witness::f0_log_norm(p)?.exp()));
    }
    if let Some(delta) = witness_delta(entry, alpha) {
        return Box::new(move |p| Ok(witness::h_delta_log_norm(alpha, delta, p, &sp)?.exp()));
    }
    let f = entry.function.clone();
    Box::new(move |p| lp_norm(&f, p, &sp))
}

/// `q -> |T f|_q` for the chosen potential, in logarithmic form for the extremal
/// families and by quadrature of a memoized potential otherwise.
pub(crate) fn potential_norm_fn(
    entry: &CatalogEntry,
    alpha: f64,
    potential: Potential,
    spec: &QuadratureSpec,
) -> Result<NormFn> {
    let sp = *spec;
    let shift = match potential {
        Potential::RiemannLiouville => log_gamma(alpha)?,
        Potential::Riesz => 0.0,
    };
    if entry.kind == CatalogKind::F0 {
        return Ok(Box::new(move |q| {
            Ok((witness::f0_log_potential_norm(alpha, q, potential, &sp)? - shift).exp())
        }));
    }
    if let Some(delta) = witness_delta(entry, alpha) {
        return Ok(Box::new(move |q| {
            Ok((witness::h_delta_log_potential_norm(alpha, delta, q, potential, &sp)? - shift).exp())
        }));
    }
    let f = &entry.function;
    if f.is_identically_zero() {
        return Ok(Box::new(|_| Ok(0.0)));
    }
    let t = match potential {
        Potential::RiemannLiouville => rl_integral_function(&on_half_line(f)?, alpha, spec)?,
        Potential::Riesz => riesz_function(f, alpha, spec)?,
    }
    .memoized();
    Ok(Box::new(move |q| lp_norm(&t, q, &sp)))
}

/// `|T f|_q / |f|_p` at the Sobolev exponent `q(p)` for one entry.
pub fn potential_ratio(
    entry: &CatalogEntry,
    alpha: f64,
    p: f64,
    potential: Potential,
    spec: &QuadratureSpec,
) -> Result<RatioSample> {
    let q = sobolev_q(p, alpha, 1)?;
    let fp = input_norm_fn(entry, alpha, spec)(p)?;
    if fp == f64::INFINITY {
        return Err(Error::Divergent(format!("|{}|_p is infinite at p = {p}", entry.name)));
    }
    let ratio = if fp == 0.0 { 0.0 } else { potential_norm_fn(entry, alpha, potential, spec)?(q)? / fp };
    Ok(RatioSample { p, q, ratio, witness: entry.name.clone() })
}

/// Largest `|I^alpha f|_q / |f|_p` over the family: a lower bound on the operator norm.
pub fn empirical_k_lower(alpha: f64, p: f64, family: &[CatalogEntry], spec: &QuadratureSpec) -> Result<RatioSample> {
    empirical_k_lower_with(alpha, p, family, Potential::RiemannLiouville, spec)
}

/// As [`empirical_k_lower`] for either potential.
pub fn empirical_k_lower_with(
    alpha: f64,
    p: f64,
    family: &[CatalogEntry],
    potential: Potential,
    spec: &QuadratureSpec,
) -> Result<RatioSample> {
    if family.is_empty() {
        return domain("empirical_k_lower: the family is empty");
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha = {alpha} must lie in (0, 1)"));
    }
    if !(p > 1.0 && p < 1.0 / alpha) {
        return domain(format!("p = {p} must lie in (1, {})", 1.0 / alpha));
    }
    let mut best: Option<RatioSample> = None;
    for entry in family {
        match potential_ratio(entry, alpha, p, potential, spec) {
            Ok(s) => {
                if best.as_ref().is_none_or(|b| !(s.ratio <= b.ratio)) {
                    best = Some(s);
                }
            }
            Err(Error::Divergent(_)) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| Error::Divergent(format!("every family member diverges at p = {p}")))
}

/// [`empirical_k_lower_with`] on each grid point, computed in parallel and sorted by `p`.
pub fn ratio_sweep(
    alpha: f64,
    ps: &[f64],
    family: &[CatalogEntry],
    potential: Potential,
    spec: &QuadratureSpec,
) -> Result<Vec<RatioSample>> {
    for &p in ps {
        check_sweep_point(alpha, p)?;
    }
    let mut out: Vec<RatioSample> = ps
        .par_iter()
        .map(|&p| empirical_k_lower_with(alpha, p, family, potential, spec))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.p.total_cmp(&b.p));
    Ok(out)
}

/// Compares every sample with `k_upper(alpha, 1, p, s)`.
pub fn envelope_reports(samples: &[RatioSample], alpha: f64, s: f64) -> Result<Vec<BracketReport>> {
    samples
        .iter()
        .map(|x| {
            let upper = k_upper(alpha, 1, x.p, s)?;
            Ok(BracketReport::new("envelope", x.ratio, 0.0, upper, BRACKET_SLACK)
                .with("alpha", alpha)
                .with("p", x.p)
                .with("q", x.q))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{make_f0, make_h_delta, make_indicator};

    fn sample(p: f64, ratio: f64) -> RatioSample {
        RatioSample { p, q: 0.0, ratio, witness: "t".into() }
    }

    #[test]
    fn slope_of_exact_power_law() {
        let s: Vec<_> = Endpoint::One
            .geometric_grid(3..=8)
            .into_iter()
            .map(|p| sample(p, 2.0 * (p - 1.0).powf(-0.5)))
            .collect();
        let fit = fit_blowup(&s, Endpoint::One).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.predict(1e-4) - 200.0).abs() < 1e-9);
        let flat: Vec<_> = s.iter().map(|x| sample(x.p, 3.0)).collect();
        assert!(blowup_slope(&flat, Endpoint::One).unwrap().abs() < 1e-12);
        assert!(matches!(blowup_slope(&s[..4], Endpoint::One), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn inverse_alpha_grid() {
        let g = Endpoint::InverseAlpha(0.5).geometric_grid([1, 2]);
        assert_eq!(g, vec![1.0, 1.5]);
        assert_eq!(Endpoint::InverseAlpha(0.5).distance(1.5), 0.25);
    }

    #[test]
    fn report_tolerance() {
        assert!(BracketReport::new("t", 1.00005, 0.0, 1.0, 1e-4).passed);
        assert!(!BracketReport::new("t", 1.0002, 0.0, 1.0, 1e-4).passed);
        assert!(BracketReport::new("t", 0.0, 0.0, 0.0, 1e-4).passed);
        assert!(!BracketReport::new("t", f64::NAN, 0.0, 1.0, 1e-4).passed);
    }

    #[test]
    fn k_lower_takes_family_maximum_and_skips_divergent_members() {
        let s = QuadratureSpec::default();
        let fam = vec![make_f0(), make_indicator(0.2, 0.7).unwrap()];
        let best = empirical_k_lower(0.5, 1.5, &fam, &s).unwrap();
        let each: Vec<f64> = fam
            .iter()
            .map(|e| potential_ratio(e, 0.5, 1.5, Potential::RiemannLiouville, &s).unwrap().ratio)
            .collect();
        assert_eq!(best.ratio, each[0].max(each[1]));
        assert!((best.q - 6.0).abs() < 1e-12);
        let h = vec![make_h_delta(0.1, 0.5).unwrap()];
        assert!(empirical_k_lower(0.5, 1.5, &h, &s).is_ok());
        assert!(empirical_k_lower(0.5, 1.5, &[], &s).is_err());
        assert!(empirical_k_lower(0.5, 2.5, &fam, &s).is_err());
    }

    #[test]
    fn sweep_refuses_points_near_the_ends() {
        let s = QuadratureSpec::default();
        let fam = vec![make_f0()];
        assert!(ratio_sweep(0.5, &[1.0005], &fam, Potential::RiemannLiouville, &s).is_err());
        let out = ratio_sweep(0.5, &[1.5, 1.2], &fam, Potential::RiemannLiouville, &s).unwrap();
        assert_eq!(out[0].p, 1.2);
    }
}
