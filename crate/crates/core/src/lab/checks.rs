//! Named checks, each returning a [`BracketReport`].

use rayon::prelude::*;

use super::{fit_power_law, input_norm_fn, on_half_line, potential_norm_fn, BracketReport, Potential, SlopeFit};
use crate::constants::{sobolev_q, transported_psi, weighted_bracket};
use crate::error::{domain, Error, Result};
use crate::funcspace::{make_g_h, make_power_alpha, CatalogEntry, KnownTransform, ScalarFunction, TensorFunction, VerySimpleFunction};
use crate::norms::{besov_norm, fundamental_function, gls_norm, gls_sup, lp_norm, mixed_norm_iterated, PsiFunction};
use crate::norms::besov_natural_psi;
use crate::operators::{
    derivative_function, indicator_derivative_function, marchaud_derivative, marchaud_function, rl_integral,
    rl_integral_function, step_derivative_function, weighted_potential_function,
};
use crate::quadrature::QuadratureSpec;
use crate::special::gamma;

/// Relative slack on two-sided brackets, absorbing quadrature error.
pub const BRACKET_SLACK: f64 = 1e-4;
/// Maximal-function constant used with the upper envelope.
pub const ENVELOPE_S: f64 = 10.0;
const GLS_SLACK: f64 = 1e-6;
const BESOV_SLACK: f64 = 1e-3;
const FACTOR_SLACK: f64 = 1e-6;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha = {alpha} must lie in (0, 1)"));
    }
    Ok(())
}

fn check_p(alpha: f64, p: f64) -> Result<()> {
    check_alpha(alpha)?;
    if !(p >= 1.0 && p < 1.0 / alpha) {
        return domain(format!("p = {p} must lie in [1, {})", 1.0 / alpha));
    }
    Ok(())
}

fn check_blocks(h1: f64, h2: f64) -> Result<()> {
    if !(h1 > 0.0 && h1 < h2 && h2 < 1.0) {
        return domain(format!("need 0 < h1 < h2 < 1, got h1 = {h1}, h2 = {h2}"));
    }
    Ok(())
}

/// `Delta^(1/p - alpha) (1 - alpha p)^(-1/p) <= |Gamma(1 - alpha) D^alpha I(h1, h2)|_p <= 3 (same)` on `(0, 1)`.
pub fn verify_indicator_bracket(alpha: f64, p: f64, h1: f64, h2: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    check_p(alpha, p)?;
    check_blocks(h1, h2)?;
    let d = h2 - h1;
    let g = indicator_derivative_function(h1, h2, alpha, 1.0)?;
    let quantity = gamma(1.0 - alpha)? * lp_norm(&g, p, spec)?;
    let lower = d.powf(1.0 / p - alpha) * (1.0 - alpha * p).powf(-1.0 / p);
    Ok(BracketReport::new("indicator-bracket", quantity, lower, 3.0 * lower, BRACKET_SLACK)
        .with("alpha", alpha)
        .with("p", p)
        .with("h1", h1)
        .with("h2", h2))
}

/// The 36 cases `alpha in {0.2, 0.4, 0.6, 0.8}`, `p in {1, midpoint, 1/alpha - 0.05}`,
/// `(h1, h2) in {(0.1, 0.3), (0.2, 0.8), (0.45, 0.55)}` as `(alpha, p, h1, h2)`.
pub fn indicator_bracket_grid() -> Vec<(f64, f64, f64, f64)> {
    let mut out = Vec::with_capacity(36);
    for &alpha in &[0.2, 0.4, 0.6, 0.8] {
        let end = 1.0 / alpha;
        for &p in &[1.0, 0.5 * (1.0 + end), end - 0.05] {
            for &(h1, h2) in &[(0.1, 0.3), (0.2, 0.8), (0.45, 0.55)] {
                out.push((alpha, p, h1, h2));
            }
        }
    }
    out
}

/// [`verify_indicator_bracket`] over [`indicator_bracket_grid`], in grid order.
pub fn verify_indicator_grid(spec: &QuadratureSpec) -> Result<Vec<BracketReport>> {
    indicator_bracket_grid()
        .par_iter()
        .map(|&(a, p, h1, h2)| verify_indicator_bracket(a, p, h1, h2, spec))
        .collect()
}

/// `|Gamma(1 - alpha) D^alpha I(h1, h2)|_{G theta} <= 3 Delta^-alpha phi(G zeta, Delta)` with
/// `theta(p) = (1 - alpha p)^(-1/p) zeta(p)`.
pub fn verify_gls_indicator(
    alpha: f64,
    h1: f64,
    h2: f64,
    zeta: &PsiFunction,
    spec: &QuadratureSpec,
) -> Result<BracketReport> {
    check_alpha(alpha)?;
    check_blocks(h1, h2)?;
    let (s1, s2) = zeta.support();
    if !(s1 >= 1.0 && s2 <= 1.0 / alpha) {
        return domain(format!("zeta support ({s1}, {s2}) must lie inside (1, {})", 1.0 / alpha));
    }
    let d = h2 - h1;
    let z = zeta.clone();
    let theta = PsiFunction::from_fn(s1, s2, move |p| Ok((1.0 - alpha * p).powf(-1.0 / p) * z.eval(p)?))?;
    let g = indicator_derivative_function(h1, h2, alpha, 1.0)?.scale(gamma(1.0 - alpha)?);
    let lhs = gls_norm(&g, &theta, spec)?;
    let rhs = 3.0 * d.powf(-alpha) * fundamental_function(zeta, d)?;
    Ok(BracketReport::new("gls-indicator", lhs, 0.0, rhs, GLS_SLACK)
        .with("alpha", alpha)
        .with("h1", h1)
        .with("h2", h2))
}

/// `|Gamma(1 - alpha) D^alpha f|_p <= 3 h^(1/p - alpha - 1) (1 - alpha p)^(-1/p) |f|_1`
/// for an equal-step function with step `h`.
pub fn verify_vs_bound(f: &VerySimpleFunction, alpha: f64, p: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    check_p(alpha, p)?;
    let Some(h) = f.step() else {
        return domain("the bound needs an equal-step function");
    };
    let blocks: Vec<_> = f.blocks().collect();
    let g = step_derivative_function(&blocks, alpha, f.domain_end())?;
    let quantity = if g.is_identically_zero() { 0.0 } else { gamma(1.0 - alpha)? * lp_norm(&g, p, spec)? };
    let upper = 3.0 * h.powf(1.0 / p - alpha - 1.0) * (1.0 - alpha * p).powf(-1.0 / p) * f.l1_norm();
    Ok(BracketReport::new("vs-bound", quantity, 0.0, upper, BRACKET_SLACK)
        .with("alpha", alpha)
        .with("p", p)
        .with("h", h))
}

fn check_besov_p(alpha: f64, p: f64) -> Result<()> {
    check_alpha(alpha)?;
    if !(p > 1.0 && p < 1.0 / alpha) {
        return domain(format!("p = {p} must lie in (1, {})", 1.0 / alpha));
    }
    Ok(())
}

pub fn restrict(f: &ScalarFunction, b: f64) -> Result<ScalarFunction> {
    if !(b > 0.0) {
        return domain(format!("b = {b} must be positive"));
    }
    if f.domain().1 == b {
        return Ok(f.clone());
    }
    if b > f.domain().1 {
        return domain(format!("b = {b} exceeds the domain end {}", f.domain().1));
    }
    let (s0, s1) = f.support();
    if s0 >= b {
        return ScalarFunction::zero(0.0, b);
    }
    f.clone().with_domain_and_support(b, (s0, s1.min(b)))
}

fn ratio_of(numerator: f64, f: &ScalarFunction, alpha: f64, p: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if numerator == 0.0 {
        return Ok(0.0);
    }
    let den = besov_norm(f, alpha, p, b, spec)?;
    if !den.is_finite() {
        return Err(Error::Divergent(format!("Besov norm is infinite at p = {p}")));
    }
    Ok(numerator / den)
}

/// `|D^alpha f|_p / |f|_{B(alpha, p)}` on `(0, b)`, with the Marchaud derivative.
pub fn besov_ratio(f: &ScalarFunction, alpha: f64, p: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_besov_p(alpha, p)?;
    let f = restrict(f, b)?;
    let num = if f.is_identically_zero() { 0.0 } else { lp_norm(&marchaud_function(&f, alpha, spec)?, p, spec)? };
    ratio_of(num, &f, alpha, p, b, spec)
}

/// As [`besov_ratio`] for a catalog entry, using its closed-form derivative when known.
pub fn besov_ratio_entry(entry: &CatalogEntry, alpha: f64, p: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_besov_p(alpha, p)?;
    let f = restrict(&entry.function, b)?;
    let d = match entry.known_transform() {
        Some(KnownTransform::IndicatorDerivative { h1, h2 }) => indicator_derivative_function(h1, h2, alpha, b)?,
        Some(KnownTransform::StepDerivative { blocks }) => step_derivative_function(&blocks, alpha, b)?,
        Some(KnownTransform::Annihilated { alpha: a }) if a == alpha => ScalarFunction::zero(0.0, b)?,
        _ => marchaud_function(&f, alpha, spec)?,
    };
    let num = if d.is_identically_zero() { 0.0 } else { lp_norm(&d, p, spec)? };
    ratio_of(num, &f, alpha, p, b, spec)
}

/// `besov_ratio <= 1 / Gamma(1 - alpha)` on `(0, b)`.
pub fn verify_besov_ratio(entry: &CatalogEntry, alpha: f64, p: f64, b: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    let r = besov_ratio_entry(entry, alpha, p, b, spec)?;
    Ok(BracketReport::new("besov-ratio", r, 0.0, 1.0 / gamma(1.0 - alpha)?, BESOV_SLACK)
        .with("alpha", alpha)
        .with("p", p)
        .with("b", b))
}

/// `sup_q |R_alpha f|_q / psi_K(q) <= |f|_{G psi}` with `psi_K` transported by the upper envelope.
pub fn verify_gls_sobolev(entry: &CatalogEntry, psi: &PsiFunction, alpha: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    check_alpha(alpha)?;
    let psi_k = transported_psi(psi, alpha, 1, ENVELOPE_S)?;
    let (lhs, rhs) = if entry.function.is_identically_zero() {
        (0.0, 0.0)
    } else {
        let input = input_norm_fn(entry, alpha, spec);
        let rhs = gls_sup(&*input, psi)?.1;
        let out = potential_norm_fn(entry, alpha, Potential::Riesz, spec)?;
        (gls_sup(&*out, &psi_k)?.1, rhs)
    };
    let (s1, s2) = psi.support();
    Ok(BracketReport::new("gls-sobolev", lhs, 0.0, rhs, GLS_SLACK)
        .with("alpha", alpha)
        .with("s1", s1)
        .with("s2", s2))
}

/// `|D^alpha f|_{G psi} <= 1 / Gamma(1 - alpha)` with `psi(p)` the Besov norm of `f` on `(1, beta)`.
pub fn verify_prop51(entry: &CatalogEntry, alpha: f64, beta: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    check_alpha(alpha)?;
    let d = derivative_function(entry, alpha, spec)?;
    let lhs = if d.is_identically_zero() && !entry.function.is_identically_zero() {
        0.0
    } else {
        let psi = besov_natural_psi(&entry.function, alpha, beta, spec)?;
        gls_norm(&d, &psi, spec)?
    };
    Ok(BracketReport::new("prop51", lhs, 0.0, 1.0 / gamma(1.0 - alpha)?, BESOV_SLACK)
        .with("alpha", alpha)
        .with("beta", beta))
}

fn one_dim_ratio(u: &ScalarFunction, g: &ScalarFunction, p: f64, q: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(lp_norm(u, q, spec)? / lp_norm(g, p, spec)?)
}

/// The mixed ratio `|I^(alpha, beta) g1 g2|_(q1, q2) / |g1 g2|_(p1, p2)`, by iterated
/// quadrature, against the product of the one-dimensional ratios.
pub fn verify_factorization(
    g1: &CatalogEntry,
    g2: &CatalogEntry,
    alpha: f64,
    beta: f64,
    p1: f64,
    p2: f64,
    spec: &QuadratureSpec,
) -> Result<BracketReport> {
    let q1 = sobolev_q(p1, alpha, 1)?;
    let q2 = sobolev_q(p2, beta, 1)?;
    check_alpha(alpha)?;
    check_alpha(beta)?;
    let (a, b) = (on_half_line(&g1.function)?, on_half_line(&g2.function)?);
    if a.is_identically_zero() || b.is_identically_zero() {
        return domain("factorization: both factors must be nonzero");
    }
    let (a, b) = (a.memoized(), b.memoized());
    let u1 = rl_integral_function(&a, alpha, spec)?.memoized();
    let u2 = rl_integral_function(&b, beta, spec)?.memoized();
    let num = mixed_norm_iterated(&TensorFunction::new(u1.clone(), u2.clone()), q1, q2, spec)?;
    let den = mixed_norm_iterated(&TensorFunction::new(a.clone(), b.clone()), p1, p2, spec)?;
    let product = one_dim_ratio(&u1, &a, p1, q1, spec)? * one_dim_ratio(&u2, &b, p2, q2, spec)?;
    Ok(BracketReport::new("factorization", num / den, product, product, FACTOR_SLACK)
        .with("alpha", alpha)
        .with("beta", beta)
        .with("p1", p1)
        .with("p2", p2)
        .with("q1", q1)
        .with("q2", q2))
}

/// Empirical ratios of the weighted potential on `p_grid`, one report per point.
///
/// The quantity is the family maximum of `|U f|_q / |f|_p` with `1/q = 1/p - kappa`; it
/// passes when finite. The envelope `(p - p_minus)^-kappa` is recorded in the context.
pub fn verify_weighted_bracket(
    alpha: f64,
    beta: f64,
    gamma_: f64,
    family: &[CatalogEntry],
    p_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<BracketReport>> {
    let wb = weighted_bracket(alpha, beta, gamma_)?;
    if wb.is_empty() {
        return domain(format!(
            "the interval (p_minus, p_plus] = ({}, {}] is empty for alpha = {alpha}, beta = {beta}, gamma = {gamma_}",
            wb.p_minus, wb.p_plus
        ));
    }
    if family.is_empty() {
        return domain("weighted bracket: the family is empty");
    }
    for &p in p_grid {
        if !wb.contains(p) {
            return domain(format!("p = {p} lies outside ({}, {}]", wb.p_minus, wb.p_plus));
        }
    }
    let mut out: Vec<BracketReport> = p_grid
        .par_iter()
        .map(|&p| -> Result<BracketReport> {
            let q = wb.q_of_p(p)?;
            let mut best = 0.0f64;
            for entry in family {
                let f = &entry.function;
                if f.is_identically_zero() {
                    continue;
                }
                let fp = lp_norm(f, p, spec)?;
                if !fp.is_finite() {
                    continue;
                }
                let u = weighted_potential_function(&on_half_line(f)?, alpha, beta, gamma_, spec)?;
                let r = lp_norm(&u, q, spec)? / fp;
                if !(r <= best) {
                    best = r;
                }
            }
            Ok(BracketReport::new("weighted", best, 0.0, f64::INFINITY, 0.0)
                .with("alpha", alpha)
                .with("beta", beta)
                .with("gamma", gamma_)
                .with("kappa", wb.kappa)
                .with("p", p)
                .with("q", q)
                .with("envelope", wb.envelope(p)?))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.get("p").unwrap_or(0.0).total_cmp(&b.get("p").unwrap_or(0.0)));
    Ok(out)
}

/// Power-law fit of weighted-bracket quantities against `p - p_minus`.
pub fn weighted_slope(reports: &[BracketReport], p_minus: f64) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| (r.get("p").unwrap_or(f64::NAN) - p_minus, r.quantity))
        .collect();
    fit_power_law(&pts)
}

/// Largest `|I^alpha D^alpha g_h - g_h|` over `points`, which should avoid the jump at `h`.
pub fn verify_abel_inversion(alpha: f64, h: f64, points: &[f64], tol: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    check_alpha(alpha)?;
    let g = make_g_h(h)?;
    let d = derivative_function(&g, alpha, spec)?;
    let errs: Vec<f64> = points
        .par_iter()
        .map(|&x| Ok((rl_integral(&d, alpha, x, spec)? - g.function.evaluate(x)?).abs()))
        .collect::<Result<_>>()?;
    let worst = errs.into_iter().fold(0.0, f64::max);
    Ok(BracketReport::new("abel-inversion", worst, 0.0, tol, 0.0).with("alpha", alpha).with("h", h))
}

/// Largest relative error of the Marchaud derivative of `g_h` against `(x - h)^-alpha / Gamma(1 - alpha)`
/// over `points > h`.
pub fn verify_closed_form_derivative(
    alpha: f64,
    h: f64,
    points: &[f64],
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<BracketReport> {
    check_alpha(alpha)?;
    let g = make_g_h(h)?;
    let c = 1.0 / gamma(1.0 - alpha)?;
    let errs: Vec<f64> = points
        .par_iter()
        .map(|&x| {
            if !(x > h) {
                return domain(format!("x = {x} must exceed h = {h}"));
            }
            let exact = c * (x - h).powf(-alpha);
            Ok(((marchaud_derivative(&g.function, alpha, x, spec)?.value - exact) / exact).abs())
        })
        .collect::<Result<_>>()?;
    let worst = errs.into_iter().fold(0.0, f64::max);
    Ok(BracketReport::new("closed-form-derivative", worst, 0.0, tol, 0.0).with("alpha", alpha).with("h", h))
}

/// Largest `x |D^alpha x^(alpha - 1)|` over `points`, computed by the Marchaud formula.
pub fn verify_annihilation(alpha: f64, points: &[f64], tol: f64, spec: &QuadratureSpec) -> Result<BracketReport> {
    let f = make_power_alpha(alpha)?;
    let vals: Vec<f64> = points
        .iter()
        .map(|&x| Ok(x * marchaud_derivative(&f.function, alpha, x, spec)?.value.abs()))
        .collect::<Result<_>>()?;
    let worst = vals.into_iter().fold(0.0, f64::max);
    Ok(BracketReport::new("annihilation", worst, 0.0, tol, 0.0).with("alpha", alpha))
}
