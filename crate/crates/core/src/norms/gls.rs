//! Grand Lebesgue norms `sup_p |f|_p / psi(p)` and their psi functions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::lp_norm;
use crate::error::{domain, Error, Result};
use crate::funcspace::ScalarFunction;
use crate::quadrature::QuadratureSpec;

/// Distance kept from the ends of the psi support during maximization.
const CLIP: f64 = 1e-4;
/// Upper end of the search when the support is unbounded.
const UNBOUNDED_CAP: f64 = 64.0;
const COARSE: usize = 32;
const DENSE: usize = 256;

type PsiRule = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A positive function on the open interval `(s1, s2)`, memoized by argument.
#[derive(Clone)]
pub struct PsiFunction {
    s1: f64,
    s2: f64,
    rule: PsiRule,
    memo: Arc<Mutex<HashMap<u64, f64>>>,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFunction").field("s1", &self.s1).field("s2", &self.s2).finish_non_exhaustive()
    }
}

impl PsiFunction {
    /// Wraps `rule` on `(s1, s2)` with `1 <= s1 < s2 <= inf`.
    pub fn from_fn(s1: f64, s2: f64, rule: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Result<Self> {
        if !(s1 >= 1.0 && s1 < s2) || s1.is_infinite() || s2.is_nan() {
            return domain(format!("psi support ({s1}, {s2}) must satisfy 1 <= s1 < s2 <= inf"));
        }
        Ok(PsiFunction { s1, s2, rule: Arc::new(rule), memo: Arc::new(Mutex::new(HashMap::new())) })
    }

    /// The constant `c > 0` on `(s1, s2)`.
    pub fn constant(c: f64, s1: f64, s2: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return domain(format!("psi constant {c} must be finite and positive"));
        }
        Self::from_fn(s1, s2, move |_| Ok(c))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.s1, self.s2)
    }

    /// `psi(p)` for `p` inside the open support. Infinite values are allowed; zero,
    /// negative and NaN values are errors.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(p > self.s1 && p < self.s2) {
            return domain(format!("p = {p} lies outside the psi support ({}, {})", self.s1, self.s2));
        }
        if let Some(&v) = self.memo.lock().expect("poisoned").get(&p.to_bits()) {
            return Ok(v);
        }
        let v = (self.rule)(p)?;
        if !(v > 0.0) {
            return domain(format!("psi({p}) = {v} is not positive"));
        }
        self.memo.lock().expect("poisoned").insert(p.to_bits(), v);
        Ok(v)
    }

    /// `c psi` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return domain(format!("psi scale {c} must be finite and positive"));
        }
        let base = self.clone();
        Self::from_fn(self.s1, self.s2, move |p| Ok(c * base.eval(p)?))
    }

    /// Clipped search interval inside the support.
    fn search_interval(&self) -> (f64, f64) {
        let hi = if self.s2.is_finite() { self.s2 - CLIP } else { self.s1 + UNBOUNDED_CAP };
        (self.s1 + CLIP, hi)
    }
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// True when the sequence rises and then falls (plateaus allowed).
fn is_unimodal(v: &[f64]) -> bool {
    let mut falling = false;
    for w in v.windows(2) {
        if w[1] < w[0] {
            falling = true;
        } else if w[1] > w[0] && falling {
            return false;
        }
    }
    true
}

fn golden_max(g: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    for _ in 0..80 {
        if (b - a) <= 1e-10 * (a.abs() + b.abs()) {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d)?;
        }
    }
    Ok(if gc >= gd { (c, gc) } else { (d, gd) })
}

/// `sup g` over `[a, b]` by a log grid refined with golden-section search; falls back
/// to a dense grid when the coarse samples are not unimodal. Returns `(argmax, max)`.
fn maximize(g: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let mut grid = log_grid(a, b, COARSE);
    let mut vals = grid.iter().map(|&p| g(p)).collect::<Result<Vec<f64>>>()?;
    if vals.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite(f64::NAN));
    }
    if let Some(i) = vals.iter().position(|v| *v == f64::INFINITY) {
        return Ok((grid[i], f64::INFINITY));
    }
    if !is_unimodal(&vals) {
        grid = log_grid(a, b, DENSE);
        vals = grid.iter().map(|&p| g(p)).collect::<Result<Vec<f64>>>()?;
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return if vals[i].is_nan() { Err(Error::NonFinite(f64::NAN)) } else { Ok((grid[i], f64::INFINITY)) };
        }
    }
    let i = (0..vals.len()).fold(0, |m, k| if vals[k] > vals[m] { k } else { m });
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (x, v) = golden_max(g, lo, hi)?;
    Ok(if v > vals[i] { (x, v) } else { (grid[i], vals[i]) })
}

/// `sup_p g(p) / psi(p)` over the clipped support of `psi`, with its maximizer.
pub fn gls_sup(g: &dyn Fn(f64) -> Result<f64>, psi: &PsiFunction) -> Result<(f64, f64)> {
    let (a, b) = psi.search_interval();
    maximize(&|p| Ok(g(p)? / psi.eval(p)?), a, b)
}

/// `|f|_{G psi} = sup_p |f|_p / psi(p)`.
pub fn gls_norm(f: &ScalarFunction, psi: &PsiFunction, spec: &QuadratureSpec) -> Result<f64> {
    if f.is_identically_zero() {
        return Ok(0.0);
    }
    Ok(gls_sup(&|p| lp_norm(f, p, spec), psi)?.1)
}

/// `phi(delta) = sup_p delta^(1/p) / psi(p)`. A maximum found at a clipped end is
/// extrapolated linearly to the end of the support.
pub fn fundamental_function(psi: &PsiFunction, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return domain(format!("delta = {delta} must be finite and positive"));
    }
    let g = |p: f64| Ok(delta.powf(1.0 / p) / psi.eval(p)?);
    let (a, b) = psi.search_interval();
    let (x, v) = maximize(&g, a, b)?;
    let end = if x <= a {
        Some((a, a + CLIP))
    } else if x >= b && psi.s2.is_finite() {
        Some((b, b - CLIP))
    } else {
        None
    };
    if let Some((e, inner)) = end {
        let w = g(inner)?;
        let extrapolated = 2.0 * g(e)? - w;
        if extrapolated > v {
            return Ok(extrapolated);
        }
    }
    Ok(v)
}

/// `p -> |f|_p` on `(s1, s2)`; an error if the norm is zero or infinite inside the support.
pub fn natural_psi(f: &ScalarFunction, s1: f64, s2: f64, spec: &QuadratureSpec) -> Result<PsiFunction> {
    if f.is_identically_zero() {
        return domain("the zero function has no natural psi");
    }
    let g = f.clone();
    let sp = *spec;
    let psi = PsiFunction::from_fn(s1, s2, move |p| {
        let v = lp_norm(&g, p, &sp)?;
        if !v.is_finite() {
            return Err(Error::Divergent(format!("|f|_{p} is infinite")));
        }
        Ok(v)
    })?;
    let (a, b) = psi.search_interval();
    for p in [a, (a * b).sqrt(), b] {
        psi.eval(p)?;
    }
    Ok(psi)
}
