//! Function objects on the half-line and the catalog of test functions.
//!
//! A [`ScalarFunction`] is evaluated at a [`Loc`], a point written as an anchor
//! plus a small offset. Operators anchor their quadrature nodes at breakpoints
//! (jumps, singular points, the evaluation point), so distances such as `x - h`
//! stay exact even when `x` and `h` agree to many digits.

mod catalog;
mod very_simple;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

pub use catalog::{
    make_constant, make_f0, make_f0_plus_h_delta, make_g_h, make_h_delta, make_indicator, make_power_alpha,
    make_very_simple, CatalogEntry, CatalogKind, KnownTransform,
};
pub use very_simple::{vs_lp_norm, VerySimpleFunction};

use crate::error::{domain, Error, Result};

/// A point `anchor + offset`, kept unsummed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Loc {
    pub anchor: f64,
    pub offset: f64,
}

impl Loc {
    pub fn new(anchor: f64, offset: f64) -> Self {
        Loc { anchor, offset }
    }

    pub fn at(x: f64) -> Self {
        Loc { anchor: x, offset: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.anchor + self.offset
    }

    /// Signed distance `self - c`.
    pub fn minus(&self, c: f64) -> f64 {
        (self.anchor - c) + self.offset
    }

    /// Signed distance `self - other`.
    pub fn minus_loc(&self, other: &Loc) -> f64 {
        (self.anchor - other.anchor) + (self.offset - other.offset)
    }

    pub fn shifted(&self, by: f64) -> Self {
        Loc { anchor: self.anchor, offset: self.offset + by }
    }
}

impl From<f64> for Loc {
    fn from(x: f64) -> Self {
        Loc::at(x)
    }
}

/// A point where the function behaves like `|x - at|^exponent` (negative: blow-up,
/// positive non-integer: a kink of that order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Singularity {
    pub at: f64,
    pub exponent: f64,
}

pub type LocalRule = Arc<dyn Fn(Loc) -> f64 + Send + Sync>;
/// `(x, s) -> f(x) - f(x - s)`, evaluated without cancellation.
pub type IncrementRule = Arc<dyn Fn(Loc, f64) -> f64 + Send + Sync>;

/// A real function on `(lo, hi)`, extended by zero outside its support.
#[derive(Clone)]
pub struct ScalarFunction {
    domain: (f64, f64),
    support: (f64, f64),
    rule: LocalRule,
    increment: Option<IncrementRule>,
    singularities: Vec<Singularity>,
    jumps: Vec<f64>,
    decay: Option<f64>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("domain", &self.domain)
            .field("support", &self.support)
            .field("singularities", &self.singularities)
            .field("jumps", &self.jumps)
            .field("decay", &self.decay)
            .finish()
    }
}

impl ScalarFunction {
    /// A function given by a rule in `x` on the domain `(lo, hi)`.
    pub fn new(lo: f64, hi: f64, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::with_local_rule(lo, hi, move |x: Loc| rule(x.value()))
    }

    /// A function given by a rule that receives the anchored point.
    pub fn with_local_rule(lo: f64, hi: f64, rule: impl Fn(Loc) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if !(lo.is_finite() && lo < hi) || hi.is_nan() {
            return domain(format!("function domain ({lo}, {hi}) must satisfy finite lo < hi"));
        }
        Ok(ScalarFunction {
            domain: (lo, hi),
            support: (lo, hi),
            rule: Arc::new(rule),
            increment: None,
            singularities: Vec::new(),
            jumps: Vec::new(),
            decay: None,
        })
    }

    /// The zero function on `(lo, hi)`.
    pub fn zero(lo: f64, hi: f64) -> Result<Self> {
        let mut f = Self::new(lo, hi, |_| 0.0)?;
        f.support = (lo, lo);
        Ok(f)
    }

    /// Restricts the support to `(lo, hi)`; the function is zero outside it.
    pub fn with_support(mut self, lo: f64, hi: f64) -> Result<Self> {
        let lo = lo.max(self.domain.0);
        let hi = hi.min(self.domain.1);
        if !(lo <= hi) {
            return domain(format!("support ({lo}, {hi}) is empty or outside the domain"));
        }
        self.support = (lo, hi);
        Ok(self)
    }

    pub fn with_singularity(mut self, at: f64, exponent: f64) -> Self {
        if let Some(s) = self.singularities.iter_mut().find(|s| s.at == at) {
            s.exponent = s.exponent.min(exponent);
        } else {
            self.singularities.push(Singularity { at, exponent });
            self.singularities.sort_by(|a, b| a.at.total_cmp(&b.at));
        }
        self
    }

    pub fn with_jump(mut self, at: f64) -> Self {
        if !self.jumps.contains(&at) {
            self.jumps.push(at);
            self.jumps.sort_by(f64::total_cmp);
        }
        self
    }

    /// Declares `f(x) ~ x^decay` as `x -> inf`.
    pub fn with_decay(mut self, decay: f64) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn with_increment(mut self, inc: impl Fn(Loc, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.increment = Some(Arc::new(inc));
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn decay(&self) -> Option<f64> {
        self.decay
    }

    pub fn has_bounded_support(&self) -> bool {
        self.support.1.is_finite()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.support.0 >= self.support.1
    }

    /// Exponent declared at `c`, or `SMOOTH` when the function is regular there.
    pub fn exponent_at(&self, c: f64) -> f64 {
        self.singularities
            .iter()
            .filter(|s| s.at == c)
            .map(|s| s.exponent)
            .fold(f64::INFINITY, f64::min)
    }

    /// Every annotated point, including the support ends.
    fn marks(&self) -> impl Iterator<Item = f64> + '_ {
        [self.support.0, self.support.1]
            .into_iter()
            .chain(self.jumps.iter().copied())
            .chain(self.singularities.iter().map(|s| s.at))
            .filter(|c| c.is_finite())
    }

    /// Sorted breakpoints strictly inside `(lo, hi)`: support ends, jumps and singular points.
    pub fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self.marks().filter(|&c| c > lo && c < hi).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Re-anchors a point that lies within a few ulps of an annotated point onto it.
    pub fn snap(&self, x: Loc) -> Loc {
        for c in self.marks() {
            if x.anchor != c && (x.anchor - c).abs() <= 4.0 * f64::EPSILON * c.abs() {
                return Loc::new(c, x.offset + (x.anchor - c));
            }
        }
        x
    }

    fn inside_support(&self, x: &Loc) -> bool {
        x.minus(self.support.0) > 0.0 && (self.support.1 == f64::INFINITY || x.minus(self.support.1) < 0.0)
    }

    /// Value at an anchored point; zero outside the support.
    pub fn value_at(&self, x: Loc) -> f64 {
        let x = self.snap(x);
        if !self.inside_support(&x) {
            return 0.0;
        }
        (self.rule)(x)
    }

    /// `f(x) - f(x - s)`.
    pub fn increment(&self, x: Loc, s: f64) -> f64 {
        let x = self.snap(x);
        match &self.increment {
            Some(inc) => inc(x, s),
            None => self.value_at(x) - self.value_at(x.shifted(-s)),
        }
    }

    /// `f(x)`; zero outside the domain, an error at a declared pole.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return domain("evaluate: x is NaN");
        }
        if self.singularities.iter().any(|s| s.at == x && s.exponent < 0.0) {
            return Err(Error::SingularPoint(x));
        }
        Ok(self.value_at(Loc::at(x)))
    }

    /// A function with the same domain, support and annotations but a different rule.
    pub fn with_same_annotations(&self, rule: impl Fn(Loc) -> f64 + Send + Sync + 'static) -> ScalarFunction {
        let mut out = self.clone();
        out.rule = Arc::new(rule);
        out.increment = None;
        out
    }

    /// Replaces the domain's upper end and the support (used for operator outputs,
    /// which are nonzero beyond the input's support).
    pub fn with_domain_and_support(mut self, hi: f64, support: (f64, f64)) -> Result<Self> {
        if !(hi > self.domain.0) {
            return domain(format!("domain end {hi} must exceed {}", self.domain.0));
        }
        self.domain.1 = hi;
        self.support = (self.domain.0, hi);
        self.with_support(support.0, support.1)
    }

    /// Drops every annotation (used before re-annotating an operator output).
    pub fn without_annotations(mut self) -> Self {
        self.singularities.clear();
        self.jumps.clear();
        self.increment = None;
        self.decay = None;
        self
    }

    /// `c f`.
    pub fn scale(&self, c: f64) -> ScalarFunction {
        let rule = self.rule.clone();
        let mut out = self.clone();
        out.rule = Arc::new(move |x| c * rule(x));
        out.increment = self.increment.clone().map(|inc| -> IncrementRule { Arc::new(move |x, s| c * inc(x, s)) });
        if c == 0.0 {
            out.support = (self.domain.0, self.domain.0);
        }
        out
    }

    /// `f + g`; both must share the lower end of the domain.
    pub fn sum(&self, other: &ScalarFunction) -> Result<ScalarFunction> {
        if self.domain.0 != other.domain.0 {
            return domain("sum: functions must share the lower domain end");
        }
        if self.is_identically_zero() {
            return Ok(other.clone());
        }
        if other.is_identically_zero() {
            return Ok(self.clone());
        }
        let (f, g) = (self.clone(), other.clone());
        let (f2, g2) = (self.clone(), other.clone());
        let mut out = ScalarFunction::with_local_rule(
            self.domain.0,
            self.domain.1.max(other.domain.1),
            move |x| f.value_at(x) + g.value_at(x),
        )?;
        out.support = (self.support.0.min(other.support.0), self.support.1.max(other.support.1));
        if self.increment.is_some() || other.increment.is_some() {
            out.increment = Some(Arc::new(move |x, s| f2.increment(x, s) + g2.increment(x, s)));
        }
        for s in self.singularities.iter().chain(other.singularities.iter()) {
            out = out.with_singularity(s.at, s.exponent);
        }
        for &j in self.jumps.iter().chain(other.jumps.iter()) {
            out = out.with_jump(j);
        }
        out.decay = [self, other]
            .iter()
            .filter(|h| !h.has_bounded_support())
            .filter_map(|h| h.decay)
            .reduce(f64::max);
        Ok(out)
    }

    /// Caches values by evaluation point; useful when the same nodes are visited repeatedly.
    pub fn memoized(&self) -> ScalarFunction {
        const LIMIT: usize = 1 << 20;
        let cache: Arc<Mutex<HashMap<(u64, u64), f64>>> = Arc::new(Mutex::new(HashMap::new()));
        let rule = self.rule.clone();
        let mut out = self.clone();
        out.rule = Arc::new(move |x: Loc| {
            let key = (x.anchor.to_bits(), x.offset.to_bits());
            if let Some(v) = cache.lock().expect("cache poisoned").get(&key) {
                return *v;
            }
            let v = rule(x);
            let mut guard = cache.lock().expect("cache poisoned");
            if guard.len() < LIMIT {
                guard.insert(key, v);
            }
            v
        });
        out
    }

    /// Samples the function off its annotated points and reports the first non-finite value.
    pub fn check_annotations(&self, samples: usize) -> Result<()> {
        let (lo, hi) = self.support;
        if lo >= hi {
            return Ok(());
        }
        let top = if hi.is_finite() { hi } else { lo + 64.0 };
        for k in 1..samples {
            let x = lo + (top - lo) * (k as f64 + 0.123) / samples as f64;
            let v = self.value_at(Loc::at(x));
            if !v.is_finite() {
                return Err(Error::NonFinite(x));
            }
        }
        Ok(())
    }
}

/// A factorable function of two variables, `F(x, y) = g1(x) g2(y)`.
#[derive(Clone, Debug)]
pub struct TensorFunction {
    pub g1: ScalarFunction,
    pub g2: ScalarFunction,
}

impl TensorFunction {
    pub fn new(g1: ScalarFunction, g2: ScalarFunction) -> Self {
        TensorFunction { g1, g2 }
    }

    pub fn value_at(&self, x: Loc, y: Loc) -> f64 {
        let a = self.g1.value_at(x);
        if a == 0.0 {
            return 0.0;
        }
        a * self.g2.value_at(y)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.g1.evaluate(x)? * self.g2.evaluate(y)?)
    }
}
