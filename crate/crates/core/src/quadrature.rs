//! Adaptive Gauss-Kronrod quadrature with algebraic endpoint grading.
//!
//! An interval `[a, b]` is cut at its midpoint and each half is integrated in
//! coordinates measured from its own endpoint, so the distance to a singular
//! endpoint never passes through a subtraction. Within a half the distance is
//! `s = m u^g` with `u` in `[0, 1]`, where the grading power `g` is chosen from
//! the declared endpoint exponent. Panels in `u` are then bisected adaptively,
//! always splitting the one with the largest error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Tolerances and limits shared by every integral in the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of panel bisections per integral.
    pub max_subdivisions: usize,
    /// Grading strength `k`; an endpoint behaving like `s^e` is mapped with `s = u^(k/(1+e))`.
    pub grading_exponent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-8,
            max_subdivisions: 1 << 14,
            grading_exponent: 3.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 0.0 && self.abs_tol >= 0.0) || !(self.rel_tol > 0.0 || self.abs_tol > 0.0) {
            return domain("quadrature: tolerances must be non-negative and not both zero");
        }
        if self.max_subdivisions == 0 {
            return domain("quadrature: max_subdivisions must be positive");
        }
        if !(self.grading_exponent >= 1.0) {
            return domain("quadrature: grading exponent must be at least 1");
        }
        Ok(())
    }

    /// Same spec with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

/// Endpoint exponent for an integrand that is smooth at that end.
pub const SMOOTH: f64 = f64::INFINITY;

/// A quadrature node, with the distances to both ends computed without cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

/// Value of an integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One 21-point Kronrod panel on `[u0, u1]`: (value, error estimate).
fn kronrod21<F: FnMut(f64) -> Result<f64>>(f: &mut F, u0: f64, u1: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (u0 + u1);
    let half = 0.5 * (u1 - u0);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut f1 = [0.0; 10];
    let mut f2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let a = f(center - dx)?;
        let b = f(center + dx)?;
        f1[j] = a;
        f2[j] = b;
        res_k += WGK[j] * (a + b);
        res_abs += WGK[j] * (a.abs() + b.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (a + b);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    half: usize,
    u0: f64,
    u1: f64,
    value: f64,
    error: f64,
    id: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn grading_power(exponent: f64, strength: f64) -> f64 {
    if exponent.is_finite() {
        (strength / (1.0 + exponent)).clamp(1.0, 60.0)
    } else {
        1.0
    }
}

fn check_exponent(e: f64, end: &str) -> Result<()> {
    if e.is_nan() {
        return domain(format!("quadrature: endpoint exponent at {end} is NaN"));
    }
    if e <= -1.0 {
        return Err(Error::Divergent(format!(
            "integrand behaves like s^{e} at the {end} endpoint"
        )));
    }
    Ok(())
}

/// Adaptive driver over a set of halves, each parametrised by `u` in `[0, 1]`.
/// `g(half, u)` returns the mapped integrand including the Jacobian.
fn adaptive<G: FnMut(usize, f64) -> Result<f64>>(mut g: G, halves: usize, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut next_id = 0usize;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for half in 0..halves {
        let mut f = |u: f64| g(half, u);
        let (value, error) = kronrod21(&mut f, 0.0, 1.0)?;
        total += value;
        total_err += error;
        heap.push(Panel { half, u0: 0.0, u1: 1.0, value, error, id: next_id });
        next_id += 1;
    }
    let mut subdivisions = 0usize;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NoConvergence { estimate: total, error: total_err });
        };
        let mid = 0.5 * (worst.u0 + worst.u1);
        if !(mid > worst.u0 && mid < worst.u1) || (worst.u1 - worst.u0) < 4.0 * f64::EPSILON * worst.u1 {
            frozen.push(worst);
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NoConvergence { estimate: total, error: total_err });
        }
        subdivisions += 1;
        let half = worst.half;
        let mut f = |u: f64| g(half, u);
        let (v1, e1) = kronrod21(&mut f, worst.u0, mid)?;
        let (v2, e2) = kronrod21(&mut f, mid, worst.u1)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { half, u0: worst.u0, u1: mid, value: v1, error: e1, id: next_id });
        heap.push(Panel { half, u0: mid, u1: worst.u1, value: v2, error: e2, id: next_id + 1 });
        next_id += 2;
    }
    // Re-sum in a fixed order so the result does not depend on heap layout.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.half.cmp(&q.half).then(p.u0.total_cmp(&q.u0)));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Estimate { value, error, subdivisions })
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// `exponents = (ea, eb)` declare that the integrand behaves like `(x - a)^ea`
/// near `a` and `(b - x)^eb` near `b`; pass [`SMOOTH`] for a regular end. An
/// exponent `<= -1` is reported as divergent.
pub fn integrate<F: Fn(Abscissa) -> f64>(
    f: F,
    a: f64,
    b: f64,
    exponents: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return domain(format!("integrate: bounds [{a}, {b}] must be finite"));
    }
    if a > b {
        return domain(format!("integrate: lower bound {a} exceeds upper bound {b}"));
    }
    check_exponent(exponents.0, "left")?;
    check_exponent(exponents.1, "right")?;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, subdivisions: 0 });
    }
    integrate_length(f, a, b - a, exponents, spec)
}

/// Integrates over `[a, a + len]` where `len` is supplied exactly by the caller.
pub fn integrate_length<F: Fn(Abscissa) -> f64>(
    f: F,
    a: f64,
    len: f64,
    exponents: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if !(len >= 0.0) || !len.is_finite() {
        return domain(format!("integrate: interval length {len} must be finite and non-negative"));
    }
    check_exponent(exponents.0, "left")?;
    check_exponent(exponents.1, "right")?;
    if len == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0, subdivisions: 0 });
    }
    let m = 0.5 * len;
    let powers = [
        grading_power(exponents.0, spec.grading_exponent),
        grading_power(exponents.1, spec.grading_exponent),
    ];
    let mapped = |half: usize, u: f64| -> Result<f64> {
        let g = powers[half];
        let (s, w) = if g == 1.0 {
            (m * u, m)
        } else {
            let ug = u.powf(g);
            (m * ug, m * g * ug / u)
        };
        if s < f64::MIN_POSITIVE || w == 0.0 {
            return Ok(0.0);
        }
        let (from_a, to_b) = if half == 0 { (s, len - s) } else { (len - s, s) };
        let x = if half == 0 { a + from_a } else { a + len - to_b };
        let v = f(Abscissa { x, from_a, to_b });
        if !v.is_finite() {
            return Err(Error::NonFinite(x));
        }
        Ok(v * w)
    };
    adaptive(mapped, 2, spec)
}

/// Integrates `f` over `[a, inf)`.
///
/// `decay_hint` is the power `d` with `f(x) ~ x^d` at infinity; it must be below
/// `-1`. The tail is mapped to a finite interval by `x = a + c (1 - t) / t`.
pub fn integrate_to_infinity<F: Fn(Abscissa) -> f64>(
    f: F,
    a: f64,
    decay_hint: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    integrate_to_infinity_with(f, a, SMOOTH, decay_hint, spec)
}

/// As [`integrate_to_infinity`], with the integrand behaving like `(x - a)^start_exponent` near `a`.
pub fn integrate_to_infinity_with<F: Fn(Abscissa) -> f64>(
    f: F,
    a: f64,
    start_exponent: f64,
    decay_hint: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if !a.is_finite() {
        return domain(format!("integrate_to_infinity: lower bound {a} must be finite"));
    }
    if decay_hint.is_nan() {
        return domain("integrate_to_infinity: decay hint is NaN");
    }
    if decay_hint >= -1.0 {
        return Err(Error::Divergent(format!(
            "integrand decays like x^{decay_hint}, which is not integrable at infinity"
        )));
    }
    let c = if a > 0.0 { a } else { 1.0 };
    // In t the integrand behaves like t^(-d-2) at t = 0.
    let t_exponent = (-decay_hint - 2.0).min(1e6);
    integrate(
        |t: Abscissa| {
            let from_a = c * t.to_b / t.x;
            let x = a + from_a;
            if !x.is_finite() {
                return 0.0;
            }
            let jac = c / (t.x * t.x);
            if jac == 0.0 || !jac.is_finite() {
                return 0.0;
            }
            let v = f(Abscissa { x, from_a, to_b: f64::INFINITY });
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        },
        0.0,
        1.0,
        (t_exponent, start_exponent),
        spec,
    )
}

/// Side toward which a graded mesh concentrates its nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradeToward {
    Left,
    Right,
}

/// Nodes `a + (b - a) (k / (n - 1))^exponent`, or the mirror image when grading toward `b`.
pub fn graded_mesh(a: f64, b: f64, n: usize, exponent: f64, toward: GradeToward) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return domain(format!("graded_mesh: need finite a < b, got [{a}, {b}]"));
    }
    if n < 2 {
        return domain("graded_mesh: need at least two nodes");
    }
    if !(exponent >= 1.0) || !exponent.is_finite() {
        return domain(format!("graded_mesh: exponent {exponent} must be at least 1"));
    }
    let len = b - a;
    let last = (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n)
        .map(|k| {
            let r = (k as f64 / last).powf(exponent);
            match toward {
                GradeToward::Left => a + len * r,
                GradeToward::Right => b - len * r,
            }
        })
        .collect();
    if toward == GradeToward::Right {
        nodes.reverse();
    }
    nodes[0] = a;
    nodes[n - 1] = b;
    for w in nodes.windows(2) {
        if !(w[1] > w[0]) {
            return domain("graded_mesh: nodes collapse in floating point; use fewer nodes or a smaller exponent");
        }
    }
    Ok(nodes)
}

/// Logarithm of `int_lo^hi exp(phi(x)) dx` for a unimodal `phi`.
///
/// The maximiser is located by an uphill search from `peak_hint` followed by
/// golden-section refinement, the range is trimmed where `phi` has fallen by 80
/// below its maximum, and the rescaled integrand `exp(phi - max)` is integrated
/// on both sides of the peak. `exponents` describe the integrand at `lo` and `hi`
/// when those ends are reached.
pub fn integrate_log_unimodal<F: Fn(f64) -> f64>(
    phi: F,
    lo: f64,
    hi: f64,
    peak_hint: f64,
    exponents: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(lo < hi) || lo.is_nan() || hi.is_nan() {
        return domain(format!("integrate_log_unimodal: empty range [{lo}, {hi}]"));
    }
    let clamp = |x: f64| x.max(lo).min(hi);
    let eval = |x: f64| {
        let v = phi(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let x0 = clamp(if peak_hint.is_finite() { peak_hint } else if lo.is_finite() { lo } else { 0.0 });

    let (xm, fm) = locate_max(&eval, lo, hi, x0);
    if fm == f64::INFINITY {
        return Err(Error::Divergent("log-integrand is unbounded".into()));
    }
    if fm == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    const DROP: f64 = 80.0;
    let scale = 1e-3 * xm.abs().max(1.0);
    let find_cut = |dir: f64| -> f64 {
        let bound = if dir < 0.0 { lo } else { hi };
        let mut h = scale;
        loop {
            let x = xm + dir * h;
            if (dir < 0.0 && x <= lo) || (dir > 0.0 && x >= hi) {
                return bound;
            }
            if eval(x) < fm - DROP {
                return x;
            }
            h *= 2.0;
            if !h.is_finite() {
                return bound;
            }
        }
    };
    let left = find_cut(-1.0);
    let right = find_cut(1.0);
    let inner = QuadratureSpec { abs_tol: 0.0, ..*spec };
    let integrand = |x: f64| {
        let v = eval(x) - fm;
        if v < -745.0 {
            0.0
        } else {
            v.exp()
        }
    };
    let mut total = 0.0;
    let mut piece = |a: f64, b: f64, ea: f64, eb: f64| -> Result<()> {
        if a.is_finite() && b.is_finite() {
            if b > a {
                total += integrate(|t| integrand(t.x), a, b, (ea, eb), &inner)?.value;
            }
        } else if b == f64::INFINITY {
            // Beyond the cut the integrand is negligible; an unbounded end means phi never fell.
            return Err(Error::Divergent("log-integrand does not decay toward +inf".into()));
        } else {
            return Err(Error::Divergent("log-integrand does not decay toward -inf".into()));
        }
        Ok(())
    };
    let ea = if left == lo { exponents.0 } else { SMOOTH };
    let eb = if right == hi { exponents.1 } else { SMOOTH };
    piece(left, xm, ea, SMOOTH)?;
    piece(xm, right, SMOOTH, eb)?;
    if !(total > 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(fm + total.ln())
}

fn locate_max<F: Fn(f64) -> f64>(eval: &F, lo: f64, hi: f64, x0: f64) -> (f64, f64) {
    let clamp = |x: f64| x.max(lo).min(hi);
    let f0 = eval(x0);
    let mut h = 1e-3 * x0.abs().max(1.0);
    // Pick the uphill direction.
    let fr = eval(clamp(x0 + h));
    let fl = eval(clamp(x0 - h));
    let dir = if fr >= fl { 1.0 } else { -1.0 };
    if f0 >= fr && f0 >= fl && f0 > f64::NEG_INFINITY {
        return golden(eval, clamp(x0 - h), clamp(x0 + h));
    }
    let mut prev = x0;
    let mut cur = clamp(x0 + dir * h);
    let mut fcur = if dir > 0.0 { fr } else { fl };
    loop {
        h *= 2.0;
        let next = clamp(cur + dir * h);
        if next == cur {
            return (cur, fcur);
        }
        let fnext = eval(next);
        if fnext < fcur {
            let (a, b) = if dir > 0.0 { (prev, next) } else { (next, prev) };
            return golden(eval, a, b);
        }
        prev = cur;
        cur = next;
        fcur = fnext;
        if !h.is_finite() {
            return (cur, fcur);
        }
    }
}

fn golden<F: Fn(f64) -> f64>(eval: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = eval(d);
        }
    }
    let candidates = [(a, eval(a)), (b, eval(b)), (c, fc), (d, fd)];
    candidates
        .into_iter()
        .fold((c, fc), |best, cand| if cand.1 > best.1 { cand } else { best })
}
