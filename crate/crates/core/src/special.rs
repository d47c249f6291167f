//! Gamma, log-gamma, Beta and the volume of the Euclidean unit ball.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function, using reflection below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("gamma: argument {x} is not finite"));
    }
    if is_pole(x) {
        return domain(format!("gamma: {x} is a pole"));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    // Small positive integers are exact factorials.
    if x == x.floor() && x <= 23.0 {
        return (1..x as u64).map(|k| k as f64).product();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// `zeta(n) - 1` for n = 2..ZETA_TERMS+2, summed directly with an Euler-Maclaurin tail.
fn zeta_minus_one() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; ZETA_TERMS];
        const M: f64 = 24.0;
        for (i, slot) in out.iter_mut().enumerate() {
            let n = (i + 2) as f64;
            let mut s = 0.0;
            for m in (2..24).rev() {
                s += (m as f64).powf(-n);
            }
            // Tail sum over m >= M by Euler-Maclaurin.
            let tail = M.powf(1.0 - n) / (n - 1.0)
                + 0.5 * M.powf(-n)
                + n * M.powf(-n - 1.0) / 12.0
                - n * (n + 1.0) * (n + 2.0) * M.powf(-n - 3.0) / 720.0
                + n * (n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0) * M.powf(-n - 5.0) / 30240.0
                - n * (n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0) * (n + 5.0) * (n + 6.0) * M.powf(-n - 7.0)
                    / 1_209_600.0;
            *slot = s + tail;
        }
        out
    })
}

const ZETA_TERMS: usize = 48;

/// `sum_{n>=2} (-1)^n (zeta(n) - 1) z^n / n` for |z| <= 1/2.
fn zeta_series(z: f64) -> f64 {
    let table = zeta_minus_one();
    let mut acc = 0.0;
    let mut zn = z * z;
    let mut sign = 1.0;
    for (i, zm1) in table.iter().enumerate() {
        let n = (i + 2) as f64;
        acc += sign * zm1 * zn / n;
        zn *= z;
        sign = -sign;
    }
    acc
}

/// Natural logarithm of the Gamma function for positive arguments.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma: argument {x} must be positive and finite"));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // ln Gamma(x) = ln Gamma(1 + x) - ln x
        return log_gamma_unchecked(1.0 + x) - x.ln();
    }
    if x < 1.5 {
        // Taylor series about 1 and 2; both keep relative accuracy near the zeros.
        let z = x - 1.0;
        return -EULER_GAMMA * z + zeta_series(z) + (z - z.ln_1p());
    }
    if x < 2.5 {
        let z = x - 2.0;
        return z * (1.0 - EULER_GAMMA) + zeta_series(z);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Beta function `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("beta: arguments ({a}, {b}) must be positive"));
    }
    Ok((log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b)).exp())
}

/// Volume of the unit ball in R^d, `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn ball_volume(d: u32) -> Result<f64> {
    if d == 0 {
        return domain("ball_volume: dimension must be at least 1");
    }
    let half = 0.5 * d as f64;
    Ok((half * PI.ln() - log_gamma_unchecked(half + 1.0)).exp())
}
