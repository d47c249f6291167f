//! Text forms of test functions and parameter grids.
//!
//! Function specs: `f0`, `indicator:h1,h2` (`h2` may be `inf`), `g_h:h`,
//! `h_delta:delta[,alpha]`, `f0+h_delta:delta[,alpha]`, `power_alpha:a`,
//! `const:c`, `vs:<path>`, and `c*<spec>` for a scalar multiple.
//!
//! Grids: `start:stop:count[:linear|log|geometric]`, a comma-separated list, or
//! a single number. The geometric spacing approaches `stop` with halving
//! distances, `x_k = stop - (stop - start) 2^-k`, and never reaches it.

use std::path::PathBuf;

use crate::error::{domain, Error, Result};
use crate::funcspace::{
    make_constant, make_f0, make_f0_plus_h_delta, make_g_h, make_h_delta, make_indicator, make_power_alpha,
    make_very_simple, CatalogEntry, VerySimpleFunction,
};

/// A parsed, not yet constructed, test function.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    F0,
    Indicator { h1: f64, h2: f64 },
    GH { h: f64 },
    HDelta { delta: f64, alpha: Option<f64> },
    F0PlusHDelta { delta: f64, alpha: Option<f64> },
    PowerAlpha { alpha: f64 },
    Constant { c: f64 },
    VsFile(PathBuf),
    Scaled { factor: f64, base: Box<FunctionSpec> },
}

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

/// A finite number, or `inf` when `allow_inf` is set.
fn number(text: &str, what: &str, allow_inf: bool) -> Result<f64> {
    let t = text.trim();
    let v: f64 = match t {
        "inf" | "+inf" | "infinity" if allow_inf => return Ok(f64::INFINITY),
        _ => t.parse().map_err(|_| Error::Parse(format!("{what}: `{t}` is not a number")))?,
    };
    if !v.is_finite() {
        return parse_err(format!("{what}: `{t}` must be finite"));
    }
    Ok(v)
}

fn args<'a>(body: &'a str, name: &str, min: usize, max: usize) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() < min || parts.len() > max {
        let want = if min == max { format!("{min}") } else { format!("{min} to {max}") };
        return parse_err(format!("{name}: expected {want} argument(s), got {}", parts.len()));
    }
    Ok(parts)
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return parse_err("empty function spec");
        }
        if let Some(path) = text.strip_prefix("vs:") {
            if path.is_empty() {
                return parse_err("vs: missing file path");
            }
            return Ok(FunctionSpec::VsFile(PathBuf::from(path)));
        }
        if let Some((factor, rest)) = text.split_once('*') {
            let factor = number(factor, "scale factor", false)?;
            let base = FunctionSpec::parse(rest)?;
            return Ok(FunctionSpec::Scaled { factor, base: Box::new(base) });
        }
        let (name, body) = match text.split_once(':') {
            Some((n, b)) => (n, Some(b)),
            None => (text, None),
        };
        let need = || body.ok_or_else(|| Error::Parse(format!("{name}: missing `:` arguments")));
        let optional_alpha = |parts: &[&str]| -> Result<Option<f64>> {
            parts.get(1).map(|a| number(a, "alpha", false)).transpose()
        };
        match name {
            "f0" => match body {
                None => Ok(FunctionSpec::F0),
                Some(_) => parse_err("f0 takes no arguments"),
            },
            "indicator" => {
                let p = args(need()?, name, 2, 2)?;
                Ok(FunctionSpec::Indicator { h1: number(p[0], "h1", false)?, h2: number(p[1], "h2", true)? })
            }
            "g_h" => {
                let p = args(need()?, name, 1, 1)?;
                Ok(FunctionSpec::GH { h: number(p[0], "h", false)? })
            }
            "h_delta" => {
                let p = args(need()?, name, 1, 2)?;
                Ok(FunctionSpec::HDelta { delta: number(p[0], "delta", false)?, alpha: optional_alpha(&p)? })
            }
            "f0+h_delta" => {
                let p = args(need()?, name, 1, 2)?;
                Ok(FunctionSpec::F0PlusHDelta { delta: number(p[0], "delta", false)?, alpha: optional_alpha(&p)? })
            }
            "power_alpha" => {
                let p = args(need()?, name, 1, 1)?;
                Ok(FunctionSpec::PowerAlpha { alpha: number(p[0], "alpha", false)? })
            }
            "const" => {
                let p = args(need()?, name, 1, 1)?;
                Ok(FunctionSpec::Constant { c: number(p[0], "c", false)? })
            }
            other => parse_err(format!("unknown function `{other}`")),
        }
    }

    /// Builds the catalog entry. `alpha` supplies the order for `h_delta` when the
    /// spec does not carry one; `vs:` specs read their file here.
    pub fn build(&self, alpha: Option<f64>) -> Result<CatalogEntry> {
        let order = |own: Option<f64>| {
            own.or(alpha).ok_or_else(|| Error::Domain("h_delta needs an order alpha".into()))
        };
        match self {
            FunctionSpec::F0 => Ok(make_f0()),
            FunctionSpec::Indicator { h1, h2 } => make_indicator(*h1, *h2),
            FunctionSpec::GH { h } => make_g_h(*h),
            FunctionSpec::HDelta { delta, alpha: a } => make_h_delta(*delta, order(*a)?),
            FunctionSpec::F0PlusHDelta { delta, alpha: a } => make_f0_plus_h_delta(*delta, order(*a)?),
            FunctionSpec::PowerAlpha { alpha } => make_power_alpha(*alpha),
            FunctionSpec::Constant { c } => make_constant(*c),
            FunctionSpec::VsFile(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                make_very_simple(VerySimpleFunction::parse(&text)?)
            }
            FunctionSpec::Scaled { factor, base } => Ok(base.build(alpha)?.scaled(*factor)),
        }
    }
}

/// Point placement of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
    Geometric,
}

/// A list of parameter values.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    Range { start: f64, stop: f64, count: usize, spacing: Spacing },
    List(Vec<f64>),
}

/// Largest number of points a grid may hold.
pub const MAX_GRID_POINTS: usize = 100_000;

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return parse_err("empty grid");
        }
        if !text.contains(':') {
            let values = text.split(',').map(|t| number(t, "grid value", false)).collect::<Result<Vec<f64>>>()?;
            if values.len() > MAX_GRID_POINTS {
                return parse_err(format!("grid has more than {MAX_GRID_POINTS} points"));
            }
            return Ok(GridSpec::List(values));
        }
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return parse_err(format!("grid `{text}`: expected start:stop:count[:spacing]"));
        }
        let start = number(parts[0], "grid start", false)?;
        let stop = number(parts[1], "grid stop", false)?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("grid count `{}` is not a positive integer", parts[2].trim())))?;
        if count == 0 || count > MAX_GRID_POINTS {
            return parse_err(format!("grid count {count} must lie in 1..={MAX_GRID_POINTS}"));
        }
        let spacing = match parts.get(3).map(|s| s.trim()) {
            None | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some("geometric") => Spacing::Geometric,
            Some(other) => return parse_err(format!("unknown grid spacing `{other}`")),
        };
        if spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
            return parse_err("log grid needs positive start and stop");
        }
        Ok(GridSpec::Range { start, stop, count, spacing })
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range { start, stop, count, spacing } => {
                let (a, b, n) = (*start, *stop, *count);
                if n == 1 {
                    return vec![a];
                }
                let t = |k: usize| k as f64 / (n - 1) as f64;
                (0..n)
                    .map(|k| match spacing {
                        Spacing::Linear if k == n - 1 => b,
                        Spacing::Linear => (a * (n - 1 - k) as f64 + b * k as f64) / (n - 1) as f64,
                        Spacing::Log if k == n - 1 => b,
                        Spacing::Log => (a.ln() + (b.ln() - a.ln()) * t(k)).exp(),
                        Spacing::Geometric => b - (b - a) * 0.5f64.powi(k as i32),
                    })
                    .collect()
            }
        }
    }
}

/// Checks that every grid point satisfies `ok`, naming the first that does not.
pub fn check_grid(points: &[f64], what: &str, ok: impl Fn(f64) -> bool) -> Result<()> {
    match points.iter().find(|&&v| !ok(v)) {
        Some(v) => domain(format!("{what}: grid value {v} is out of range")),
        None => Ok(()),
    }
}
