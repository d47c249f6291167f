//! Step functions `sum_k c_k I(h1(k) < x < h2(k))` on disjoint blocks.

use super::{Loc, ScalarFunction};
use crate::error::{domain, Error, Result};

/// A finite step function on disjoint open blocks.
///
/// The equal-step form (every block of length `h`) carries the exact norm
/// `h^(1/p) |c|_p`; blocks of unequal length are accepted but get only the
/// general formula `(sum |c_k|^p len_k)^(1/p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerySimpleFunction {
    step: Option<f64>,
    segments: Vec<(f64, f64)>,
    coefficients: Vec<f64>,
}

impl VerySimpleFunction {
    /// Blocks `(s_k, s_k + h)` with coefficients `c_k`.
    pub fn equal_step(h: f64, starts: Vec<f64>, coefficients: Vec<f64>) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return domain(format!("very simple function: step h = {h} must lie in (0, 1)"));
        }
        let segments = starts.iter().map(|&s| (s, s + h)).collect();
        let mut f = Self::general(segments, coefficients)?;
        f.step = Some(h);
        Ok(f)
    }

    /// Blocks of arbitrary length.
    pub fn general(segments: Vec<(f64, f64)>, coefficients: Vec<f64>) -> Result<Self> {
        if segments.len() != coefficients.len() {
            return domain(format!(
                "very simple function: {} blocks but {} coefficients",
                segments.len(),
                coefficients.len()
            ));
        }
        let mut pairs: Vec<((f64, f64), f64)> = segments.into_iter().zip(coefficients).collect();
        for &((a, b), c) in &pairs {
            if !(a.is_finite() && b.is_finite() && c.is_finite()) {
                return domain("very simple function: blocks and coefficients must be finite");
            }
            if !(a >= 0.0 && a < b) {
                return domain(format!("very simple function: block ({a}, {b}) must satisfy 0 <= h1 < h2"));
            }
        }
        pairs.sort_by(|x, y| x.0 .0.total_cmp(&y.0 .0));
        for w in pairs.windows(2) {
            if w[1].0 .0 < w[0].0 .1 {
                return domain(format!(
                    "very simple function: blocks ({}, {}) and ({}, {}) overlap",
                    w[0].0 .0, w[0].0 .1, w[1].0 .0, w[1].0 .1
                ));
            }
        }
        let (segments, coefficients) = pairs.into_iter().unzip();
        Ok(VerySimpleFunction { step: None, segments, coefficients })
    }

    /// Parses the text format: the step `h` on the first line, then one `h1 c` pair per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, first) = lines.next().ok_or_else(|| Error::Parse("empty very simple function file".into()))?;
        let h: f64 = parse_number(first, 1)?;
        let mut starts = Vec::new();
        let mut coefficients = Vec::new();
        for (i, line) in lines {
            let mut parts = line.split_whitespace();
            let (Some(a), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("line {}: expected `h1 c`, got `{line}`", i + 1)));
            };
            starts.push(parse_number(a, i + 1)?);
            coefficients.push(parse_number(c, i + 1)?);
        }
        Self::equal_step(h, starts, coefficients)
    }

    /// The common block length, when all blocks have the same length.
    pub fn step(&self) -> Option<f64> {
        self.step
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Blocks as `(h1, h2, c)`.
    pub fn blocks(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.segments.iter().zip(&self.coefficients).map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Right end of the ambient interval `(0, b)`.
    pub fn domain_end(&self) -> f64 {
        self.segments.iter().map(|s| s.1).fold(1.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.blocks().map(|(a, b, c)| c.abs() * (b - a)).sum()
    }

    /// `(sum |c_k|^p len_k)^(1/p)`, exact for any block lengths.
    pub fn lp_norm_exact(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return domain(format!("norm exponent p = {p} must be at least 1"));
        }
        let s: f64 = self.blocks().map(|(a, b, c)| c.abs().powf(p) * (b - a)).sum();
        Ok(s.powf(1.0 / p))
    }

    pub fn scaled(&self, c: f64) -> Self {
        VerySimpleFunction {
            step: self.step,
            segments: self.segments.clone(),
            coefficients: self.coefficients.iter().map(|v| v * c).collect(),
        }
    }

    /// The step function as a [`ScalarFunction`] on `(0, b)`.
    pub fn to_scalar(&self) -> Result<ScalarFunction> {
        let b = self.domain_end();
        if self.is_empty() {
            return ScalarFunction::zero(0.0, b);
        }
        let segs = self.segments.clone();
        let coefs = self.coefficients.clone();
        let lo = segs[0].0;
        let hi = segs[segs.len() - 1].1;
        let mut f = ScalarFunction::with_local_rule(0.0, b, move |x: Loc| {
            let k = segs.partition_point(|s| x.minus(s.1) >= 0.0);
            match segs.get(k) {
                Some(&(a, _)) if x.minus(a) > 0.0 => coefs[k],
                _ => 0.0,
            }
        })?
        .with_support(lo, hi)?;
        for &(a, e) in &self.segments {
            if a > 0.0 {
                f = f.with_jump(a);
            }
            f = f.with_jump(e);
        }
        Ok(f)
    }
}

fn parse_number(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line}: `{s}` is not finite")));
    }
    Ok(v)
}

/// `|f|_p = h^(1/p) |c|_p` for an equal-step function.
pub fn vs_lp_norm(f: &VerySimpleFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return domain(format!("vs_lp_norm: p = {p} must be at least 1"));
    }
    let Some(h) = f.step() else {
        return domain("vs_lp_norm: the closed form needs blocks of equal length");
    };
    let s: f64 = f.coefficients().iter().map(|c| c.abs().powf(p)).sum();
    Ok(h.powf(1.0 / p) * s.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp_norm;
    use crate::quadrature::QuadratureSpec;

    #[test]
    fn closed_form_examples() {
        let f = VerySimpleFunction::equal_step(0.5, vec![0.0, 0.5], vec![1.0, 1.0]).unwrap();
        assert!((vs_lp_norm(&f, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let f = VerySimpleFunction::equal_step(0.25, vec![0.5], vec![1.0]).unwrap();
        assert!((vs_lp_norm(&f, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(vs_lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn unit_steps_are_euclidean() {
        // Blocks of unit length fall outside the equal-step form (h < 1), so use the general one.
        let f = VerySimpleFunction::general(vec![(0.0, 1.0), (1.0, 2.0)], vec![3.0, 4.0]).unwrap();
        assert!((f.lp_norm_exact(2.0).unwrap() - 5.0).abs() < 1e-15);
        assert!(vs_lp_norm(&f, 2.0).is_err());
    }

    #[test]
    fn overlapping_blocks_rejected() {
        assert!(VerySimpleFunction::equal_step(0.3, vec![0.1, 0.2], vec![1.0, 1.0]).is_err());
        assert!(VerySimpleFunction::equal_step(1.5, vec![0.1], vec![1.0]).is_err());
    }

    #[test]
    fn parse_text_format() {
        let f = VerySimpleFunction::parse("0.1\n# blocks\n0.2 1.5\n0.6 -2\n").unwrap();
        assert_eq!(f.step(), Some(0.1));
        assert_eq!(f.len(), 2);
        let g = f.to_scalar().unwrap();
        assert_eq!(g.evaluate(0.25).unwrap(), 1.5);
        assert_eq!(g.evaluate(0.65).unwrap(), -2.0);
        assert_eq!(g.evaluate(0.45).unwrap(), 0.0);
        assert!(VerySimpleFunction::parse("").is_err());
        assert!(VerySimpleFunction::parse("0.1\n0.2\n").is_err());
        assert!(VerySimpleFunction::parse("0.1\n0.2 x\n").is_err());
    }

    #[test]
    fn matches_quadrature() {
        let spec = QuadratureSpec::with_tolerances(1e-13, 0.0);
        let f = VerySimpleFunction::equal_step(0.05, vec![0.1, 0.3, 0.35, 0.9], vec![1.0, -0.5, 2.0, 0.25]).unwrap();
        let g = f.to_scalar().unwrap();
        for &p in &[1.0, 1.5, 2.0, 3.7] {
            let a = vs_lp_norm(&f, p).unwrap();
            let b = lp_norm(&g, p, &spec).unwrap();
            assert!(((a - b) / a).abs() < 1e-10, "p = {p}: {a} vs {b}");
        }
    }
}
