//! Subcommand implementations. Every command computes its full output before
//! anything is written, so an error leaves stdout empty.

use fraclab::constants::{k_lower_shape, k_upper, k_upper_end};
use fraclab::error::{Error, Result};
use fraclab::funcspace::{CatalogEntry, CatalogKind};
use fraclab::lab::{
    fit_blowup, ratio_sweep, verify_besov_ratio, verify_factorization, verify_gls_indicator, verify_gls_sobolev,
    verify_indicator_bracket, verify_prop51, verify_vs_bound, verify_weighted_bracket, BracketReport, Endpoint,
    Potential, MIN_FIT_SAMPLES,
};
use fraclab::norms::{lp_norm, natural_psi, PsiFunction};
use fraclab::operators::{
    derivative_function, marchaud_derivative, riesz_potential_1d, rl_integral, weighted_potential,
};
use fraclab::spec::{check_grid, FunctionSpec, GridSpec};
use fraclab::QuadratureSpec;

use crate::output::{render, Table, Value};
use crate::{
    ApplyArgs, Check, Cli, Command, ConstantsArgs, EndpointArg, NormArgs, Operator, Outcome, PotentialArg, SweepArgs,
    VerifyArgs,
};

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

fn required(v: Option<f64>, flag: &str, check: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("--{flag} is required for {check}")))
}

fn entry(text: &str, alpha: Option<f64>) -> Result<CatalogEntry> {
    FunctionSpec::parse(text)?.build(alpha)
}

pub(crate) fn execute(cli: &Cli) -> Result<Outcome> {
    let spec = cli.common.spec()?;
    let format = cli.common.format;
    let (tables, passed) = match &cli.command {
        Command::Apply(a) => (vec![apply(a, &spec)?], true),
        Command::Norm(a) => (vec![norm(a, &spec)?], true),
        Command::Constants(a) => (vec![constants(a)?], true),
        Command::Verify(a) => verify(a, &spec)?,
        Command::Sweep(a) => sweep(a, &spec)?,
        Command::Catalog => (vec![catalog()], true),
    };
    Ok(Outcome { text: render(&tables, format), passed })
}

fn operator_name(op: Operator) -> &'static str {
    match op {
        Operator::RlIntegral => "rl-integral",
        Operator::Marchaud => "marchaud",
        Operator::Derivative => "derivative",
        Operator::Riesz => "riesz",
        Operator::Weighted => "weighted",
    }
}

fn apply(a: &ApplyArgs, spec: &QuadratureSpec) -> Result<Table> {
    let e = entry(&a.function, Some(a.alpha))?;
    let xs = GridSpec::parse(&a.x)?.points();
    check_grid(&xs, "x", |x| x > 0.0 && x.is_finite())?;
    let f = &e.function;
    let derivative = match a.operator {
        Operator::Derivative => Some(derivative_function(&e, a.alpha, spec)?),
        _ => None,
    };
    let weights = match a.operator {
        Operator::Weighted => Some((required(a.beta, "beta", "weighted")?, required(a.gamma, "gamma", "weighted")?)),
        _ => None,
    };
    let mut t = Table::new(&["operator", "f", "alpha", "x", "value", "flag"]);
    for &x in &xs {
        let (value, flag) = match a.operator {
            Operator::RlIntegral => (rl_integral(f, a.alpha, x, spec)?, "ok"),
            Operator::Marchaud => {
                let d = marchaud_derivative(f, a.alpha, x, spec)?;
                (d.value, d.flag.as_str())
            }
            Operator::Derivative => (derivative.as_ref().expect("built above").evaluate(x)?, "ok"),
            Operator::Riesz => (riesz_potential_1d(f, a.alpha, x, spec)?, "ok"),
            Operator::Weighted => {
                let (b, g) = weights.expect("checked above");
                (weighted_potential(f, a.alpha, b, g, x, spec)?, "ok")
            }
        };
        t.push(vec![
            operator_name(a.operator).into(),
            e.name.clone().into(),
            a.alpha.into(),
            x.into(),
            value.into(),
            flag.into(),
        ]);
    }
    Ok(t)
}

fn norm(a: &NormArgs, spec: &QuadratureSpec) -> Result<Table> {
    let e = entry(&a.function, a.alpha)?;
    let ps = GridSpec::parse(&a.p_grid)?.points();
    check_grid(&ps, "p", |p| p >= 1.0 && p.is_finite())?;
    let mut t = Table::new(&["f", "p", "norm_value", "divergent_flag"]);
    for &p in &ps {
        let v = lp_norm(&e.function, p, spec)?;
        t.push(vec![e.name.clone().into(), p.into(), v.into(), (!v.is_finite()).into()]);
    }
    Ok(t)
}

fn constants(a: &ConstantsArgs) -> Result<Table> {
    let ps = GridSpec::parse(&a.p_grid)?.points();
    let end = k_upper_end(a.alpha, a.d);
    check_grid(&ps, "p", |p| p >= 1.0 && p <= end)?;
    let mut t = Table::new(&["alpha", "d", "s", "p", "q", "k_upper", "k_lower_shape"]);
    for &p in &ps {
        let ku = k_upper(a.alpha, a.d, p, a.s)?;
        let inv = 1.0 / p - a.alpha / a.d as f64;
        let q = if inv > 0.0 { 1.0 / inv } else { f64::INFINITY };
        t.push(vec![
            a.alpha.into(),
            Value::Int(a.d as i64),
            a.s.into(),
            p.into(),
            q.into(),
            ku.into(),
            k_lower_shape(a.alpha, p).ok().into(),
        ]);
    }
    Ok(t)
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::IndicatorBracket => "indicator-bracket",
        Check::GlsIndicator => "gls-indicator",
        Check::VsBound => "vs-bound",
        Check::BesovRatio => "besov-ratio",
        Check::GlsSobolev => "gls-sobolev",
        Check::Prop51 => "prop51",
        Check::Factorization => "factorization",
        Check::Weighted => "weighted",
    }
}

fn report_table(reports: &[BracketReport]) -> Table {
    let mut t = Table::new(&["check", "alpha", "p", "q", "quantity", "lower", "upper", "passed", "context"]);
    for r in reports {
        let context: Vec<String> = r
            .context
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "alpha" | "p" | "q"))
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        t.push(vec![
            r.check.clone().into(),
            r.get("alpha").into(),
            r.get("p").into(),
            r.get("q").into(),
            r.quantity.into(),
            r.lower.into(),
            r.upper.into(),
            r.passed.into(),
            context.join(";").into(),
        ]);
    }
    t
}

fn single(a: &VerifyArgs, name: &str) -> Result<CatalogEntry> {
    match a.functions.as_slice() {
        [one] => entry(one, Some(a.alpha)),
        [] => usage(format!("--f is required for {name}")),
        _ => usage(format!("{name} takes a single --f")),
    }
}

fn verify(a: &VerifyArgs, spec: &QuadratureSpec) -> Result<(Vec<Table>, bool)> {
    let name = check_name(a.check);
    let alpha = a.alpha;
    let reports = match a.check {
        Check::IndicatorBracket => vec![verify_indicator_bracket(
            alpha,
            required(a.p, "p", name)?,
            required(a.h1, "h1", name)?,
            required(a.h2, "h2", name)?,
            spec,
        )?],
        Check::GlsIndicator => {
            let zeta = PsiFunction::constant(1.0, a.s1.unwrap_or(1.0), a.s2.unwrap_or(1.0 / alpha))?;
            vec![verify_gls_indicator(alpha, required(a.h1, "h1", name)?, required(a.h2, "h2", name)?, &zeta, spec)?]
        }
        Check::VsBound => {
            let e = single(a, name)?;
            let CatalogKind::VerySimple(v) = &e.kind else {
                return usage("vs-bound needs a `vs:<path>` function");
            };
            vec![verify_vs_bound(v, alpha, required(a.p, "p", name)?, spec)?]
        }
        Check::BesovRatio => {
            let e = single(a, name)?;
            let b = a.b.unwrap_or(e.function.domain().1);
            vec![verify_besov_ratio(&e, alpha, required(a.p, "p", name)?, b, spec)?]
        }
        Check::GlsSobolev => {
            let e = single(a, name)?;
            let psi = natural_psi(&e.function, required(a.s1, "s1", name)?, required(a.s2, "s2", name)?, spec)?;
            vec![verify_gls_sobolev(&e, &psi, alpha, spec)?]
        }
        Check::Prop51 => vec![verify_prop51(&single(a, name)?, alpha, required(a.beta, "beta", name)?, spec)?],
        Check::Factorization => {
            let g1 = single(a, name)?;
            let beta = required(a.beta, "beta", name)?;
            let g2 = match &a.second {
                Some(g) => entry(g, Some(beta))?,
                None => return usage("--g is required for factorization"),
            };
            vec![verify_factorization(
                &g1,
                &g2,
                alpha,
                beta,
                required(a.p1, "p1", name)?,
                required(a.p2, "p2", name)?,
                spec,
            )?]
        }
        Check::Weighted => {
            if a.functions.is_empty() {
                return usage("--f is required for weighted");
            }
            let family = a.functions.iter().map(|f| entry(f, Some(alpha))).collect::<Result<Vec<_>>>()?;
            let grid = match &a.p_grid {
                Some(g) => GridSpec::parse(g)?.points(),
                None => return usage("--p-grid is required for weighted"),
            };
            verify_weighted_bracket(
                alpha,
                required(a.beta, "beta", name)?,
                required(a.gamma, "gamma", name)?,
                &family,
                &grid,
                spec,
            )?
        }
    };
    let passed = reports.iter().all(|r| r.passed);
    Ok((vec![report_table(&reports)], passed))
}

fn sweep(a: &SweepArgs, spec: &QuadratureSpec) -> Result<(Vec<Table>, bool)> {
    let family = a.functions.iter().map(|f| entry(f, Some(a.alpha))).collect::<Result<Vec<_>>>()?;
    let endpoint = a.endpoint.map(|e| match e {
        EndpointArg::One => Endpoint::One,
        EndpointArg::InverseAlpha => Endpoint::InverseAlpha(a.alpha),
    });
    let ps = match (&a.p_grid, endpoint) {
        (Some(g), _) => GridSpec::parse(g)?.points(),
        (None, Some(e)) => {
            if !(a.k_min <= a.k_max && a.k_min >= 0 && a.k_max <= 60) {
                return usage(format!("need 0 <= k-min <= k-max <= 60, got {}..{}", a.k_min, a.k_max));
            }
            e.geometric_grid(a.k_min..=a.k_max)
        }
        (None, None) => return usage("sweep needs --p-grid or --endpoint"),
    };
    let potential = match a.potential {
        PotentialArg::Rl => Potential::RiemannLiouville,
        PotentialArg::Riesz => Potential::Riesz,
    };
    let samples = ratio_sweep(a.alpha, &ps, &family, potential, spec)?;
    let mut t = Table::new(&["alpha", "potential", "p", "q", "ratio", "witness", "k_upper", "within_envelope"]);
    let mut passed = true;
    for s in &samples {
        let ku = k_upper(a.alpha, 1, s.p, a.s)?;
        let ok = s.ratio <= ku;
        passed &= ok;
        t.push(vec![
            a.alpha.into(),
            potential.as_str().into(),
            s.p.into(),
            s.q.into(),
            s.ratio.into(),
            s.witness.clone().into(),
            ku.into(),
            ok.into(),
        ]);
    }
    let mut tables = vec![t];
    if let Some(e) = endpoint {
        if samples.len() >= MIN_FIT_SAMPLES {
            let fit = fit_blowup(&samples, e)?;
            let mut f = Table::new(&["alpha", "endpoint", "slope", "intercept", "samples", "expected_slope"]);
            let name = match e {
                Endpoint::One => "one",
                Endpoint::InverseAlpha(_) => "inverse-alpha",
            };
            f.push(vec![
                a.alpha.into(),
                name.into(),
                fit.slope.into(),
                fit.intercept.into(),
                Value::Int(fit.samples as i64),
                (a.alpha - 1.0).into(),
            ]);
            tables.push(f);
        }
    }
    Ok((tables, passed))
}

fn catalog() -> Table {
    let rows: [(&str, &str, &str, &str, &str); 8] = [
        ("f0", "f0", "(0,inf)", "(1,inf)", "1/x for x > 1"),
        ("indicator", "indicator:h1,h2", "(0,max(1,h2))", "(h1,h2)", "indicator of (h1,h2); h2 may be inf"),
        ("g_h", "g_h:h", "(0,inf)", "(h,inf)", "step I(x > h) with 0 < h < 1"),
        ("h_delta", "h_delta:delta[,alpha]", "(0,inf)", "(0,1/e)", "x^-alpha |ln x|^delta"),
        ("f0+h_delta", "f0+h_delta:delta[,alpha]", "(0,inf)", "(0,inf)", "sum of the two disjoint witnesses"),
        ("power_alpha", "power_alpha:a", "(0,inf)", "(0,inf)", "x^(a-1); its order-a derivative vanishes"),
        ("const", "const:c", "(0,inf)", "(0,inf)", "the constant c"),
        ("vs", "vs:<path>", "(0,max(1,end))", "blocks", "step function read from a file"),
    ];
    let mut t = Table::new(&["name", "spec", "domain", "support", "description"]);
    for (a, b, c, d, e) in rows {
        t.push(vec![a.into(), b.into(), c.into(), d.into(), e.into()]);
    }
    t
}
