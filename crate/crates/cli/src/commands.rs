use std::fmt;

use kaudit_core::audit::{
    audit_norm_radius_corollaries, feasible_m_for_power, random_unit_vector, tightness_search, verify_classical_kantorovich, verify_diff_with,
    verify_holder_mccarthy, verify_jensen_with, verify_operator_order, verify_ratio_with, CheckKind, FeasibleSet, FuzzConfig, Operator, TightnessParams,
    Verdict,
};
use kaudit_core::bounds::{classify, constant_klog, h_extremum, u_extremum, BoundSpec, Form};
use kaudit_core::linalg::{apply_function, eigh};
use kaudit_core::rng::SplitMix64;
use kaudit_core::sconvex::{certify, max_feasible_s, theta_log, CertificateStatus, DEFAULT_GRID};
use kaudit_core::{Error, HermitianMatrix, ScalarFunction, SpectralWindow, UnitVector};
use serde_json::{json, Value};

use crate::args::{CertifyArgs, Command, ConstantForm, ConstantsArgs, FeasibleArgs, FuzzArgs, VerifyArgs, WindowArgs, WindowForm};
use crate::io::{load_matrix, load_vector, LoadError};
use crate::report::{fixed, Report};
use crate::shard::run_campaign;

pub const SEED_ENV: &str = "KAUDIT_SEED";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Load(LoadError),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Load(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidMatrix(_) | Error::Dimension(_) | Error::InvalidParameter(_) | Error::UnknownCheck(_) => 2,
                Error::Regime(_) | Error::Precondition(_) | Error::Domain(_) | Error::NotPositive { .. } | Error::Degenerate(_) => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Load(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid(inner) => CliError::Core(inner),
            other => CliError::Load(other),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// A finished report plus whether every verdict it carries passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

pub fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Constants(a) => constants(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Fuzz(a) => fuzz(a),
        Command::Feasible(a) => feasible(a),
        Command::ReproduceRemark => reproduce_remark(),
    }
}

fn parse_function(spec: &str) -> CliResult<ScalarFunction> {
    spec.parse().map_err(|e: Error| CliError::Usage(format!("--f {spec}: {e}")))
}

fn window(w: &WindowArgs) -> CliResult<SpectralWindow> {
    SpectralWindow::new(w.lower, w.upper).map_err(|e| CliError::Usage(format!("window: {e}")))
}

fn require<T: Copy>(value: Option<T>, flag: &str, check: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--check {check} needs {flag}")))
}

/// `KAUDIT_SEED` wins over the flag when set.
fn effective_seed(flag: u64) -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn constants(a: &ConstantsArgs) -> CliResult<Outcome> {
    let f = parse_function(&a.function)?;
    let w = window(&a.window)?;
    if !a.q.is_finite() {
        return Err(CliError::Usage(format!("--q must be finite, got {}", a.q)));
    }
    let config = json!({"function": f.to_string(), "m": w.lower(), "M": w.upper(), "q": a.q, "form": form_name(a.form)});
    let mut report = Report::new("constants", config);

    if a.form == ConstantForm::Log {
        let c = constant_klog(w.upper(), a.q)?;
        report.summary = json!({"constant": c, "threshold": w.upper() / (w.upper() - 1.0)});
        report.notes.push(format!("constant {}", fixed(c)));
        return Ok(Outcome { report, passed: true });
    }

    let spec = BoundSpec::from_function(&f, w, a.q)?;
    let form = if a.form == ConstantForm::Ratio { Form::Ratio } else { Form::Difference };
    let regime = classify(&spec, form);
    let ext = match form {
        Form::Ratio => h_extremum(&spec),
        Form::Difference => u_extremum(&spec),
    }
    .inspect_err(|_| {
        eprintln!("regime {}", regime.tag);
        for c in &regime.conditions {
            eprintln!("  {} slack {:e} {}", c.label, c.slack, if c.holds { "holds" } else { "FAILS" });
        }
    })?;
    let constant = ext.endpoint_bound.unwrap_or(ext.value);
    report.notes.push(format!("constant {}", fixed(constant)));
    report.notes.push(format!("regime {}", ext.regime.tag));
    report.notes.push(format!("stationary point {} value {}", fixed(ext.t1), fixed(ext.value)));
    for c in &ext.regime.conditions {
        let flag = if c.marginal { " (marginal)" } else { "" };
        report.notes.push(format!("  {} slack {}{flag}", c.label, fixed(c.slack)));
    }
    report.summary = json!({
        "constant": constant,
        "regime": ext.regime.tag,
        "extremum": ext,
    });
    Ok(Outcome { report, passed: true })
}

fn form_name(f: ConstantForm) -> &'static str {
    match f {
        ConstantForm::Ratio => "ratio",
        ConstantForm::Diff => "diff",
        ConstantForm::Log => "log",
    }
}

fn certify_cmd(a: &CertifyArgs) -> CliResult<Outcome> {
    let f = parse_function(&a.function)?;
    let w = window(&a.window)?;
    if a.grid < 3 {
        return Err(CliError::Usage(format!("--grid must be at least 3, got {}", a.grid)));
    }
    if a.s.is_none() && !a.max_s && a.theta_eps.is_none() {
        return Err(CliError::Usage("give --s, --max-s or --theta-eps".into()));
    }
    let config = json!({"function": f.to_string(), "m": w.lower(), "M": w.upper(), "s": a.s, "grid": a.grid, "max_s": a.max_s, "theta_eps": a.theta_eps});
    let mut report = Report::new("certify", config);
    let mut summary = serde_json::Map::new();
    let mut passed = true;

    if let Some(s) = a.s {
        let cert = certify(&f, &w, s, a.grid, a.grid)?;
        match cert.status {
            CertificateStatus::Certified => report.notes.push(format!("Certified at s = {} (max violation {:e})", fixed(s), cert.max_violation)),
            CertificateStatus::Refuted { witness } => {
                passed = false;
                report.notes.push(format!(
                    "Refuted at s = {}: x = {} y = {} lambda = {} lhs {} > rhs {}",
                    fixed(s),
                    fixed(witness.x),
                    fixed(witness.y),
                    fixed(witness.lambda),
                    fixed(witness.lhs),
                    fixed(witness.rhs)
                ));
            }
        }
        summary.insert("certificate".into(), json!(cert));
    }
    if a.max_s {
        let s_max = max_feasible_s(&f, &w, a.grid, a.grid)?;
        report.notes.push(format!("max certified s {}", fixed(s_max)));
        summary.insert("max_s".into(), json!(s_max));
    }
    if let Some(eps) = a.theta_eps {
        let theta = theta_log(&w, eps, a.grid, a.grid)?;
        report.notes.push(format!("theta {} (alpha floor {})", fixed(theta.theta), fixed(eps)));
        summary.insert("theta".into(), json!(theta));
    }
    report.summary = Value::Object(summary);
    Ok(Outcome { report, passed })
}

const VERIFY_CHECKS: [&str; 7] = ["jensen", "ratio", "diff", "holder", "order", "classical", "norm-radius"];

fn verify(a: &VerifyArgs) -> CliResult<Outcome> {
    if !VERIFY_CHECKS.contains(&a.check.as_str()) {
        return Err(CliError::Core(Error::UnknownCheck(a.check.clone())));
    }
    if !(a.pad >= 1.0 && a.pad.is_finite()) {
        return Err(CliError::Usage(format!("--pad must be >= 1, got {}", a.pad)));
    }
    let seed = effective_seed(a.seed)?;
    let function = a.function.as_deref().map(parse_function).transpose()?;
    let config = json!({
        "check": a.check, "function": function.map(|f| f.to_string()), "s": a.s, "p": a.p, "q": a.q,
        "pad": a.pad, "samples": a.samples, "seed": seed, "search": a.search, "m": a.lower, "M": a.upper,
    });
    let mut report = Report::new("verify", config);

    let verdicts = if let Some(iters) = a.search {
        vec![search(a, function, iters, seed)?]
    } else {
        on_matrix(a, function, seed)?
    };
    report.summary = json!({
        "verdicts": verdicts.len(),
        "failed": verdicts.iter().filter(|v| !v.passed).count(),
        "worst_normalized_margin": verdicts.iter().map(Verdict::normalized_margin).fold(f64::INFINITY, f64::min),
    });
    report.verdicts = verdicts;
    let passed = report.all_passed();
    Ok(Outcome { report, passed })
}

fn search(a: &VerifyArgs, function: Option<ScalarFunction>, iters: usize, seed: u64) -> CliResult<Verdict> {
    let check = a.check.as_str();
    let lower = require(a.lower, "--m", check)?;
    let upper = require(a.upper, "--M", check)?;
    let w = SpectralWindow::new(lower, upper).map_err(|e| CliError::Usage(format!("window: {e}")))?;
    let (function, s, q) = match check {
        "jensen" => (require(function, "--f", check)?, require(a.s, "--s", check)?, 1.0),
        "ratio" | "diff" => (require(function, "--f", check)?, require(a.s, "--s", check)?, require(a.q, "--q", check)?),
        "holder" => (ScalarFunction::Power { exponent: 1.0 }, require(a.s, "--s", check)?, require(a.q, "--q", check)?),
        "classical" => (ScalarFunction::Power { exponent: 1.0 }, 1.0, 1.0),
        other => return Err(CliError::Core(Error::UnknownCheck(format!("{other} has no tightness search")))),
    };
    let id = if check == "holder" { "holder-mccarthy" } else { check };
    Ok(tightness_search(id, &TightnessParams { function, s, q, window: w }, iters, seed)?)
}

fn on_matrix(a: &VerifyArgs, function: Option<ScalarFunction>, seed: u64) -> CliResult<Vec<Verdict>> {
    let check = a.check.as_str();
    let path = a.a.as_ref().ok_or_else(|| CliError::Usage("--A is required unless --search is given".into()))?;
    let op = operator(load_matrix(path)?, a.pad)?;

    if check == "order" {
        let b_path = a.b.as_ref().ok_or_else(|| CliError::Usage("--check order needs --B".into()))?;
        let b = operator(load_matrix(b_path)?, a.pad)?;
        let (p, q, s) = (require(a.p, "--p", check)?, require(a.q, "--q", check)?, require(a.s, "--s", check)?);
        return Ok(verify_operator_order(&op, &b, p, q, s)?);
    }

    let vectors: Vec<UnitVector> = match &a.x {
        Some(path) => {
            let x = load_vector(path)?;
            if x.len() != op.order() {
                return Err(CliError::Core(Error::Dimension(format!("x has {} components, A has order {}", x.len(), op.order()))));
            }
            vec![x]
        }
        None => {
            let mut rng = SplitMix64::new(seed);
            let extra = (0..a.samples).map(|_| random_unit_vector(&mut rng, op.order())).collect::<Result<Vec<_>, _>>()?;
            if check == "norm-radius" {
                extra
            } else {
                op.probe_vectors(&extra)
            }
        }
    };

    if check == "norm-radius" {
        let (p, s) = (require(a.p, "--p", check)?, require(a.s, "--s", check)?);
        return Ok(audit_norm_radius_corollaries(&op, p, s, &vectors)?);
    }

    let mut out = Vec::with_capacity(vectors.len());
    match check {
        "jensen" | "ratio" | "diff" => {
            let f = require(function, "--f", check)?;
            let s = require(a.s, "--s", check)?;
            let cert = certify(&f, &op.window()?, s, DEFAULT_GRID, DEFAULT_GRID)?;
            for x in &vectors {
                out.push(match check {
                    "jensen" => verify_jensen_with(&f, s, &op, x, &cert)?,
                    "ratio" => verify_ratio_with(&f, s, require(a.q, "--q", check)?, &op, x, &cert)?,
                    _ => verify_diff_with(&f, s, require(a.q, "--q", check)?, &op, x, &cert)?,
                });
            }
        }
        "holder" => {
            let (q, s) = (require(a.q, "--q", check)?, require(a.s, "--s", check)?);
            for x in &vectors {
                out.push(verify_holder_mccarthy(&op, q, s, x)?);
            }
        }
        _ => {
            for x in &vectors {
                out.push(verify_classical_kantorovich(&op, x)?);
            }
        }
    }
    Ok(out)
}

fn operator(a: HermitianMatrix, pad: f64) -> CliResult<Operator> {
    let op = Operator::new(a)?;
    Ok(if pad > 1.0 { op.padded(pad)? } else { op })
}

fn fuzz(a: &FuzzArgs) -> CliResult<Outcome> {
    let mut checks: Vec<CheckKind> = Vec::new();
    for name in &a.checks {
        for c in CheckKind::parse_group(name)? {
            if !checks.contains(&c) {
                checks.push(c);
            }
        }
    }
    let cfg = FuzzConfig {
        seed: effective_seed(a.seed)?,
        instances: a.instances,
        checks,
        min_dim: a.min_dim,
        max_dim: a.max_dim,
        ratio_max: a.ratio_max,
        grid: a.grid,
        padding: a.pad,
        failure_cap: a.failure_cap,
        ..FuzzConfig::default()
    };
    cfg.validate()?;
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let campaign = run_campaign(&cfg, a.threads)?;
    let mut report = Report::new("fuzz", &cfg);
    for c in &campaign.checks {
        if let Some(worst) = &c.worst {
            report.verdicts.push(worst.verdict.clone());
        }
        report.notes.push(format!(
            "{:<22} attempted {} passed {} failed {} errors {} marginal {}",
            c.check_id.id(),
            c.attempted,
            c.passed,
            c.failed,
            c.errors,
            c.marginal_verdicts
        ));
        for (index, msg) in c.error_samples.iter().take(3) {
            report.notes.push(format!("  error at index {index}: {msg}"));
        }
    }
    let passed = campaign.all_passed();
    report.summary = json!(campaign);
    Ok(Outcome { report, passed })
}

fn feasible(a: &FeasibleArgs) -> CliResult<Outcome> {
    let form = match a.form {
        WindowForm::Ratio => Form::Ratio,
        WindowForm::Diff => Form::Difference,
    };
    let set = feasible_m_for_power(a.p, a.q, a.lower, form)?;
    let config = json!({"p": a.p, "q": a.q, "m": a.lower, "form": if form == Form::Ratio { "ratio" } else { "diff" }});
    let mut report = Report::new("feasible", config);
    report.notes.push(match set {
        FeasibleSet::Empty => "no feasible M".to_string(),
        FeasibleSet::Interval { lower, start, end, from_lower, unbounded, fragmented } => {
            let open = if from_lower { format!("({}", fixed(lower)) } else { format!("[{}", fixed(start)) };
            let close = if unbounded { format!("{}+)", fixed(end)) } else { format!("{}]", fixed(end)) };
            let more = if fragmented { " (further runs beyond)" } else { "" };
            format!("feasible M in {open}, {close}{more}")
        }
    });
    report.summary = json!(set);
    Ok(Outcome { report, passed: true })
}

fn rayleigh(a: &HermitianMatrix, v: &[f64]) -> CliResult<f64> {
    let av = a.apply(v)?;
    let num: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
    Ok(num / v.iter().map(|x| x * x).sum::<f64>())
}

/// `A = diag(1, 1.1)`, `x = (1/√2, 1/√2)` against `K_log(1, 10, q)` for `q = 2, 8`.
fn reproduce_remark() -> CliResult<Outcome> {
    let a = HermitianMatrix::diagonal(&[1.0, 1.1])?;
    let x = UnitVector::balanced_pair();
    // Rayleigh quotients on (1, 1): the normalized vector squares to 1 + 2^-52.
    let t = rayleigh(&a, &[1.0, 1.0])?;
    let log10 = ScalarFunction::log10();
    let mond_pecaric = log10.eval(t)?;
    let log_quad = rayleigh(&apply_function(&eigh(&a)?, &log10)?, &[1.0, 1.0])?;
    let k2 = constant_klog(10.0, 2.0)?;
    let k8 = constant_klog(10.0, 8.0)?;
    let q2 = k2 * t * t;
    let q8 = k8 * t.powi(8);
    let q8_doubled = 2.0 * q8;

    let q2_above = q2 > mond_pecaric;
    let q8_below = q8_doubled < mond_pecaric;
    // 2^(1-s) < 2 for every s in (0, 1], so the q = 8 bound never reaches the quadratic form.
    let q8_violated = q8_doubled < log_quad;

    let mut report = Report::new("reproduce-remark", json!({"A": [[1.0, 0.0], [0.0, 1.1]], "x": x.as_slice(), "M": 10.0}));
    report.summary = json!({
        "inner_product": t,
        "mond_pecaric_bound": mond_pecaric,
        "K_log_q2": k2,
        "K_log_q8": k8,
        "q2_bound": q2,
        "q8_bound": q8,
        "q8_bound_doubled": q8_doubled,
        "log_quadratic_form": log_quad,
        "q2_exceeds_mond_pecaric": q2_above,
        "q8_doubled_below_mond_pecaric": q8_below,
        "no_ordering": q2_above && q8_below,
        "q8_bound_below_log_quadratic_form": q8_violated,
    });
    report.notes = vec![
        format!("<Ax,x>                     {}", fixed(t)),
        format!("log10 <Ax,x>               {}", fixed(mond_pecaric)),
        format!("K_log(1,10,2) <Ax,x>^2     {}", fixed(q2)),
        format!("K_log(1,10,8) <Ax,x>^8     {}", fixed(q8)),
        format!("2 K_log(1,10,8) <Ax,x>^8   {}", fixed(q8_doubled)),
        format!("<log10(A)x,x>              {}", fixed(log_quad)),
        format!("q=2 bound above log10 <Ax,x>: {q2_above}"),
        format!("doubled q=8 bound below log10 <Ax,x>: {q8_below}"),
        format!("no ordering between the bounds: {}", q2_above && q8_below),
        format!("doubled q=8 bound below <log10(A)x,x>: {q8_violated}"),
    ];
    Ok(Outcome { report, passed: true })
}
