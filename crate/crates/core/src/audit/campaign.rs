use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use super::feasible::feasible_m_for_power;
use super::generate::{random_matrix, random_unit_vector};
use super::verify::{verify_classical_kantorovich, verify_diff_with, verify_holder_mccarthy, verify_jensen_with, verify_order_variant, verify_ratio_with, OrderVariant};
use super::{Operator, Verdict};
use crate::bounds::{classify, BoundSpec, Form, RegimeTag};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::{HermitianMatrix, SpectralWindow, UnitVector, JACOBI_TOLERANCE};
use crate::rng::{mix64, stream_seed, SplitMix64};
use crate::sconvex::{certify, max_feasible_s, SConvexityCertificate};

/// Attempts at drawing parameters with a nonempty feasible window.
const MAX_DRAWS: usize = 64;
/// Largest `|q|` drawn for the `K_f` checks.
const Q_CAP: f64 = 8.0;
/// Eigensolver tolerance used to confirm failures.
const CONFIRM_TOLERANCE: f64 = JACOBI_TOLERANCE / 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CheckKind {
    Jensen,
    RatioKf,
    RatioEndpoint,
    DiffEndpoint,
    DiffKfd,
    #[cfg_attr(feature = "serde", serde(rename = "holder-mccarthy-i"))]
    HolderI,
    #[cfg_attr(feature = "serde", serde(rename = "holder-mccarthy-ii"))]
    HolderII,
    OrderRatio,
    OrderDiff,
    #[cfg_attr(feature = "serde", serde(rename = "classical-kantorovich"))]
    Classical,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Jensen,
        CheckKind::RatioKf,
        CheckKind::RatioEndpoint,
        CheckKind::DiffEndpoint,
        CheckKind::DiffKfd,
        CheckKind::HolderI,
        CheckKind::HolderII,
        CheckKind::OrderRatio,
        CheckKind::OrderDiff,
        CheckKind::Classical,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            CheckKind::Jensen => "jensen",
            CheckKind::RatioKf => "ratio-kf",
            CheckKind::RatioEndpoint => "ratio-endpoint",
            CheckKind::DiffEndpoint => "diff-endpoint",
            CheckKind::DiffKfd => "diff-kfd",
            CheckKind::HolderI => "holder-mccarthy-i",
            CheckKind::HolderII => "holder-mccarthy-ii",
            CheckKind::OrderRatio => "order-ratio",
            CheckKind::OrderDiff => "order-diff",
            CheckKind::Classical => "classical-kantorovich",
        }
    }

    /// A check id or one of the groups `ratio`, `diff`, `holder`, `order`,
    /// `classical`, `all`.
    pub fn parse_group(name: &str) -> Result<Vec<CheckKind>> {
        use CheckKind::*;
        Ok(match name {
            "all" => Self::ALL.to_vec(),
            "ratio" => vec![RatioKf, RatioEndpoint],
            "diff" => vec![DiffEndpoint, DiffKfd],
            "holder" | "holder-mccarthy" => vec![HolderI, HolderII],
            "order" => vec![OrderRatio, OrderDiff],
            "classical" => vec![Classical],
            other => vec![other.parse()?],
        })
    }

    fn salt(&self) -> u64 {
        let ordinal = Self::ALL.iter().position(|c| c == self).unwrap_or(0) as u64;
        mix64(ordinal + 1)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.iter().copied().find(|c| c.id() == s).ok_or_else(|| Error::UnknownCheck(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FuzzConfig {
    pub seed: u64,
    /// Instances per check.
    pub instances: u64,
    pub checks: Vec<CheckKind>,
    pub min_dim: usize,
    pub max_dim: usize,
    /// Lower window endpoints are drawn log-uniformly from this range.
    pub lower_min: f64,
    pub lower_max: f64,
    /// Largest `M/m`; ratios are drawn log-uniformly from `[1.01, ratio_max]`.
    pub ratio_max: f64,
    /// Gaussian unit vectors per instance, on top of both extreme
    /// eigenvectors and one random mixture of them.
    pub random_vectors: usize,
    /// Grid size for s-convexity certificates of non-power functions.
    pub grid: usize,
    /// Verifier windows are `(m/padding, M·padding)`; `1` keeps them exact.
    pub padding: f64,
    /// Failures kept per check, lowest indices first.
    pub failure_cap: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 100,
            checks: CheckKind::ALL.to_vec(),
            min_dim: 2,
            max_dim: 16,
            lower_min: 0.2,
            lower_max: 5.0,
            ratio_max: 100.0,
            random_vectors: 2,
            grid: 33,
            padding: 1.0,
            failure_cap: 20,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.min_dim < 2 || self.min_dim > self.max_dim {
            return bad(format!("dimension range {}..={} must satisfy 2 <= min <= max", self.min_dim, self.max_dim));
        }
        if !(self.lower_min > 0.0 && self.lower_min <= self.lower_max && self.lower_max.is_finite()) {
            return bad(format!("lower endpoint range [{}, {}] is invalid", self.lower_min, self.lower_max));
        }
        if !(self.ratio_max > 1.01 && self.ratio_max.is_finite()) {
            return bad(format!("ratio_max must exceed 1.01, got {}", self.ratio_max));
        }
        if self.grid < 3 {
            return bad(format!("grid must be >= 3, got {}", self.grid));
        }
        if !(self.padding >= 1.0 && self.padding.is_finite()) {
            return bad(format!("padding must be >= 1, got {}", self.padding));
        }
        Ok(())
    }
}

/// Everything needed to rerun one sampled instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Instance {
    pub check: CheckKind,
    pub seed: u64,
    pub index: u64,
    pub function: Option<ScalarFunction>,
    pub s: f64,
    pub p: Option<f64>,
    pub q: Option<f64>,
    /// Window the spectrum was generated on.
    pub window: SpectralWindow,
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    /// `B` for the operator-order checks.
    pub partner: Option<Vec<Vec<f64>>>,
    pub vectors: Vec<Vec<f64>>,
    /// Angle of the `cos θ·v_min + sin θ·v_max` probe.
    pub mixture_angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub instance: Option<Instance>,
    /// Worst verdict over the probe vectors.
    pub verdict: Result<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FailureRecord {
    pub seed: u64,
    pub index: u64,
    pub margin: f64,
    pub normalized_margin: f64,
    /// Still failing when recomputed with a 10× tighter eigensolver tolerance.
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WorstCase {
    pub verdict: Verdict,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckSummary {
    pub check_id: CheckKind,
    pub attempted: u64,
    pub passed: u64,
    pub failed: u64,
    pub errors: u64,
    /// Verdicts within the marginal band.
    pub marginal_verdicts: u64,
    /// Regime conditions with near-zero slack.
    pub marginal_conditions: u64,
    pub worst: Option<WorstCase>,
    pub failures: Vec<FailureRecord>,
    /// First few error messages, with the index that produced them.
    pub error_samples: Vec<(u64, String)>,
}

impl CheckSummary {
    pub fn new(check: CheckKind) -> Self {
        Self {
            check_id: check,
            attempted: 0,
            passed: 0,
            failed: 0,
            errors: 0,
            marginal_verdicts: 0,
            marginal_conditions: 0,
            worst: None,
            failures: Vec::new(),
            error_samples: Vec::new(),
        }
    }

    /// Folds in a summary covering later indices of the same check.
    pub fn merge(&mut self, other: CheckSummary, cap: usize) {
        self.attempted += other.attempted;
        self.passed += other.passed;
        self.failed += other.failed;
        self.errors += other.errors;
        self.marginal_verdicts += other.marginal_verdicts;
        self.marginal_conditions += other.marginal_conditions;
        self.worst = match (self.worst.take(), other.worst) {
            (Some(a), Some(b)) => Some(pick_worst(a, b)),
            (a, b) => a.or(b),
        };
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| f.index);
        self.failures.truncate(cap);
        self.error_samples.extend(other.error_samples);
        self.error_samples.sort_by_key(|e| e.0);
        self.error_samples.truncate(cap);
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

fn pick_worst(a: WorstCase, b: WorstCase) -> WorstCase {
    let (ma, mb) = (a.verdict.normalized_margin(), b.verdict.normalized_margin());
    if mb < ma || (mb == ma && b.instance.index < a.instance.index) {
        b
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CampaignReport {
    pub seed: u64,
    pub instances: u64,
    pub checks: Vec<CheckSummary>,
}

impl CampaignReport {
    pub fn total_failed(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn total_errors(&self) -> u64 {
        self.checks.iter().map(|c| c.errors).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::all_passed)
    }

    pub fn check(&self, kind: CheckKind) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check_id == kind)
    }
}

/// Runs every configured check over `cfg.instances` indices.
pub fn fuzz_campaign(cfg: &FuzzConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let checks = cfg.checks.iter().map(|&c| run_shard(cfg, c, 0..cfg.instances)).collect();
    Ok(CampaignReport { seed: cfg.seed, instances: cfg.instances, checks })
}

/// Summary of one check over a contiguous index range. Merging the shards of
/// a partition in index order reproduces the sequential summary.
pub fn run_shard(cfg: &FuzzConfig, check: CheckKind, indices: Range<u64>) -> CheckSummary {
    let mut summary = CheckSummary::new(check);
    for index in indices {
        let outcome = run_instance(cfg, check, index);
        summary.attempted += 1;
        let instance = outcome.instance;
        match outcome.verdict {
            Err(e) => {
                summary.errors += 1;
                if summary.error_samples.len() < cfg.failure_cap {
                    summary.error_samples.push((index, format!("{e}")));
                }
            }
            Ok(verdict) => {
                let Some(instance) = instance else { continue };
                if verdict.passed {
                    summary.passed += 1;
                } else {
                    summary.failed += 1;
                    if summary.failures.len() < cfg.failure_cap {
                        let confirmed = matches!(evaluate(cfg, &instance, CONFIRM_TOLERANCE), Ok(v) if !v.passed);
                        summary.failures.push(FailureRecord {
                            seed: cfg.seed,
                            index,
                            margin: verdict.margin,
                            normalized_margin: verdict.normalized_margin(),
                            confirmed,
                        });
                    }
                }
                if verdict.marginal {
                    summary.marginal_verdicts += 1;
                }
                summary.marginal_conditions += marginal_conditions(&instance) as u64;
                let case = WorstCase { verdict, instance };
                summary.worst = Some(match summary.worst.take() {
                    Some(prev) => pick_worst(prev, case),
                    None => case,
                });
            }
        }
    }
    summary
}

/// Samples and evaluates instance `index` of `check`.
pub fn run_instance(cfg: &FuzzConfig, check: CheckKind, index: u64) -> InstanceOutcome {
    match sample(cfg, check, index) {
        Err(e) => InstanceOutcome { instance: None, verdict: Err(e) },
        Ok(instance) => {
            let verdict = evaluate(cfg, &instance, JACOBI_TOLERANCE);
            InstanceOutcome { instance: Some(instance), verdict }
        }
    }
}

/// Re-evaluates a recorded instance.
pub fn replay(cfg: &FuzzConfig, instance: &Instance) -> Result<Verdict> {
    evaluate(cfg, instance, JACOBI_TOLERANCE)
}

fn marginal_conditions(instance: &Instance) -> usize {
    let (Some(f), Some(q)) = (instance.function, instance.q) else {
        return 0;
    };
    let form = match instance.check {
        CheckKind::RatioKf | CheckKind::RatioEndpoint | CheckKind::OrderRatio => Form::Ratio,
        CheckKind::DiffEndpoint | CheckKind::DiffKfd | CheckKind::OrderDiff => Form::Difference,
        _ => return 0,
    };
    match BoundSpec::from_function(&f, instance.window, q) {
        Ok(spec) => classify(&spec, form).marginal_count(),
        Err(_) => 0,
    }
}

struct Draw<'a> {
    cfg: &'a FuzzConfig,
    rng: SplitMix64,
}

impl Draw<'_> {
    fn lower(&mut self) -> f64 {
        self.rng.log_uniform(self.cfg.lower_min, self.cfg.lower_max)
    }

    fn ratio(&mut self) -> f64 {
        self.rng.log_uniform(1.01, self.cfg.ratio_max)
    }

    fn window(&mut self) -> Result<SpectralWindow> {
        let m = self.lower();
        SpectralWindow::new(m, m * self.ratio())
    }

    /// `(p, q, window)` with `p, q ∈ (0, 1)` and a window satisfying the
    /// power-function condition of `form`.
    fn power_window(&mut self, form: Form) -> Result<(f64, f64, SpectralWindow)> {
        for _ in 0..MAX_DRAWS {
            let p = self.rng.uniform(0.05, 0.95);
            let q = self.rng.uniform(0.05, 0.95);
            let m = self.lower();
            // The ratio condition is scale covariant; the difference one is not.
            let base = if form == Form::Ratio { 1.0 } else { m };
            let set = feasible_m_for_power(p, q, base, form)?;
            if let Some(upper) = set.sample(&mut self.rng, base * 1.01, base * self.cfg.ratio_max) {
                return Ok((p, q, SpectralWindow::new(m, m * upper / base)?));
            }
        }
        Err(Error::Precondition(format!("no feasible window found in {MAX_DRAWS} draws")))
    }

    /// Largest certified `s` for `f` on `w`, scaled by a uniform factor.
    fn certified_s(&mut self, f: &ScalarFunction, w: &SpectralWindow) -> Result<f64> {
        let cap = max_feasible_s(f, w, self.cfg.grid, self.cfg.grid)?;
        if cap <= 0.0 {
            return Err(Error::Precondition(format!("{f} is not certified s-convex for any s on [{}, {}]", w.lower(), w.upper())));
        }
        Ok(cap * self.rng.uniform(0.25, 1.0))
    }

    /// Uniform draw from the interior of `[lo, hi]`.
    fn inside(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo < hi) {
            return Err(Error::Precondition(format!("empty parameter interval [{lo}, {hi}]")));
        }
        Ok(lo + (hi - lo) * self.rng.uniform(1e-3, 1.0 - 1e-3))
    }
}

struct Draft {
    function: Option<ScalarFunction>,
    s: f64,
    p: Option<f64>,
    q: Option<f64>,
    window: SpectralWindow,
}

fn draft(d: &mut Draw<'_>, check: CheckKind) -> Result<Draft> {
    let power = |p: f64| Some(ScalarFunction::Power { exponent: p });
    Ok(match check {
        CheckKind::Jensen => match d.rng.range_inclusive(0, 2) {
            0 => {
                let p = d.rng.uniform(0.05, 0.95);
                Draft { function: power(p), s: p * d.rng.uniform(0.05, 1.0), p: Some(p), q: None, window: d.window()? }
            }
            1 => {
                let p = d.rng.uniform(1.0, 3.0);
                Draft { function: power(p), s: d.rng.uniform(0.05, 1.0), p: Some(p), q: None, window: d.window()? }
            }
            _ => {
                let f = ScalarFunction::log10();
                let m = d.rng.uniform(1.0001, 2.0);
                let window = SpectralWindow::new(m, m * d.ratio())?;
                Draft { function: Some(f), s: d.certified_s(&f, &window)?, p: None, q: None, window }
            }
        },
        CheckKind::RatioKf => {
            let family = d.rng.range_inclusive(0, 2);
            let (f, window) = match family {
                0 => (ScalarFunction::Power { exponent: d.rng.uniform(1.2, 3.0) }, d.window()?),
                1 => (ScalarFunction::Power { exponent: d.rng.uniform(-2.0, -0.2) }, d.window()?),
                _ => {
                    let m = d.rng.uniform(1.0001, 2.0);
                    (ScalarFunction::log10(), SpectralWindow::new(m, m * d.ratio())?)
                }
            };
            let (m, big_m) = (window.lower(), window.upper());
            let (k, big_k) = (f.eval(m)?, f.eval(big_m)?);
            let slope = (big_k - k) / (big_m - m);
            let q = match family {
                // The interval contains p; |q| is capped to keep t^q finite.
                0 => d.inside((slope * big_m / big_k).max(1.0), (slope * m / k).min(Q_CAP))?,
                1 => d.inside((slope * big_m / big_k).max(-Q_CAP), (slope * m / k).min(0.0))?,
                _ => {
                    let lo = slope * big_m / big_k;
                    let hi = (slope * m / k).min(10.0 * lo).min(Q_CAP.max(2.0 * lo));
                    let u = d.inside(0.0, 1.0)?;
                    lo * libm::pow(hi / lo, u)
                }
            };
            let s = match f {
                ScalarFunction::Power { .. } => d.rng.uniform(0.05, 1.0),
                ScalarFunction::Log { .. } => d.certified_s(&f, &window)?,
            };
            let p = if let ScalarFunction::Power { exponent } = f { Some(exponent) } else { None };
            Draft { function: Some(f), s, p, q: Some(q), window }
        }
        CheckKind::RatioEndpoint | CheckKind::DiffEndpoint | CheckKind::OrderRatio | CheckKind::OrderDiff => {
            let form = if matches!(check, CheckKind::RatioEndpoint | CheckKind::OrderRatio) { Form::Ratio } else { Form::Difference };
            let (p, q, window) = d.power_window(form)?;
            let cap = if matches!(check, CheckKind::OrderRatio | CheckKind::OrderDiff) { p.min(q) } else { p };
            Draft { function: power(p), s: cap * d.rng.uniform(0.05, 1.0 - 1e-6), p: Some(p), q: Some(q), window }
        }
        CheckKind::DiffKfd => {
            let window = d.window()?;
            let concave = d.rng.range_inclusive(0, 1) == 1;
            let feasible = |p: f64, q: f64| {
                BoundSpec::from_function(&ScalarFunction::Power { exponent: p }, window, q).map(|spec| classify(&spec, Form::Difference).tag == RegimeTag::DiffI).unwrap_or(false)
            };
            let mut chosen = None;
            if concave {
                let p = d.rng.uniform(0.05, 0.95);
                for _ in 0..MAX_DRAWS {
                    let q = d.rng.uniform(1.01, 4.0);
                    if feasible(p, q) {
                        chosen = Some((p, q, p * d.rng.uniform(0.05, 1.0)));
                        break;
                    }
                }
            }
            let (p, q, s) = match chosen {
                Some(c) => c,
                None => {
                    let p = d.rng.uniform(1.2, 3.0);
                    let mut q = p;
                    for _ in 0..MAX_DRAWS / 2 {
                        let candidate = d.rng.uniform((p - 1.0).max(1.01), p + 1.0);
                        if feasible(p, candidate) {
                            q = candidate;
                            break;
                        }
                    }
                    (p, q, d.rng.uniform(0.05, 1.0))
                }
            };
            Draft { function: power(p), s, p: Some(p), q: Some(q), window }
        }
        CheckKind::HolderI => {
            let q = d.rng.uniform(0.05, 0.95);
            Draft { function: None, s: q * d.rng.uniform(0.05, 1.0), p: None, q: Some(q), window: d.window()? }
        }
        CheckKind::HolderII => {
            let q = d.rng.uniform(1.05, 4.0);
            Draft { function: None, s: d.rng.uniform(0.05, 1.0 / q), p: None, q: Some(q), window: d.window()? }
        }
        CheckKind::Classical => Draft { function: None, s: 1.0, p: None, q: None, window: d.window()? },
    })
}

fn sample(cfg: &FuzzConfig, check: CheckKind, index: u64) -> Result<Instance> {
    cfg.validate()?;
    let mut d = Draw { cfg, rng: SplitMix64::new(stream_seed(cfg.seed ^ check.salt(), index)) };
    let n = d.rng.range_inclusive(cfg.min_dim, cfg.max_dim);
    let Draft { function, s, p, q, window } = draft(&mut d, check)?;
    let a = random_matrix(&mut d.rng, &window, n)?;
    let partner = match check {
        CheckKind::OrderRatio | CheckKind::OrderDiff => Some(partner(&mut d.rng, &a, &window)?.to_rows()),
        _ => None,
    };
    let mut vectors = Vec::with_capacity(cfg.random_vectors);
    for _ in 0..cfg.random_vectors {
        vectors.push(random_unit_vector(&mut d.rng, n)?.into_vec());
    }
    let mixture_angle = d.rng.uniform(0.0, core::f64::consts::FRAC_PI_2);
    Ok(Instance { check, seed: cfg.seed, index, function, s, p, q, window, n, matrix: a.to_rows(), partner, vectors, mixture_angle })
}

/// `B ≥ A`: `A` itself, `A` plus a full-rank positive matrix, or `A` plus a
/// rank-one term.
fn partner(rng: &mut SplitMix64, a: &HermitianMatrix, w: &SpectralWindow) -> Result<HermitianMatrix> {
    let n = a.order();
    match rng.range_inclusive(0, 3) {
        0 => Ok(a.clone()),
        1 | 2 => {
            let scale = rng.uniform(0.0, w.upper());
            let p = random_matrix(rng, &SpectralWindow::new(0.01, 1.0)?, n)?;
            a.add(&p.scale(scale))
        }
        _ => {
            let scale = rng.uniform(0.0, w.upper());
            let v = random_unit_vector(rng, n)?;
            let v = v.as_slice();
            let data = (0..n * n).map(|k| scale * v[k / n] * v[k % n]).collect();
            a.add(&HermitianMatrix::from_row_major(n, data)?)
        }
    }
}

fn evaluate(cfg: &FuzzConfig, instance: &Instance, tolerance: f64) -> Result<Verdict> {
    let a = HermitianMatrix::from_rows(&instance.matrix)?;
    let mut op = Operator::with_tolerance(a, tolerance)?;
    if cfg.padding > 1.0 {
        op = op.padded(cfg.padding)?;
    }
    let s = instance.s;
    let mut verdict = match instance.check {
        CheckKind::OrderRatio | CheckKind::OrderDiff => {
            let b = Operator::with_tolerance(HermitianMatrix::from_rows(instance.partner.as_deref().unwrap_or(&[]))?, tolerance)?;
            let variant = if instance.check == CheckKind::OrderRatio { OrderVariant::Ratio } else { OrderVariant::Difference };
            let (p, q) = (require(instance.p, "p")?, require(instance.q, "q")?);
            verify_order_variant(variant, &op, &b, p, q, s)?
        }
        check => {
            let probes = probes(&op, instance)?;
            let q = instance.q;
            let cert = match instance.function {
                Some(f) => Some(certify(&f, &op.window()?, s, cfg.grid, cfg.grid)?),
                None => None,
            };
            let check_one: &dyn Fn(&UnitVector) -> Result<Verdict> = match check {
                CheckKind::HolderI | CheckKind::HolderII => &|x| verify_holder_mccarthy(&op, require(q, "q")?, s, x),
                CheckKind::Classical => &|x| verify_classical_kantorovich(&op, x),
                _ => &|x| verify_function_check(instance, &op, x, cert.as_ref()),
            };
            let mut worst: Option<Verdict> = None;
            for x in &probes {
                let v = check_one(x)?;
                worst = Some(match worst {
                    Some(prev) => prev.worse(v),
                    None => v,
                });
            }
            worst.ok_or(Error::Degenerate("no probe vectors"))?
        }
    };
    if !(verdict.lhs.is_finite() && verdict.rhs.is_finite() && verdict.margin.is_finite()) {
        return Err(Error::Degenerate("non-finite inequality sides"));
    }
    verdict.params.seed = Some(instance.seed);
    verdict.params.index = Some(instance.index);
    Ok(verdict)
}

fn verify_function_check(instance: &Instance, op: &Operator, x: &UnitVector, cert: Option<&SConvexityCertificate>) -> Result<Verdict> {
    let (Some(f), Some(cert)) = (instance.function, cert) else {
        return Err(Error::Degenerate("instance has no function"));
    };
    match instance.check {
        CheckKind::Jensen => verify_jensen_with(&f, instance.s, op, x, cert),
        CheckKind::RatioKf | CheckKind::RatioEndpoint => verify_ratio_with(&f, instance.s, require(instance.q, "q")?, op, x, cert),
        _ => verify_diff_with(&f, instance.s, require(instance.q, "q")?, op, x, cert),
    }
}

fn require(value: Option<f64>, name: &'static str) -> Result<f64> {
    value.ok_or(Error::Degenerate(match name {
        "p" => "instance has no p",
        _ => "instance has no q",
    }))
}

/// Extreme eigenvectors, the Gaussian vectors and the eigenvector mixture.
fn probes(op: &Operator, instance: &Instance) -> Result<Vec<UnitVector>> {
    let mut extra = Vec::with_capacity(instance.vectors.len() + 1);
    for v in &instance.vectors {
        extra.push(UnitVector::normalize(v.clone())?);
    }
    let (lo, hi) = (op.min_eigenvector(), op.max_eigenvector());
    let (c, s) = (libm::cos(instance.mixture_angle), libm::sin(instance.mixture_angle));
    let mix: Vec<f64> = lo.as_slice().iter().zip(hi.as_slice()).map(|(a, b)| c * a + s * b).collect();
    extra.push(UnitVector::normalize(mix)?);
    Ok(op.probe_vectors(&extra))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, instances: u64, checks: Vec<CheckKind>) -> FuzzConfig {
        FuzzConfig { seed, instances, checks, max_dim: 6, ..FuzzConfig::default() }
    }

    #[test]
    fn empty_campaign() {
        let report = fuzz_campaign(&small(1, 0, CheckKind::ALL.to_vec())).unwrap();
        assert!(report.checks.iter().all(|c| c.attempted == 0 && c.worst.is_none()));
    }

    #[test]
    fn counts_add_up_and_repeat() {
        let cfg = small(7, 12, CheckKind::ALL.to_vec());
        let a = fuzz_campaign(&cfg).unwrap();
        for c in &a.checks {
            assert_eq!(c.attempted, c.passed + c.failed + c.errors, "{}", c.check_id);
            assert_eq!(c.attempted, 12);
        }
        assert_eq!(a, fuzz_campaign(&cfg).unwrap());
    }

    #[test]
    fn shards_merge_to_sequential() {
        let cfg = small(3, 10, vec![CheckKind::RatioEndpoint, CheckKind::HolderI]);
        let sequential = fuzz_campaign(&cfg).unwrap();
        for (i, &check) in cfg.checks.iter().enumerate() {
            let mut merged = run_shard(&cfg, check, 0..4);
            merged.merge(run_shard(&cfg, check, 4..7), cfg.failure_cap);
            merged.merge(run_shard(&cfg, check, 7..10), cfg.failure_cap);
            assert_eq!(merged, sequential.checks[i]);
        }
    }

    #[test]
    fn instances_replay() {
        let cfg = small(5, 0, vec![]);
        for check in CheckKind::ALL {
            let outcome = run_instance(&cfg, check, 2);
            if let (Some(instance), Ok(v)) = (&outcome.instance, &outcome.verdict) {
                assert_eq!(&replay(&cfg, instance).unwrap(), v);
                assert_eq!(run_instance(&cfg, check, 2), outcome);
            }
        }
    }

    #[test]
    fn parses_groups() {
        assert_eq!(CheckKind::parse_group("ratio").unwrap(), vec![CheckKind::RatioKf, CheckKind::RatioEndpoint]);
        assert_eq!(CheckKind::parse_group("jensen").unwrap(), vec![CheckKind::Jensen]);
        assert_eq!(CheckKind::parse_group("all").unwrap().len(), 10);
        assert!(CheckKind::parse_group("nope").is_err());
        for c in CheckKind::ALL {
            assert_eq!(c.id().parse::<CheckKind>().unwrap(), c);
        }
    }
}
