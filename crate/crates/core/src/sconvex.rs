//! Grid certification of s-convexity in the second sense,
//!
//! ```text
//! f(λx + (1−λ)y) ≤ λˢ f(x) + (1−λ)ˢ f(y),   x, y ∈ [m, M], λ ∈ [0, 1],
//! ```
//!
//! plus the maximal certified `s` and the `theta` estimate used for the
//! logarithm on windows with `m ≥ 1`.
//!
//! A certificate only claims "no violation on this grid": violations are
//! measured relative to `max(1, |lhs|, |rhs|)` and must not exceed
//! [`VIOLATION_TOLERANCE`].

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
pub use crate::function::ScalarFunction;
use crate::linalg::SpectralWindow;

pub const VIOLATION_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_ALPHA_FLOOR: f64 = 1e-3;
/// Absolute resolution of [`max_feasible_s`].
pub const S_RESOLUTION: f64 = 1e-4;

/// A point `(x, y, λ)` at which the inequality fails.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "lowercase"))]
pub enum CertificateStatus {
    Certified,
    Refuted { witness: Witness },
}

/// How a certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CertificateBasis {
    /// Exhaustive evaluation on an `nx × nx × nl` grid.
    Grid,
    /// `t^r` with `0 < s ≤ r < 1`, or a nonnegative convex power (`r ≥ 1`
    /// or `r ≤ 0`), which is s-convex for every `s ∈ (0, 1]`.
    PowerLemma,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SConvexityCertificate {
    pub function: ScalarFunction,
    pub s: f64,
    pub window: SpectralWindow,
    pub basis: CertificateBasis,
    pub grid_points: usize,
    pub lambda_points: usize,
    /// Largest relative violation seen on the grid (≤ 0 means strict slack).
    pub max_violation: f64,
    pub status: CertificateStatus,
}

impl SConvexityCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.status, CertificateStatus::Certified)
    }

    /// True when this certificate implies s-convexity of `f` with exponent
    /// `s` on `window` (certificates for a larger `s` imply smaller ones).
    pub fn supports(&self, f: &ScalarFunction, s: f64, window: &SpectralWindow) -> bool {
        self.is_certified() && self.function == *f && s <= self.s && self.window.covers(window)
    }
}

fn validate(f: &ScalarFunction, w: &SpectralWindow, nx: usize, nl: usize) -> Result<()> {
    if nx < 3 || nl < 3 {
        return Err(Error::InvalidParameter(format!("grid sizes must be ≥ 3, got nx={nx}, nl={nl}")));
    }
    if !f.is_defined_on(w.lower(), w.upper()) {
        return Err(Error::Domain(format!("{f} is not defined on [{}, {}]", w.lower(), w.upper())));
    }
    Ok(())
}

fn validate_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParameter(format!("s must lie in (0, 1], got {s}")));
    }
    Ok(())
}

/// `nx` equally spaced points on `[lo, hi]`, endpoints exact.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * (i as f64 / (n - 1) as f64)).collect();
    pts[n - 1] = hi;
    pts
}

/// Uniform λ grid on `[0, 1]` that always contains `0`, `1/2` and `1`.
fn lambda_grid(nl: usize) -> Vec<f64> {
    let mut pts = linspace(0.0, 1.0, nl);
    if nl.is_multiple_of(2) {
        pts.push(0.5);
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    } else {
        pts[nl / 2] = 0.5;
    }
    pts
}

struct Sweep {
    max_violation: f64,
    witness: Option<Witness>,
}

/// Scans the grid. With `stop_early`, returns at the first point whose
/// violation exceeds the tolerance.
fn sweep(f: &ScalarFunction, xs: &[f64], lambdas: &[f64], s: f64, stop_early: bool) -> Sweep {
    let fx: Vec<f64> = xs.iter().map(|&x| f.eval_unchecked(x)).collect();
    let weights: Vec<(f64, f64)> = lambdas.iter().map(|&l| (libm::pow(l, s), libm::pow(1.0 - l, s))).collect();
    let mut worst = Sweep { max_violation: f64::NEG_INFINITY, witness: None };
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            for (l, &lambda) in lambdas.iter().enumerate() {
                let z = lambda * x + (1.0 - lambda) * y;
                let lhs = f.eval_unchecked(z);
                let (wl, wr) = weights[l];
                let rhs = wl * fx[i] + wr * fx[j];
                let violation = (lhs - rhs) / 1.0f64.max(lhs.abs()).max(rhs.abs());
                if violation > worst.max_violation {
                    worst.max_violation = violation;
                    if violation > VIOLATION_TOLERANCE {
                        worst.witness = Some(Witness { x, y, lambda, lhs, rhs });
                        if stop_early {
                            return worst;
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Evaluates the s-convexity inequality on an `nx × nx × nl` grid.
pub fn check_s_convex(f: &ScalarFunction, w: &SpectralWindow, s: f64, nx: usize, nl: usize) -> Result<SConvexityCertificate> {
    validate_s(s)?;
    validate(f, w, nx, nl)?;
    let xs = linspace(w.lower(), w.upper(), nx);
    let lambdas = lambda_grid(nl);
    let result = sweep(f, &xs, &lambdas, s, false);
    let status = match result.witness {
        Some(witness) if result.max_violation > VIOLATION_TOLERANCE => CertificateStatus::Refuted { witness },
        _ => CertificateStatus::Certified,
    };
    Ok(SConvexityCertificate {
        function: *f,
        s,
        window: *w,
        basis: CertificateBasis::Grid,
        grid_points: nx,
        lambda_points: lambdas.len(),
        max_violation: result.max_violation,
        status,
    })
}

/// Certificate from the power lemma, when it applies.
///
/// `t^r` is s-convex for `0 < s ≤ r < 1`; for `r ≥ 1` or `r ≤ 0` it is convex
/// and positive on `(0, ∞)`, hence s-convex for every `s ∈ (0, 1]`.
pub fn power_lemma_certificate(f: &ScalarFunction, w: &SpectralWindow, s: f64) -> Option<SConvexityCertificate> {
    let ScalarFunction::Power { exponent } = *f else {
        return None;
    };
    if !(s > 0.0 && s <= 1.0) {
        return None;
    }
    let applies = exponent >= 1.0 || exponent <= 0.0 || s <= exponent;
    applies.then_some(SConvexityCertificate {
        function: *f,
        s,
        window: *w,
        basis: CertificateBasis::PowerLemma,
        grid_points: 0,
        lambda_points: 0,
        max_violation: 0.0,
        status: CertificateStatus::Certified,
    })
}

/// The power lemma when it applies, otherwise a grid certificate.
pub fn certify(f: &ScalarFunction, w: &SpectralWindow, s: f64, nx: usize, nl: usize) -> Result<SConvexityCertificate> {
    match power_lemma_certificate(f, w, s) {
        Some(cert) => Ok(cert),
        None => check_s_convex(f, w, s, nx, nl),
    }
}

/// Largest `s ∈ (0, 1]` (to within [`S_RESOLUTION`]) certified on the grid,
/// found by bisection; `0` when even `s = 1e-4` is refuted.
///
/// Requires `f ≥ 0` on the window: for nonnegative values the right-hand side
/// decreases in `s`, which makes the certified set an interval `(0, s*]`.
pub fn max_feasible_s(f: &ScalarFunction, w: &SpectralWindow, nx: usize, nl: usize) -> Result<f64> {
    validate(f, w, nx, nl)?;
    let (fm, f_upper) = (f.eval(w.lower())?, f.eval(w.upper())?);
    // Both families are monotone, so the endpoint values bound the range.
    if fm < 0.0 || f_upper < 0.0 {
        return Err(Error::Precondition(format!("{f} takes negative values on [{}, {}]", w.lower(), w.upper())));
    }
    let xs = linspace(w.lower(), w.upper(), nx);
    let lambdas = lambda_grid(nl);
    let certified = |s: f64| sweep(f, &xs, &lambdas, s, true).witness.is_none();
    if certified(1.0) {
        return Ok(1.0);
    }
    let mut lo = S_RESOLUTION;
    if !certified(lo) {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while hi - lo > S_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if certified(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Grid minimum of the ratio bounding admissible `s` for the logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThetaEstimate {
    /// `min(case_one, case_two)`.
    pub theta: f64,
    /// Minimum over `α ∈ [ε, 1/2]` with denominator `ln α`.
    pub case_one: f64,
    /// Minimum over `α ∈ [1/2, 1−ε]` with denominator `ln(1−α)`.
    pub case_two: f64,
    /// `(x, y, α)` attaining `theta`.
    pub argmin: (f64, f64, f64),
    pub alpha_floor: f64,
    pub window: SpectralWindow,
    pub grid_points: usize,
    pub alpha_points: usize,
}

/// Minimum over `m ≤ x < y ≤ M` and the two `α` ranges of
///
/// ```text
/// ln( ln(αx + (1−α)y) / ln(xy) ) / ln(α)        α ∈ [ε, 1/2]
/// ln( ln(αx + (1−α)y) / ln(xy) ) / ln(1−α)      α ∈ [1/2, 1−ε]
/// ```
///
/// The ratio is independent of the logarithm base. Its infimum as `α → 0` is
/// zero, so the floor `ε` is part of the result.
pub fn theta_log(w: &SpectralWindow, eps: f64, nx: usize, nl: usize) -> Result<ThetaEstimate> {
    if w.lower() < 1.0 + 1e-9 {
        return Err(Error::Domain(format!("theta needs m > 1, got m = {}", w.lower())));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Domain(format!("alpha floor must lie in (0, 1/2], got {eps}")));
    }
    if nx < 2 || nl < 2 {
        return Err(Error::InvalidParameter(format!("grid sizes must be ≥ 2, got nx={nx}, nl={nl}")));
    }
    let xs = linspace(w.lower(), w.upper(), nx);
    let alphas_one = linspace(eps, 0.5, nl);
    let alphas_two = linspace(0.5, 1.0 - eps, nl);
    let mut best_one = (f64::INFINITY, (0.0, 0.0, 0.0));
    let mut best_two = (f64::INFINITY, (0.0, 0.0, 0.0));
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            let log_xy = libm::log(x * y);
            let ratio = |alpha: f64| libm::log(libm::log(alpha * x + (1.0 - alpha) * y) / log_xy);
            for &alpha in &alphas_one {
                let v = ratio(alpha) / libm::log(alpha);
                if v < best_one.0 {
                    best_one = (v, (x, y, alpha));
                }
            }
            for &alpha in &alphas_two {
                let v = ratio(alpha) / libm::log(1.0 - alpha);
                if v < best_two.0 {
                    best_two = (v, (x, y, alpha));
                }
            }
        }
    }
    let (theta, argmin) = if best_one.0 <= best_two.0 { best_one } else { best_two };
    Ok(ThetaEstimate {
        theta,
        case_one: best_one.0,
        case_two: best_two.0,
        argmin,
        alpha_floor: eps,
        window: *w,
        grid_points: nx,
        alpha_points: nl,
    })
}
