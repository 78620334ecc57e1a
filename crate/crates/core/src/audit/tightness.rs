use alloc::boxed::Box;
use alloc::format;
use alloc::vec;

use super::verify::{verify_classical_kantorovich, verify_diff_with, verify_holder_mccarthy, verify_jensen_with, verify_ratio_with};
use super::{Operator, Verdict};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::{HermitianMatrix, SpectralWindow, UnitVector};
use crate::rng::SplitMix64;
use crate::sconvex::{certify, DEFAULT_GRID};

const HALF_PI: f64 = core::f64::consts::FRAC_PI_2;
const MIN_STEP: f64 = 1e-12;

/// Inputs of a tightness search; `function` is ignored by the checks that do
/// not take one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TightnessParams {
    pub function: ScalarFunction,
    pub s: f64,
    pub q: f64,
    pub window: SpectralWindow,
}

type Probe<'a> = Box<dyn Fn(&UnitVector) -> Result<Verdict> + 'a>;

/// Pushes a check towards equality on the two-point matrix `diag(m, M)`.
///
/// Unit vectors `x(θ) = (cos θ, sin θ)` are searched by pattern search from
/// `θ = π/4` and `iters` random starts; the verdict with the smallest
/// normalized margin is returned.
///
/// `check_id` is one of `jensen`, `ratio` (or `ratio-kf`, `ratio-endpoint`),
/// `diff` (or `diff-endpoint`, `diff-kfd`), `holder-mccarthy` (either
/// range suffix) and `classical-kantorovich`.
pub fn tightness_search(check_id: &str, params: &TightnessParams, iters: usize, seed: u64) -> Result<Verdict> {
    let TightnessParams { function: f, s, q, window: w } = *params;
    let op = Operator::new(HermitianMatrix::diagonal(&[w.lower(), w.upper()])?)?;
    let evaluate: Probe<'_> = match check_id {
        "jensen" | "ratio" | "ratio-kf" | "ratio-endpoint" | "diff" | "diff-endpoint" | "diff-kfd" => {
            let cert = certify(&f, &w, s, DEFAULT_GRID, DEFAULT_GRID)?;
            let kind = check_id.split('-').next().unwrap_or(check_id);
            Box::new(move |x| match kind {
                "jensen" => verify_jensen_with(&f, s, &op, x, &cert),
                "ratio" => verify_ratio_with(&f, s, q, &op, x, &cert),
                _ => verify_diff_with(&f, s, q, &op, x, &cert),
            })
        }
        "holder-mccarthy" | "holder-mccarthy-i" | "holder-mccarthy-ii" => Box::new(|x| verify_holder_mccarthy(&op, q, s, x)),
        "classical-kantorovich" | "classical" => Box::new(|x| verify_classical_kantorovich(&op, x)),
        other => return Err(Error::UnknownCheck(format!("{other} has no tightness search"))),
    };
    let at = |theta: f64| -> Result<Verdict> {
        let mut v = evaluate(&UnitVector::normalize(vec![libm::cos(theta), libm::sin(theta)])?)?;
        v.params.seed = Some(seed);
        Ok(v)
    };
    let mut rng = SplitMix64::new(seed);
    let mut best = at(HALF_PI / 2.0)?;
    for start in 0..=iters {
        let mut theta = if start == 0 { HALF_PI / 2.0 } else { rng.uniform(0.0, HALF_PI) };
        let mut current = at(theta)?;
        let mut step = HALF_PI / 8.0;
        while step > MIN_STEP {
            let mut moved = false;
            for candidate in [theta - step, theta + step] {
                let candidate = candidate.clamp(0.0, HALF_PI);
                let v = at(candidate)?;
                if v.normalized_margin() < current.normalized_margin() {
                    theta = candidate;
                    current = v;
                    moved = true;
                    break;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best = best.worse(current);
    }
    Ok(best)
}
