use alloc::format;

use crate::bounds::{classify, BoundSpec, Form};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::SpectralWindow;
use crate::rng::SplitMix64;

const SCAN_POINTS: usize = 4000;
const SCAN_MIN_EXP: f64 = -6.0;
const SCAN_MAX_EXP: f64 = 6.0;
const BISECTION_TOL: f64 = 1e-10;

/// Upper endpoints `M` for which `t^p` with exponent `q` satisfies the window
/// condition on `[m, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum FeasibleSet {
    Empty,
    Interval {
        /// The fixed lower endpoint `m`.
        lower: f64,
        /// Smallest feasible `M`, or `m` itself (excluded) when `from_lower`.
        start: f64,
        /// Largest feasible `M`, or the scan limit when `unbounded`.
        end: f64,
        from_lower: bool,
        unbounded: bool,
        /// More feasible runs exist beyond `end`.
        fragmented: bool,
    },
}

impl FeasibleSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, FeasibleSet::Empty)
    }

    pub fn contains(&self, upper: f64) -> bool {
        match *self {
            FeasibleSet::Empty => false,
            FeasibleSet::Interval { lower, start, end, from_lower, unbounded, .. } => {
                let above = if from_lower { upper > lower } else { upper >= start };
                above && (unbounded || upper <= end)
            }
        }
    }

    /// Intersection with `[lo, hi]` as a closed range, if nonempty.
    pub fn clamp(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        match *self {
            FeasibleSet::Empty => None,
            FeasibleSet::Interval { start, end, unbounded, .. } => {
                let a = lo.max(start);
                let b = if unbounded { hi } else { hi.min(end) };
                (a < b).then_some((a, b))
            }
        }
    }

    /// Log-uniform draw of `M` from the interior of `[lo, hi] ∩ self`, keeping
    /// clear of the boundary by a relative `1e-3` of the range.
    pub fn sample(&self, rng: &mut SplitMix64, lo: f64, hi: f64) -> Option<f64> {
        let (a, b) = self.clamp(lo, hi)?;
        let (la, lb) = (libm::log(a), libm::log(b));
        let u = rng.uniform(1e-3, 1.0 - 1e-3);
        Some(libm::exp(la + u * (lb - la)))
    }
}

fn feasible(p: f64, q: f64, lower: f64, upper: f64, form: Form) -> bool {
    let Ok(w) = SpectralWindow::new(lower, upper) else {
        return false;
    };
    let f = ScalarFunction::Power { exponent: p };
    match BoundSpec::from_function(&f, w, q) {
        Ok(spec) => classify(&spec, form).is_feasible(),
        Err(_) => false,
    }
}

/// Bisects between a point where `feasible == inside_at_lo` and one where it
/// is not, returning the end that satisfies the condition.
fn refine(mut lo: f64, mut hi: f64, feasible_at_lo: bool, pred: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > BISECTION_TOL * lo.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if pred(mid) == feasible_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if feasible_at_lo {
        lo
    } else {
        hi
    }
}

/// Feasible `M` for the power-function window condition with `m = lower`.
///
/// `Form::Ratio` uses `M^(p−1)q ≤ (M^p − m^p)/(M − m) ≤ m^(p−1)q`, which is
/// scale covariant, so `lower = 1` characterizes every window by its ratio.
/// `Form::Difference` uses `qM^(q−1) ≤ (M^p − m^p)/(M − m) ≤ qm^(q−1)`,
/// which is not, so the lower endpoint matters.
///
/// The set is located by scanning `M/m − 1` log-uniformly over
/// `[1e-6, 1e6]`; the first feasible run is reported and its boundaries are
/// refined by bisection to `1e-10`.
pub fn feasible_m_for_power(p: f64, q: f64, lower: f64, form: Form) -> Result<FeasibleSet> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("window search needs 0 < p, q < 1, got p={p}, q={q}")));
    }
    if !(lower.is_finite() && lower > 0.0) {
        return Err(Error::InvalidParameter(format!("lower endpoint must be positive, got {lower}")));
    }
    let pred = |upper: f64| feasible(p, q, lower, upper, form);
    let point = |i: usize| {
        let e = SCAN_MIN_EXP + (SCAN_MAX_EXP - SCAN_MIN_EXP) * i as f64 / (SCAN_POINTS - 1) as f64;
        lower * (1.0 + libm::pow(10.0, e))
    };
    let Some(first) = (0..SCAN_POINTS).find(|&i| pred(point(i))) else {
        return Ok(FeasibleSet::Empty);
    };
    let last = (first..SCAN_POINTS).take_while(|&i| pred(point(i))).last().unwrap_or(first);
    let fragmented = (last + 1..SCAN_POINTS).any(|i| pred(point(i)));
    let from_lower = first == 0;
    let start = if from_lower { lower } else { refine(point(first - 1), point(first), false, pred) };
    let unbounded = last == SCAN_POINTS - 1;
    let end = if unbounded { point(last) } else { refine(point(last), point(last + 1), true, pred) };
    Ok(FeasibleSet::Interval { lower, start, end, from_lower, unbounded, fragmented })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_exponents_are_unbounded() {
        let set = feasible_m_for_power(0.5, 0.5, 1.0, Form::Ratio).unwrap();
        let FeasibleSet::Interval { from_lower, unbounded, fragmented, .. } = set else { panic!("{set:?}") };
        assert!(from_lower && unbounded && !fragmented);
        for upper in [1.001, 2.0, 100.0, 1e6] {
            assert!(set.contains(upper));
        }
    }

    #[test]
    fn contains_hand_instance() {
        let set = feasible_m_for_power(0.9, 0.9, 1.0, Form::Ratio).unwrap();
        assert!(set.contains(2.0));
    }

    #[test]
    fn ratio_set_starts_away_from_one() {
        // (M^0.5 − 1)/(M − 1) ≤ 0.99 holds iff M ≥ (1/0.99 − 1)^-2 = 9801.
        let set = feasible_m_for_power(0.5, 0.99, 1.0, Form::Ratio).unwrap();
        let FeasibleSet::Interval { start, from_lower, unbounded, .. } = set else { panic!("{set:?}") };
        assert!(!from_lower && unbounded);
        assert!((start - 9801.0).abs() < 1e-5, "{start}");
        assert!(!set.contains(9800.0) && set.contains(9802.0));
    }

    #[test]
    fn boundaries_are_sharp() {
        let set = feasible_m_for_power(0.3, 0.6, 1.0, Form::Difference).unwrap();
        if let FeasibleSet::Interval { start, end, from_lower, unbounded, .. } = set {
            if !from_lower {
                assert!(feasible(0.3, 0.6, 1.0, start, Form::Difference));
                assert!(!feasible(0.3, 0.6, 1.0, start * (1.0 - 1e-8), Form::Difference));
            }
            if !unbounded {
                assert!(feasible(0.3, 0.6, 1.0, end, Form::Difference));
                assert!(!feasible(0.3, 0.6, 1.0, end * (1.0 + 1e-8), Form::Difference));
            }
        }
        assert!(feasible_m_for_power(1.5, 0.5, 1.0, Form::Ratio).is_err());
    }

    #[test]
    fn sampling_stays_inside() {
        let set = feasible_m_for_power(0.5, 0.7, 1.0, Form::Ratio).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            if let Some(upper) = set.sample(&mut rng, 1.01, 1e5) {
                assert!(set.contains(upper));
                assert!(feasible(0.5, 0.7, 1.0, upper, Form::Ratio));
            }
        }
    }
}
