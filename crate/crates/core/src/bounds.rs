//! Extrema of the ratio and difference envelopes
//!
//! ```text
//! h(t) = t^(−q) · (k + (K−k)/(M−m) · (t−m))
//! u(t) = k + (K−k)/(M−m) · (t−m) − t^q
//! ```
//!
//! on `[m, M]`, the regime each extremum formula is valid in, and the
//! constants `K_f`, `K_f^d` and `K_log` built from them.
//!
//! Hypotheses are checked exactly as written (strict where strict); every
//! condition also carries its slack so near-boundary cases can be audited.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::SpectralWindow;

/// Conditions with `|slack|` below this are reported as marginal.
pub const MARGINAL_SLACK: f64 = 1e-9;

/// `(k, K, q)` on a window, with `k = f(m)` and `K = f(M)` when derived from a
/// function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundSpec {
    /// `k`, the value at `m`.
    pub lower_value: f64,
    /// `K`, the value at `M`.
    pub upper_value: f64,
    pub q: f64,
    pub window: SpectralWindow,
}

impl BoundSpec {
    pub fn new(window: SpectralWindow, lower_value: f64, upper_value: f64, q: f64) -> Result<Self> {
        if !(lower_value.is_finite() && upper_value.is_finite() && q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "k, K and q must be finite, got ({lower_value}, {upper_value}, {q})"
            )));
        }
        Ok(Self { lower_value, upper_value, q, window })
    }

    /// `k = f(m)`, `K = f(M)`.
    pub fn from_function(f: &ScalarFunction, window: SpectralWindow, q: f64) -> Result<Self> {
        Self::new(window, f.eval(window.lower())?, f.eval(window.upper())?, q)
    }

    /// Chord slope `(K − k)/(M − m)`.
    pub fn slope(&self) -> f64 {
        (self.upper_value - self.lower_value) / (self.window.upper() - self.window.lower())
    }

    /// `mK − Mk`.
    fn cross(&self) -> f64 {
        self.window.lower() * self.upper_value - self.window.upper() * self.lower_value
    }

    fn chord(&self, t: f64) -> f64 {
        self.lower_value + (self.upper_value - self.lower_value) / (self.window.upper() - self.window.lower()) * (t - self.window.lower())
    }
}

/// Ratio form (`h`, §2-type bounds) or difference form (`u`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Form {
    Ratio,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RegimeTag {
    /// `q > 1`, `K > k`, `K/M > k/m`: `h` has an interior maximum.
    RatioI,
    /// `q < 0`, `K < k`, `K/M < k/m`: `h` has an interior maximum.
    RatioII,
    /// `0 < q < 1`, `K > k`, `K/M < k/m`: interior minimum, maximum at an end.
    RatioMid,
    /// `0 < q < 1`, `K > k`: `u` has an interior minimum, maximum at an end.
    DiffLow,
    /// `q > 1`, `K > k`: `u` has an interior maximum.
    DiffI,
    /// `q < 0`, `K < k`: `u` has an interior maximum.
    DiffII,
    Infeasible,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::RatioI => "ratio-i",
            RegimeTag::RatioII => "ratio-ii",
            RegimeTag::RatioMid => "ratio-mid",
            RegimeTag::DiffLow => "diff-low",
            RegimeTag::DiffI => "diff-i",
            RegimeTag::DiffII => "diff-ii",
            RegimeTag::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One hypothesis `lhs < rhs` or `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Condition {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    /// `rhs − lhs`.
    pub slack: f64,
    pub holds: bool,
    pub marginal: bool,
}

impl Condition {
    fn new(label: &str, lhs: f64, rhs: f64, strict: bool) -> Self {
        let slack = rhs - lhs;
        let holds = if strict { slack > 0.0 } else { slack >= 0.0 };
        Self { label: label.to_string(), lhs, rhs, strict, slack, holds, marginal: slack.abs() < MARGINAL_SLACK }
    }

    fn less(label: &str, lhs: f64, rhs: f64) -> Self {
        Self::new(label, lhs, rhs, true)
    }

    fn less_eq(label: &str, lhs: f64, rhs: f64) -> Self {
        Self::new(label, lhs, rhs, false)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { "<" } else { "<=" };
        write!(f, "{} ({} {op} {}, slack {:e})", self.label, self.lhs, self.rhs, self.slack)
    }
}

/// Outcome of [`classify`]: the tag plus every condition that was evaluated.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Regime {
    pub tag: RegimeTag,
    pub form: Form,
    pub conditions: Vec<Condition>,
}

impl Regime {
    pub fn is_feasible(&self) -> bool {
        self.tag != RegimeTag::Infeasible
    }

    pub fn failed_conditions(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds)
    }

    pub fn marginal_count(&self) -> usize {
        self.conditions.iter().filter(|c| c.marginal).count()
    }

    fn into_error(self) -> Error {
        let failed: Vec<String> = self.failed_conditions().map(|c| c.to_string()).collect();
        Error::Regime(failed)
    }
}

/// Evaluates the hypotheses for `spec` in the requested form.
///
/// The branch is picked by the sign of `q`: `q > 1`, `q < 0` and `0 < q < 1`
/// select the three lemma variants; `q ∈ [0, 1]` boundaries are infeasible.
pub fn classify(spec: &BoundSpec, form: Form) -> Regime {
    let (m, big_m) = (spec.window.lower(), spec.window.upper());
    let (k, big_k, q) = (spec.lower_value, spec.upper_value, spec.q);
    let slope = spec.slope();
    let (tag, conditions) = match form {
        Form::Ratio => {
            let (k_m, big_k_m) = (k / m, big_k / big_m);
            if q > 1.0 {
                (
                    RegimeTag::RatioI,
                    vec![
                        Condition::less("k < K", k, big_k),
                        Condition::less("k/m < K/M", k_m, big_k_m),
                        Condition::less_eq("(k/m)q <= (K-k)/(M-m)", k_m * q, slope),
                        Condition::less_eq("(K-k)/(M-m) <= (K/M)q", slope, big_k_m * q),
                    ],
                )
            } else if q < 0.0 {
                (
                    RegimeTag::RatioII,
                    vec![
                        Condition::less("K < k", big_k, k),
                        Condition::less("K/M < k/m", big_k_m, k_m),
                        Condition::less_eq("(k/m)q <= (K-k)/(M-m)", k_m * q, slope),
                        Condition::less_eq("(K-k)/(M-m) <= (K/M)q", slope, big_k_m * q),
                    ],
                )
            } else if q > 0.0 && q < 1.0 {
                (
                    RegimeTag::RatioMid,
                    vec![
                        Condition::less("k < K", k, big_k),
                        Condition::less("K/M < k/m", big_k_m, k_m),
                        Condition::less_eq("(K/M)q <= (K-k)/(M-m)", big_k_m * q, slope),
                        Condition::less_eq("(K-k)/(M-m) <= (k/m)q", slope, k_m * q),
                        // Implied by K/M < k/m; it is the sign h''(t1) relies on.
                        Condition::less("0 < Mk - mK", 0.0, big_m * k - m * big_k),
                    ],
                )
            } else {
                (RegimeTag::Infeasible, vec![Condition::less("q not in {0, 1}", 0.0, -1.0)])
            }
        }
        Form::Difference => {
            let (at_m, at_big_m) = (q * libm::pow(m, q - 1.0), q * libm::pow(big_m, q - 1.0));
            if q > 0.0 && q < 1.0 {
                (
                    RegimeTag::DiffLow,
                    vec![
                        Condition::less("k < K", k, big_k),
                        Condition::less_eq("qM^(q-1) <= (K-k)/(M-m)", at_big_m, slope),
                        Condition::less_eq("(K-k)/(M-m) <= qm^(q-1)", slope, at_m),
                    ],
                )
            } else if q > 1.0 {
                (
                    RegimeTag::DiffI,
                    vec![
                        Condition::less("k < K", k, big_k),
                        Condition::less_eq("qm^(q-1) <= (K-k)/(M-m)", at_m, slope),
                        Condition::less_eq("(K-k)/(M-m) <= qM^(q-1)", slope, at_big_m),
                    ],
                )
            } else if q < 0.0 {
                (
                    RegimeTag::DiffII,
                    vec![
                        Condition::less("K < k", big_k, k),
                        Condition::less_eq("qM^(q-1) <= (K-k)/(M-m)", at_big_m, slope),
                        Condition::less_eq("(K-k)/(M-m) <= qm^(q-1)", slope, at_m),
                    ],
                )
            } else {
                (RegimeTag::Infeasible, vec![Condition::less("q not in {0, 1}", 0.0, -1.0)])
            }
        }
    };
    let tag = if conditions.iter().all(|c| c.holds) { tag } else { RegimeTag::Infeasible };
    Regime { tag, form, conditions }
}

fn check_in_window(t: f64, spec: &BoundSpec) -> Result<()> {
    if !(t > 0.0 && spec.window.contains(t)) {
        return Err(Error::Domain(format!("t = {t} is outside [{}, {}]", spec.window.lower(), spec.window.upper())));
    }
    Ok(())
}

/// `h(t)` for `t ∈ [m, M]`.
pub fn h_eval(t: f64, spec: &BoundSpec) -> Result<f64> {
    check_in_window(t, spec)?;
    Ok(libm::pow(t, -spec.q) * spec.chord(t))
}

/// `u(t)` for `t ∈ [m, M]`.
pub fn u_eval(t: f64, spec: &BoundSpec) -> Result<f64> {
    check_in_window(t, spec)?;
    Ok(spec.chord(t) - libm::pow(t, spec.q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ExtremumKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremumResult {
    /// Stationary point.
    pub t1: f64,
    /// Bound attained at `t1`.
    pub value: f64,
    /// Maximum over the endpoints when the interior point is a minimum:
    /// `max{k/m^q, K/M^q}` for `h`, `max{k − m^q, K − M^q}` for `u`.
    pub endpoint_bound: Option<f64>,
    pub kind: ExtremumKind,
    pub regime: Regime,
}

fn gate(spec: &BoundSpec, form: Form) -> Result<Regime> {
    let regime = classify(spec, form);
    if !regime.is_feasible() {
        return Err(regime.into_error());
    }
    Ok(regime)
}

/// Closed-form extremum of `h` in the regimes `RatioI`, `RatioII`, `RatioMid`.
pub fn h_extremum(spec: &BoundSpec) -> Result<ExtremumResult> {
    let (m, big_m) = (spec.window.lower(), spec.window.upper());
    let (k, big_k, q) = (spec.lower_value, spec.upper_value, spec.q);
    if big_k == k {
        return Err(Error::Degenerate("K == k"));
    }
    let cross = spec.cross();
    if cross == 0.0 {
        return Err(Error::Degenerate("mK - Mk == 0"));
    }
    let regime = gate(spec, Form::Ratio)?;
    let t1 = (q / (q - 1.0)) * cross / (big_k - k);
    let value = (m * big_k - big_m * k) / ((q - 1.0) * (big_m - m)) * libm::pow(((q - 1.0) * (big_k - k)) / (q * (m * big_k - big_m * k)), q);
    let (kind, endpoint_bound) = match regime.tag {
        RegimeTag::RatioMid => (ExtremumKind::Lower, Some((k / libm::pow(m, q)).max(big_k / libm::pow(big_m, q)))),
        _ => (ExtremumKind::Upper, None),
    };
    Ok(ExtremumResult { t1, value, endpoint_bound, kind, regime })
}

/// Closed-form extremum of `u` in the regimes `DiffLow`, `DiffI`, `DiffII`.
pub fn u_extremum(spec: &BoundSpec) -> Result<ExtremumResult> {
    let (m, big_m) = (spec.window.lower(), spec.window.upper());
    let (k, big_k, q) = (spec.lower_value, spec.upper_value, spec.q);
    if big_k == k {
        return Err(Error::Degenerate("K == k"));
    }
    let regime = gate(spec, Form::Difference)?;
    let t1 = libm::pow((big_k - k) / (q * (big_m - m)), 1.0 / (q - 1.0));
    let value = k + (big_k - k) / (big_m - m) * (t1 - m) - libm::pow(t1, q);
    let (kind, endpoint_bound) = match regime.tag {
        RegimeTag::DiffLow => (ExtremumKind::Lower, Some((k - libm::pow(m, q)).max(big_k - libm::pow(big_m, q)))),
        _ => (ExtremumKind::Upper, None),
    };
    Ok(ExtremumResult { t1, value, endpoint_bound, kind, regime })
}

/// `K_f(m, M, q)`, valid in `RatioI` and `RatioII`.
pub fn constant_kf(f: &ScalarFunction, w: &SpectralWindow, q: f64) -> Result<f64> {
    let spec = BoundSpec::from_function(f, *w, q)?;
    let ext = h_extremum(&spec)?;
    match ext.regime.tag {
        RegimeTag::RatioI | RegimeTag::RatioII => Ok(ext.value),
        _ => Err(Error::Regime(vec![format!("K_f needs q > 1 or q < 0 (regime {})", ext.regime.tag)])),
    }
}

/// `K_f^d(m, M, q)`, valid in `DiffI` and `DiffII`.
pub fn constant_kf_diff(f: &ScalarFunction, w: &SpectralWindow, q: f64) -> Result<f64> {
    let spec = BoundSpec::from_function(f, *w, q)?;
    let (m, big_m) = (w.lower(), w.upper());
    let (fm, f_big_m) = (spec.lower_value, spec.upper_value);
    if fm == f_big_m {
        return Err(Error::Degenerate("K == k"));
    }
    let regime = gate(&spec, Form::Difference)?;
    if !matches!(regime.tag, RegimeTag::DiffI | RegimeTag::DiffII) {
        return Err(Error::Regime(vec![format!("K_f^d needs q > 1 or q < 0 (regime {})", regime.tag)]));
    }
    let tau = libm::pow((f_big_m - fm) / (q * (big_m - m)), 1.0 / (q - 1.0));
    Ok(fm + (f_big_m - fm) / (big_m - m) * (tau - m) - libm::pow(tau, q))
}

/// `K_log(1, M, q) = log₁₀(M)/((q−1)(M−1)) · ((q−1)/q)^q` for `q ≥ M/(M−1)`.
pub fn constant_klog(upper: f64, q: f64) -> Result<f64> {
    if !(upper.is_finite() && upper > 1.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("K_log needs finite M > 1 and finite q, got M={upper}, q={q}")));
    }
    let threshold = upper / (upper - 1.0);
    if q < threshold {
        return Err(Error::Regime(vec![Condition::less_eq("M/(M-1) <= q", threshold, q).to_string()]));
    }
    Ok(libm::log10(upper) / ((q - 1.0) * (upper - 1.0)) * libm::pow((q - 1.0) / q, q))
}

/// Constant of the ratio-form bound `⟨f(A)x,x⟩ ≤ 2^(1−s)·c·⟨Ax,x⟩^q`:
/// `K_f` in `RatioI`/`RatioII`, `max{k/m^q, K/M^q}` in `RatioMid`.
pub fn ratio_constant(spec: &BoundSpec) -> Result<(f64, RegimeTag)> {
    let ext = h_extremum(spec)?;
    let tag = ext.regime.tag;
    Ok((ext.endpoint_bound.unwrap_or(ext.value), tag))
}

/// Constant of the difference-form bound `⟨f(A)x,x⟩ ≤ 2^(1−s)(c + ⟨Ax,x⟩^q)`:
/// `K_f^d` in `DiffI`/`DiffII`, `max{k − m^q, K − M^q}` in `DiffLow`.
///
/// In `DiffLow`, `u` is convex so its maximum sits at an endpoint whatever the
/// slope; the hypotheses are still enforced.
pub fn difference_constant(spec: &BoundSpec) -> Result<(f64, RegimeTag)> {
    let ext = u_extremum(spec)?;
    let tag = ext.regime.tag;
    Ok((ext.endpoint_bound.unwrap_or(ext.value), tag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: f64, big_m: f64, k: f64, big_k: f64, q: f64) -> BoundSpec {
        BoundSpec::new(SpectralWindow::new(m, big_m).unwrap(), k, big_k, q).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * 1.0f64.max(b.abs())
    }

    #[test]
    fn h_examples() {
        assert!(close(h_eval(4.0 / 3.0, &spec(1.0, 2.0, 1.0, 4.0, 2.0)).unwrap(), 1.125, 1e-15));
        // 2^(-1/2) · 4/3
        assert!(close(h_eval(2.0, &spec(1.0, 4.0, 1.0, 2.0, 0.5)).unwrap(), 0.942_809_041_582_063_4, 1e-15));
        let flat = spec(1.5, 2.0, 3.0, 3.0, 0.7);
        assert_eq!(h_eval(1.5, &flat).unwrap(), 3.0 / libm::pow(1.5, 0.7));
        assert!(matches!(h_eval(0.5, &flat), Err(Error::Domain(_))));
        assert!(matches!(h_eval(2.5, &flat), Err(Error::Domain(_))));
    }

    #[test]
    fn u_examples() {
        assert!(close(u_eval(2.25, &spec(1.0, 4.0, 1.0, 2.0, 0.5)).unwrap(), -1.0 / 12.0, 1e-15));
        assert!(close(u_eval(1.5, &spec(1.0, 2.0, 1.0, 4.0, 2.0)).unwrap(), 0.25, 1e-15));
        let flat = spec(1.5, 2.0, 3.0, 3.0, 0.7);
        assert_eq!(u_eval(1.5, &flat).unwrap(), 3.0 - libm::pow(1.5, 0.7));
        assert!(matches!(u_eval(3.0, &flat), Err(Error::Domain(_))));
    }

    #[test]
    fn classify_examples() {
        let r = classify(&spec(1.0, 2.0, 1.0, 4.0, 2.0), Form::Ratio);
        assert_eq!(r.tag, RegimeTag::RatioI);
        assert_eq!(r.conditions.len(), 4);
        assert_eq!(r.conditions[2].lhs, 2.0);
        assert_eq!(r.conditions[2].rhs, 3.0);
        assert_eq!(r.conditions[3].rhs, 4.0);

        let r = classify(&spec(1.0, 4.0, 1.0, 2.0, 0.5), Form::Ratio);
        assert_eq!(r.tag, RegimeTag::RatioMid);
        assert_eq!(r.conditions[2].lhs, 0.25);
        assert!(close(r.conditions[2].rhs, 1.0 / 3.0, 1e-15));
        assert_eq!(r.conditions[3].rhs, 0.5);

        let r = classify(&spec(1.0, 2.0, 1.0, 1.0, 2.0), Form::Ratio);
        assert_eq!(r.tag, RegimeTag::Infeasible);
        assert_eq!(r.failed_conditions().next().unwrap().label, "k < K");

        assert_eq!(classify(&spec(1.0, 2.0, 1.0, 4.0, 1.0), Form::Ratio).tag, RegimeTag::Infeasible);
        assert_eq!(classify(&spec(1.0, 2.0, 1.0, 4.0, 0.0), Form::Difference).tag, RegimeTag::Infeasible);
        assert_eq!(classify(&spec(1.0, 2.0, 1.0, 4.0, 2.0), Form::Difference).tag, RegimeTag::DiffI);
        assert_eq!(classify(&spec(1.0, 4.0, 1.0, 2.0, 0.5), Form::Difference).tag, RegimeTag::DiffLow);
    }

    #[test]
    fn marginal_conditions_are_flagged() {
        // Power(2) on (1, 2) with q = 1.5: (k/m)q = 1.5 vs slope 3, (K/M)q = 3 → equality.
        let r = classify(&spec(1.0, 2.0, 1.0, 4.0, 1.5), Form::Ratio);
        assert_eq!(r.tag, RegimeTag::RatioI);
        assert_eq!(r.marginal_count(), 1);
    }

    #[test]
    fn h_extremum_examples() {
        let e = h_extremum(&spec(1.0, 2.0, 1.0, 4.0, 2.0)).unwrap();
        assert!(close(e.t1, 4.0 / 3.0, 1e-15));
        assert!(close(e.value, 1.125, 1e-15));
        assert_eq!(e.kind, ExtremumKind::Upper);
        assert_eq!(e.endpoint_bound, None);

        let e = h_extremum(&spec(1.0, 4.0, 1.0, 2.0, 0.5)).unwrap();
        assert!(close(e.t1, 2.0, 1e-15));
        assert!(close(e.value, 0.942_809_041_582_063_4, 1e-15));
        assert_eq!(e.endpoint_bound, Some(1.0));
        assert_eq!(e.kind, ExtremumKind::Lower);

        assert_eq!(h_extremum(&spec(1.0, 2.0, 1.0, 1.0, 2.0)), Err(Error::Degenerate("K == k")));
        assert_eq!(h_extremum(&spec(1.0, 2.0, 1.0, 2.0, 2.0)), Err(Error::Degenerate("mK - Mk == 0")));
        assert!(matches!(h_extremum(&spec(1.0, 2.0, 1.0, 4.0, 5.0)), Err(Error::Regime(_))));
    }

    #[test]
    fn u_extremum_examples() {
        let e = u_extremum(&spec(1.0, 4.0, 1.0, 2.0, 0.5)).unwrap();
        assert!(close(e.t1, 2.25, 1e-15));
        assert!(close(e.value, -1.0 / 12.0, 1e-14));
        assert_eq!(e.endpoint_bound, Some(0.0));
        assert_eq!(e.kind, ExtremumKind::Lower);

        let e = u_extremum(&spec(1.0, 2.0, 1.0, 4.0, 2.0)).unwrap();
        assert!(close(e.t1, 1.5, 1e-15));
        assert!(close(e.value, 0.25, 1e-15));
        assert_eq!(e.kind, ExtremumKind::Upper);

        // q = 3 puts t1 = 1 outside... conditions: 3·1 <= 3 <= 12 holds; q = 4: 4 <= 3 fails.
        assert!(matches!(u_extremum(&spec(1.0, 2.0, 1.0, 4.0, 4.0)), Err(Error::Regime(_))));
        assert_eq!(u_extremum(&spec(1.0, 2.0, 3.0, 3.0, 2.0)), Err(Error::Degenerate("K == k")));
    }

    #[test]
    fn kantorovich_constants() {
        let sq = ScalarFunction::Power { exponent: 2.0 };
        let w = SpectralWindow::new(1.0, 2.0).unwrap();
        assert!(close(constant_kf(&sq, &w, 2.0).unwrap(), 1.125, 1e-15));
        assert!(matches!(constant_kf(&sq, &w, 1.0), Err(Error::Regime(_))));

        let log = ScalarFunction::log10();
        let w = SpectralWindow::new(1.0 + 1e-12, 10.0).unwrap();
        assert!(close(constant_kf(&log, &w, 2.0).unwrap(), 1.0 / 36.0, 1e-10));

        assert!(close(constant_kf_diff(&sq, &SpectralWindow::new(1.0, 2.0).unwrap(), 2.0).unwrap(), 0.25, 1e-15));
        assert!(close(constant_kf_diff(&sq, &SpectralWindow::new(1.0, 3.0).unwrap(), 2.0).unwrap(), 1.0, 1e-15));
        let flat = ScalarFunction::Power { exponent: 0.0 };
        assert_eq!(constant_kf_diff(&flat, &SpectralWindow::new(1.0, 3.0).unwrap(), 2.0), Err(Error::Degenerate("K == k")));
    }

    #[test]
    fn klog_values() {
        let k2 = constant_klog(10.0, 2.0).unwrap();
        assert!(close(k2, 1.0 / 36.0, 1e-15));
        assert!((k2 * 1.05 * 1.05 - 0.030625).abs() < 5e-7);
        let k8 = constant_klog(10.0, 8.0).unwrap();
        assert!((k8 - 0.005_454_1).abs() < 5e-8);
        assert!(k8 * libm::pow(1.05, 8.0) < 0.00806);
        assert!(matches!(constant_klog(10.0, 1.05), Err(Error::Regime(_))));
        assert!(matches!(constant_klog(1.0, 3.0), Err(Error::InvalidParameter(_))));
        let via_kf = constant_kf(&ScalarFunction::log10(), &SpectralWindow::new(1.0, 10.0).unwrap(), 8.0).unwrap();
        assert!(close(via_kf, k8, 1e-13));
    }
}
