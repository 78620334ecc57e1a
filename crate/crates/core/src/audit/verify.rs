use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Operator, Params, Verdict};
use crate::bounds::{classify, difference_constant, ratio_constant, BoundSpec, Form, RegimeTag};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::{eigh, SpectralWindow, UnitVector};
use crate::sconvex::{certify, SConvexityCertificate, DEFAULT_GRID};

/// `λ_min(B − A)` below this means `A ≤ B` fails.
const ORDER_SLACK: f64 = 1e-12;

fn two_pow(e: f64) -> f64 {
    libm::pow(2.0, e)
}

fn default_certificate(f: &ScalarFunction, s: f64, w: &SpectralWindow) -> Result<SConvexityCertificate> {
    certify(f, w, s, DEFAULT_GRID, DEFAULT_GRID)
}

fn require_certificate(f: &ScalarFunction, s: f64, w: &SpectralWindow, cert: &SConvexityCertificate) -> Result<()> {
    if cert.supports(f, s, w) {
        return Ok(());
    }
    let reason = if cert.is_certified() { "does not cover this (f, s, window)" } else { "was refuted" };
    Err(Error::Precondition(format!("s-convexity certificate for {f} at s={s} on [{}, {}] {reason}", w.lower(), w.upper())))
}

/// `f(⟨Ax,x⟩) ≤ 2^(1−s)⟨f(A)x,x⟩`, certifying s-convexity on the operator's
/// window first.
pub fn verify_jensen(f: &ScalarFunction, s: f64, op: &Operator, x: &UnitVector) -> Result<Verdict> {
    let w = op.window()?;
    verify_jensen_with(f, s, op, x, &default_certificate(f, s, &w)?)
}

/// [`verify_jensen`] with a certificate computed by the caller.
pub fn verify_jensen_with(f: &ScalarFunction, s: f64, op: &Operator, x: &UnitVector, cert: &SConvexityCertificate) -> Result<Verdict> {
    let w = op.window()?;
    require_certificate(f, s, &w, cert)?;
    let t = op.quad(x)?;
    let lhs = f.eval(t)?;
    let rhs = two_pow(1.0 - s) * op.function_quad(f, x)?;
    let params = Params { s: Some(s), ..Params::for_operator(op) }.with_window(&w).with_function(f);
    Ok(Verdict::compare("jensen", params, None, lhs, rhs))
}

/// `⟨f(A)x,x⟩ ≤ 2^(1−s)·c·⟨Ax,x⟩^q` with `c = K_f(m, M, q)` in the regimes
/// `q > 1`, `q < 0` (check `ratio-kf`) and `c = max{f(m)/m^q, f(M)/M^q}` for
/// `0 < q < 1` (check `ratio-endpoint`).
pub fn verify_ratio(f: &ScalarFunction, s: f64, q: f64, op: &Operator, x: &UnitVector) -> Result<Verdict> {
    let w = op.window()?;
    verify_ratio_with(f, s, q, op, x, &default_certificate(f, s, &w)?)
}

pub fn verify_ratio_with(f: &ScalarFunction, s: f64, q: f64, op: &Operator, x: &UnitVector, cert: &SConvexityCertificate) -> Result<Verdict> {
    let w = op.window()?;
    let (constant, tag) = ratio_constant(&BoundSpec::from_function(f, w, q)?)?;
    require_certificate(f, s, &w, cert)?;
    let t = op.quad(x)?;
    let lhs = op.function_quad(f, x)?;
    let rhs = two_pow(1.0 - s) * constant * libm::pow(t, q);
    let id = if tag == RegimeTag::RatioMid { "ratio-endpoint" } else { "ratio-kf" };
    let params = Params { s: Some(s), q: Some(q), ..Params::for_operator(op) }.with_window(&w).with_function(f);
    Ok(Verdict::compare(id, params, Some(tag), lhs, rhs))
}

/// `⟨f(A)x,x⟩ ≤ 2^(1−s)(c + ⟨Ax,x⟩^q)` with `c = max{f(m) − m^q, f(M) − M^q}`
/// for `0 < q < 1` (check `diff-endpoint`) and `c = K_f^d(m, M, q)` otherwise
/// (check `diff-kfd`).
pub fn verify_diff(f: &ScalarFunction, s: f64, q: f64, op: &Operator, x: &UnitVector) -> Result<Verdict> {
    let w = op.window()?;
    verify_diff_with(f, s, q, op, x, &default_certificate(f, s, &w)?)
}

pub fn verify_diff_with(f: &ScalarFunction, s: f64, q: f64, op: &Operator, x: &UnitVector, cert: &SConvexityCertificate) -> Result<Verdict> {
    let w = op.window()?;
    let (constant, tag) = difference_constant(&BoundSpec::from_function(f, w, q)?)?;
    require_certificate(f, s, &w, cert)?;
    let t = op.quad(x)?;
    let lhs = op.function_quad(f, x)?;
    let rhs = two_pow(1.0 - s) * (constant + libm::pow(t, q));
    let id = if tag == RegimeTag::DiffLow { "diff-endpoint" } else { "diff-kfd" };
    let params = Params { s: Some(s), q: Some(q), ..Params::for_operator(op) }.with_window(&w).with_function(f);
    Ok(Verdict::compare(id, params, Some(tag), lhs, rhs))
}

/// Both links of the refined Hölder–McCarthy chain:
///
/// - `0 < s ≤ q < 1`: `⟨A^q x,x⟩ ≤ ⟨Ax,x⟩^q ≤ 2^(1−s)⟨A^q x,x⟩`
/// - `1 < q ≤ 1/s`: `⟨Ax,x⟩^q ≤ ⟨A^q x,x⟩ ≤ 2^((1−s)q)⟨Ax,x⟩^q`
///
/// The verdict reports the link with the smaller margin.
pub fn verify_holder_mccarthy(op: &Operator, q: f64, s: f64, x: &UnitVector) -> Result<Verdict> {
    let t = op.quad(x)?;
    let tq = libm::pow(t, q);
    let aq = op.function_quad(&ScalarFunction::Power { exponent: q }, x)?;
    let params = Params { s: Some(s), q: Some(q), ..Params::for_operator(op) };
    let (id, links) = if s > 0.0 && s <= q && q < 1.0 {
        ("holder-mccarthy-i", [(aq, tq), (tq, two_pow(1.0 - s) * aq)])
    } else if q > 1.0 && s > 0.0 && s <= 1.0 && q <= 1.0 / s {
        ("holder-mccarthy-ii", [(tq, aq), (aq, two_pow((1.0 - s) * q) * tq)])
    } else {
        return Err(Error::Precondition(format!("(q, s) = ({q}, {s}) is outside 0 < s <= q < 1 and 1 < q <= 1/s")));
    };
    let [a, b] = links.map(|(lhs, rhs)| Verdict::compare(id, params.clone(), None, lhs, rhs));
    Ok(if b.margin < a.margin { b } else { a })
}

/// The two operator-order corollaries for `A ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum OrderVariant {
    /// `A^p ≤ 2^(2(1−s))·max{m^(p−q), M^(p−q)}·B^q` for `0 < s < p < 1`,
    /// `0 < s ≤ q < 1` and the ratio window condition.
    Ratio,
    /// `A^p ≤ 2^(1−s)(max{m^(p−q), M^(p−q)} + 2^(1−s)B^q)` for `0 < s ≤ p < 1`,
    /// `0 < s ≤ q < 1` and the difference window condition.
    Difference,
}

impl OrderVariant {
    pub fn check_id(&self) -> &'static str {
        match self {
            OrderVariant::Ratio => "order-ratio",
            OrderVariant::Difference => "order-diff",
        }
    }
}

/// One operator-order corollary; the window `(m, M)` is that of `A`.
///
/// `margin = λ_min(RHS − A^p)`; `lhs` and `rhs` report `‖A^p‖` and `‖RHS‖`.
pub fn verify_order_variant(variant: OrderVariant, a: &Operator, b: &Operator, p: f64, q: f64, s: f64) -> Result<Verdict> {
    let p_ok = match variant {
        OrderVariant::Ratio => s < p,
        OrderVariant::Difference => s <= p,
    };
    if !(s > 0.0 && p_ok && p < 1.0 && s <= q && q < 1.0) {
        return Err(Error::Precondition(format!("(p, q, s) = ({p}, {q}, {s}) is outside the admissible range for {}", variant.check_id())));
    }
    let n = a.order();
    if b.order() != n {
        return Err(Error::Dimension(format!("A has order {n}, B has order {}", b.order())));
    }
    let gap = eigh(&b.matrix().sub(a.matrix())?)?.min_eigenvalue();
    if gap < -ORDER_SLACK {
        return Err(Error::Precondition(format!("A <= B fails: lambda_min(B - A) = {gap}")));
    }
    let w = a.window()?;
    let form = match variant {
        OrderVariant::Ratio => Form::Ratio,
        OrderVariant::Difference => Form::Difference,
    };
    let regime = classify(&BoundSpec::from_function(&ScalarFunction::Power { exponent: p }, w, q)?, form);
    if !regime.is_feasible() {
        return Err(Error::Regime(regime.failed_conditions().map(|c| format!("{c}")).collect()));
    }
    let c = libm::pow(w.lower(), p - q).max(libm::pow(w.upper(), p - q));
    let bq = b.power(q)?;
    let rhs = match variant {
        OrderVariant::Ratio => bq.scale(two_pow(2.0 * (1.0 - s)) * c),
        OrderVariant::Difference => bq.scale(two_pow(2.0 * (1.0 - s))).shift(two_pow(1.0 - s) * c),
    };
    let ap = a.power(p)?;
    let margin = eigh(&rhs.sub(&ap)?)?.min_eigenvalue();
    let rhs_norm = eigh(&rhs)?.max_eigenvalue();
    let params = Params { s: Some(s), p: Some(p), q: Some(q), ..Params::for_operator(a) }.with_window(&w);
    Ok(Verdict::new(variant.check_id(), params, Some(regime.tag), libm::pow(a.lambda_max(), p), rhs_norm, margin))
}

/// Both operator-order corollaries.
pub fn verify_operator_order(a: &Operator, b: &Operator, p: f64, q: f64, s: f64) -> Result<Vec<Verdict>> {
    Ok(vec![verify_order_variant(OrderVariant::Ratio, a, b, p, q, s)?, verify_order_variant(OrderVariant::Difference, a, b, p, q, s)?])
}

/// `⟨A⁻¹x,x⟩⟨Ax,x⟩ ≤ (m+M)²/(4mM)` and `⟨A²x,x⟩ ≤ (m+M)²/(4mM)·⟨Ax,x⟩²` with
/// `(m, M)` the exact spectral extremes; the verdict reports the tighter one.
pub fn verify_classical_kantorovich(op: &Operator, x: &UnitVector) -> Result<Verdict> {
    let (m, big_m) = (op.lambda_min(), op.lambda_max());
    let constant = (m + big_m) * (m + big_m) / (4.0 * m * big_m);
    let t = op.quad(x)?;
    let inv = op.spectral_quad(x, |l| Ok(1.0 / l))?;
    let sq = op.spectral_quad(x, |l| Ok(l * l))?;
    let params = Params::for_operator(op);
    let product = Verdict::compare("classical-kantorovich", params.clone(), None, inv * t, constant);
    let squared = Verdict::compare("classical-kantorovich", params, None, sq, constant * t * t);
    Ok(if squared.margin < product.margin { squared } else { product })
}

/// The three corollaries with `q = p` and `0 < s < p < 1`, each minimized
/// over `samples` plus both extreme eigenvectors:
///
/// - `norm-power`: `‖A‖^p ≤ 2^(1−s)·max{m^(p−q), M^(p−q)}·⟨Ax,x⟩^q`
/// - `norm-chain`: `2^(−(1−s)/p)‖A‖ ≤ ⟨Ax,x⟩ ≤ ‖A‖`
/// - `numerical-radius` (only when `p + s > 1`): `2^(−(1−s)/p)‖A‖ ≤ w(A) ≤ ‖A‖`
///
/// Failures are reported as failing verdicts, not errors.
pub fn audit_norm_radius_corollaries(op: &Operator, p: f64, s: f64, samples: &[UnitVector]) -> Result<Vec<Verdict>> {
    if !(s > 0.0 && s < p && p < 1.0) {
        return Err(Error::Precondition(format!("(p, s) = ({p}, {s}) is outside 0 < s < p < 1")));
    }
    let w = op.window()?;
    let q = p;
    let regime = classify(&BoundSpec::from_function(&ScalarFunction::Power { exponent: p }, w, q)?, Form::Ratio);
    if !regime.is_feasible() {
        return Err(Error::Regime(regime.failed_conditions().map(|c| format!("{c}")).collect()));
    }
    let tag = Some(regime.tag);
    let norm = op.lambda_max();
    let c = libm::pow(w.lower(), p - q).max(libm::pow(w.upper(), p - q));
    let lower_bound = norm / two_pow((1.0 - s) / p);
    let params = Params { s: Some(s), p: Some(p), q: Some(q), ..Params::for_operator(op) }.with_window(&w);

    let mut power: Option<Verdict> = None;
    let mut chain: Option<Verdict> = None;
    for x in op.probe_vectors(samples) {
        let t = op.quad(&x)?;
        let v = Verdict::compare("norm-power", params.clone(), tag, libm::pow(norm, p), two_pow(1.0 - s) * c * libm::pow(t, q));
        power = Some(match power {
            Some(prev) => prev.worse(v),
            None => v,
        });
        let low = Verdict::compare("norm-chain", params.clone(), tag, lower_bound, t);
        let high = Verdict::compare("norm-chain", params.clone(), tag, t, norm);
        let v = low.worse(high);
        chain = Some(match chain {
            Some(prev) => prev.worse(v),
            None => v,
        });
    }
    let mut out: Vec<Verdict> = power.into_iter().chain(chain).collect();
    if p + s > 1.0 {
        // For a positive operator the numerical radius is the largest eigenvalue.
        let radius = op.lambda_max();
        let low = Verdict::compare("numerical-radius", params.clone(), tag, lower_bound, radius);
        let high = Verdict::compare("numerical-radius", params, tag, radius, norm);
        out.push(low.worse(high));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianMatrix;

    fn diag(values: &[f64]) -> Operator {
        Operator::new(HermitianMatrix::diagonal(values).unwrap()).unwrap()
    }

    fn pow(r: f64) -> ScalarFunction {
        ScalarFunction::Power { exponent: r }
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn jensen_examples() {
        let x = UnitVector::balanced_pair();
        let v = verify_jensen(&pow(0.5), 0.5, &diag(&[1.0, 4.0]), &x).unwrap();
        assert!(close(v.lhs, 1.581_138_8, 1e-7) && close(v.rhs, 2.121_320_3, 1e-7) && v.passed);
        let v = verify_jensen(&pow(1.0), 1.0, &diag(&[1.0, 3.0]), &x).unwrap();
        assert!(v.margin.abs() < 1e-15 && v.passed);
        let refuted = verify_jensen(&ScalarFunction::log10(), 0.9, &diag(&[1.0001, 10.0]), &x);
        assert!(matches!(refuted, Err(Error::Precondition(_))));
    }

    #[test]
    fn ratio_examples() {
        let x = UnitVector::balanced_pair();
        let v = verify_ratio(&pow(2.0), 1.0, 2.0, &diag(&[1.0, 2.0]), &x).unwrap();
        assert_eq!(v.check_id, "ratio-kf");
        assert_eq!(v.regime, Some(RegimeTag::RatioI));
        assert!(close(v.lhs, 2.5, 1e-14) && close(v.rhs, 2.531_25, 1e-14) && v.passed);

        let v = verify_ratio(&pow(0.5), 0.5, 0.5, &diag(&[1.0, 4.0]), &x).unwrap();
        assert_eq!(v.check_id, "ratio-endpoint");
        assert!(close(v.lhs, 1.5, 1e-14) && close(v.rhs, 2.236_068, 1e-6) && v.passed);

        assert!(matches!(verify_ratio(&pow(2.0), 1.0, 1.0, &diag(&[1.0, 2.0]), &x), Err(Error::Regime(_))));
    }

    #[test]
    fn diff_examples() {
        let x = UnitVector::balanced_pair();
        let v = verify_diff(&pow(2.0), 1.0, 2.0, &diag(&[1.0, 2.0]), &x).unwrap();
        assert_eq!(v.check_id, "diff-kfd");
        assert!(v.margin.abs() <= 1e-10 && v.passed);
        let v = verify_diff(&pow(0.5), 0.5, 0.5, &diag(&[1.0, 4.0]), &x).unwrap();
        assert_eq!(v.check_id, "diff-endpoint");
        assert!(close(v.rhs, 2.236_068, 1e-6) && v.passed);
        assert!(matches!(verify_diff(&pow(2.0), 1.0, 0.0, &diag(&[1.0, 2.0]), &x), Err(Error::Regime(_))));
    }

    #[test]
    fn holder_examples() {
        let x = UnitVector::balanced_pair();
        let v = verify_holder_mccarthy(&diag(&[1.0, 4.0]), 2.0, 0.5, &x).unwrap();
        assert_eq!(v.check_id, "holder-mccarthy-ii");
        // 6.25 ≤ 8.5 ≤ 12.5: the first link is the tighter.
        assert!(close(v.lhs, 6.25, 1e-14) && close(v.rhs, 8.5, 1e-14) && v.passed);
        let v = verify_holder_mccarthy(&diag(&[1.0, 4.0]), 0.5, 0.5, &x).unwrap();
        assert!(close(v.lhs, 1.5, 1e-14) && close(v.rhs, 1.581_138_8, 1e-7) && v.passed);
        let id = Operator::new(HermitianMatrix::identity(3).unwrap()).unwrap();
        let x3 = UnitVector::normalize(vec![1.0, 1.0, 1.0]).unwrap();
        let v = verify_holder_mccarthy(&id, 0.5, 0.25, &x3).unwrap();
        assert!(v.margin.abs() < 1e-15 && v.passed);
        assert!(matches!(verify_holder_mccarthy(&id, 3.0, 0.5, &x3), Err(Error::Precondition(_))));
    }

    #[test]
    fn order_examples() {
        let a = diag(&[1.0, 4.0]);
        let vs = verify_operator_order(&a, &a, 0.5, 0.5, 0.3).unwrap();
        assert_eq!(vs.len(), 2);
        assert!(vs.iter().all(|v| v.passed && v.margin > 0.0));
        let b = Operator::new(a.matrix().shift(1.0)).unwrap();
        assert!(verify_operator_order(&a, &b, 0.5, 0.5, 0.3).unwrap().iter().all(|v| v.passed));
        let two = Operator::new(HermitianMatrix::diagonal(&[2.0, 2.0]).unwrap()).unwrap();
        let one = Operator::new(HermitianMatrix::identity(2).unwrap()).unwrap();
        assert!(matches!(verify_operator_order(&two, &one, 0.5, 0.5, 0.3), Err(Error::Precondition(_))));
    }

    #[test]
    fn classical_examples() {
        let a = diag(&[1.0, 2.0]);
        let v = verify_classical_kantorovich(&a, &UnitVector::balanced_pair()).unwrap();
        assert!(close(v.lhs, 1.125, 1e-15) && v.margin.abs() <= 1e-10 && v.passed);
        let v = verify_classical_kantorovich(&a, &a.min_eigenvector()).unwrap();
        assert!(v.passed);
    }

    #[test]
    fn norm_radius_examples() {
        let a = diag(&[1.0, 2.0]);
        let vs = audit_norm_radius_corollaries(&a, 0.9, 0.2, &[]).unwrap();
        let chain = vs.iter().find(|v| v.check_id == "norm-chain").unwrap();
        assert!(!chain.passed);
        assert!(close(chain.lhs, 1.080_1, 1e-4) && close(chain.rhs, 1.0, 1e-14));
        assert!(close(chain.margin, -0.08, 0.01));
        let radius = vs.iter().find(|v| v.check_id == "numerical-radius").unwrap();
        assert!(radius.passed);

        let vs = audit_norm_radius_corollaries(&a, 0.9, 0.05, &[]).unwrap();
        assert!(vs.iter().all(|v| v.passed));
        assert!(vs.iter().all(|v| v.check_id != "numerical-radius"));
    }
}
