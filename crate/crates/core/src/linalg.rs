//! Dense real-symmetric linear algebra.
//!
//! Matrices are stored row-major in a flat `Vec<f64>`. Every matrix-producing
//! operation returns an exactly symmetric result: either the upper triangle is
//! computed and mirrored, or the result is replaced by `(R + Rᵀ)/2`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;

/// Largest supported matrix order.
pub const MAX_ORDER: usize = 256;

/// Default relative convergence threshold of the Jacobi sweeps.
pub const JACOBI_TOLERANCE: f64 = 1e-14;

/// Default cap on the number of Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Inputs whose mirrored entries differ by more than this (relative to the
/// largest entry) are rejected instead of silently symmetrized.
const ASYMMETRY_TOLERANCE: f64 = 1e-9;

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::Dimension(format!("matrix order must be in 1..={MAX_ORDER}, got {n}")));
    }
    Ok(())
}

/// A real-symmetric matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<f64>,
}

impl HermitianMatrix {
    /// Builds a matrix from rows, symmetrizing with `(A + Aᵀ)/2`.
    ///
    /// Fails on ragged or empty input, non-finite entries, and on inputs that
    /// are not symmetric up to rounding.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    /// Builds a matrix from a row-major buffer of length `n*n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        check_order(n)?;
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!("expected {} entries, got {}", n * n, data.len())));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("entry ({}, {}) is not finite", pos / n, pos % n)));
        }
        let scale = data.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > ASYMMETRY_TOLERANCE * scale {
                    return Err(Error::InvalidMatrix(format!("entries ({i}, {j}) = {a} and ({j}, {i}) = {b} differ")));
                }
            }
        }
        Ok(Self::symmetrized(n, data))
    }

    /// `(R + Rᵀ)/2` of a finite square buffer, without validation.
    pub(crate) fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        check_order(n)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("diagonal entry is not finite".into()));
        }
        let mut data = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Ok(Self { n, data })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("orders {} and {} differ", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self::symmetrized(self.n, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::symmetrized(self.n, data))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::symmetrized(self.n, self.data.iter().map(|v| v * factor).collect())
    }

    /// `A + c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.n {
            data[i * self.n + i] += c;
        }
        Self { n: self.n, data }
    }

    /// `Q·A·Qᵀ` for an orthogonal (or arbitrary square) `q` in row-major order.
    pub fn conjugate(&self, q: &[f64]) -> Result<Self> {
        let n = self.n;
        if q.len() != n * n {
            return Err(Error::Dimension(format!("conjugating matrix has {} entries, expected {}", q.len(), n * n)));
        }
        // T = Q·A, then R = T·Qᵀ (upper triangle only, mirrored).
        let mut t = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let qik = q[i * n + k];
                if qik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    t[i * n + j] += qik * self.data[k * n + j];
                }
            }
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n).map(|k| t[i * n + k] * q[j * n + k]).sum();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(Self { n, data })
    }

    /// `A·x` for a vector of matching length.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!("vector has length {}, matrix order is {}", x.len(), self.n)));
        }
        Ok((0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }
}

/// A real vector of Euclidean norm one (to within `1e-12`).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    components: Vec<f64>,
}

impl UnitVector {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    /// Accepts `components` as is; fails unless `| ‖x‖ − 1 | ≤ 1e-12`.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("unit vector must be non-empty and finite".into()));
        }
        let norm = euclidean_norm(&components);
        if (norm - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!("vector norm is {norm}, not 1")));
        }
        Ok(Self { components })
    }

    /// Divides by the Euclidean norm.
    pub fn normalize(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("vector must be non-empty and finite".into()));
        }
        let norm = euclidean_norm(&components);
        if norm == 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero vector".into()));
        }
        Ok(Self { components: components.into_iter().map(|v| v / norm).collect() })
    }

    /// `(1/√2, 1/√2)`, the balanced two-point vector.
    pub fn balanced_pair() -> Self {
        let c = core::f64::consts::FRAC_1_SQRT_2;
        Self { components: vec![c, c] }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.components
    }
}

pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// A spectral window `[m, M]` with `0 < m < M`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralWindow {
    lower: f64,
    upper: f64,
}

impl SpectralWindow {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower > 0.0 && lower < upper) {
            return Err(Error::InvalidParameter(format!("window needs 0 < m < M, both finite; got ({lower}, {upper})")));
        }
        Ok(Self { lower, upper })
    }

    /// `m`.
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// `M`.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lower <= t && t <= self.upper
    }

    /// True when `other ⊆ self`.
    pub fn covers(&self, other: &SpectralWindow) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }

    /// `[m/factor, M·factor]` for `factor ≥ 1`.
    pub fn padded(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 1.0) {
            return Err(Error::InvalidParameter(format!("padding factor must be ≥ 1, got {factor}")));
        }
        Self::new(self.lower / factor, self.upper * factor)
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Row-major `n×n`; column `i` pairs with `eigenvalues[i]`.
    vectors: Vec<f64>,
    sweeps: usize,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `Q` in row-major order.
    pub fn eigenvector_matrix(&self) -> &[f64] {
        &self.vectors
    }

    /// Column `i` of `Q`.
    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        let n = self.order();
        (0..n).map(|r| self.vectors[r * n + i]).collect()
    }

    /// Number of Jacobi sweeps used.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// `Q·diag(values)·Qᵀ` for arbitrary per-eigenvalue values.
    pub fn recompose(&self, values: &[f64]) -> Result<HermitianMatrix> {
        let n = self.order();
        if values.len() != n {
            return Err(Error::Dimension(format!("{} values for order {n}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("spectral values are not finite".into()));
        }
        let q = &self.vectors;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += q[i * n + k] * values[k] * q[j * n + k];
                }
                data[i * n + j] = acc;
                data[j * n + i] = acc;
            }
        }
        Ok(HermitianMatrix { n, data })
    }

    /// `QΛQᵀ`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.recompose(&self.eigenvalues).expect("eigenvalues are finite")
    }

    /// `‖QᵀQ − I‖_max`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.order();
        let q = &self.vectors;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let dot: f64 = (0..n).map(|k| q[k * n + i] * q[k * n + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `‖QΛQᵀ − A‖_max`.
    pub fn reconstruction_residual(&self, a: &HermitianMatrix) -> f64 {
        let r = self.reconstruct();
        r.data.iter().zip(&a.data).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
    }
}

/// Eigendecomposition with the default tolerance and sweep cap.
pub fn eigh(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    eigh_with(a, JACOBI_TOLERANCE, JACOBI_MAX_SWEEPS)
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps stop once the off-diagonal Frobenius mass is at most
/// `tolerance · ‖A‖_F`, or after `max_sweeps`. Rotations whose angle is below
/// the resolution of both diagonal entries zero the pair directly, so the
/// iteration also terminates when `tolerance` is below rounding level.
/// Eigenvalues are sorted ascending, ties keep column order, and each
/// eigenvector is signed so that its largest-magnitude entry is positive.
pub fn eigh_with(a: &HermitianMatrix, tolerance: f64, max_sweeps: usize) -> Result<SpectralDecomposition> {
    let n = a.n;
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be ≥ 0, got {tolerance}")));
    }
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = tolerance * a.frobenius_norm();
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        let off = off_diagonal_norm(&m, n);
        if off <= threshold || off == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 { -t } else { t }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                rotate(&mut m, &mut v, n, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    // Stable sort keeps column order on ties.
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut pivot = 0;
        for r in 1..n {
            if v[r * n + old_col].abs() > v[pivot * n + old_col].abs() {
                pivot = r;
            }
        }
        let sign = if v[pivot * n + old_col] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            vectors[r * n + new_col] = sign * v[r * n + old_col];
        }
    }
    Ok(SpectralDecomposition { eigenvalues, vectors, sweeps })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[i * n + j] * m[i * n + j];
            }
        }
    }
    libm::sqrt(acc)
}

/// `M ← JᵀMJ`, `V ← VJ` for the plane rotation `J` in `(p, q)`.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let mkp = m[k * n + p];
        let mkq = m[k * n + q];
        m[k * n + p] = c * mkp - s * mkq;
        m[k * n + q] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[p * n + k];
        let mqk = m[q * n + k];
        m[p * n + k] = c * mpk - s * mqk;
        m[q * n + k] = s * mpk + c * mqk;
    }
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// `f(A) = Q·diag(f(λᵢ))·Qᵀ`.
pub fn apply_function(dec: &SpectralDecomposition, f: &ScalarFunction) -> Result<HermitianMatrix> {
    let mut values = Vec::with_capacity(dec.order());
    for &lambda in dec.eigenvalues() {
        if !f.is_defined_at(lambda) {
            return Err(Error::Domain(format!("eigenvalue {lambda} is outside the domain of {f}")));
        }
        values.push(f.eval_unchecked(lambda));
    }
    dec.recompose(&values)
}

/// `xᵀAx`.
pub fn quad_form(a: &HermitianMatrix, x: &UnitVector) -> Result<f64> {
    let x = x.as_slice();
    if x.len() != a.n {
        return Err(Error::Dimension(format!("vector has length {}, matrix order is {}", x.len(), a.n)));
    }
    let mut acc = 0.0;
    for (i, xi) in x.iter().enumerate() {
        let row: f64 = a.row(i).iter().zip(x).map(|(aij, xj)| aij * xj).sum();
        acc += xi * row;
    }
    Ok(acc)
}

/// Norm, numerical radius and spectral extremes of a positive operator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OperatorSummary {
    pub norm: f64,
    pub numerical_radius: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `(λ_min, λ_max)`; absent when the spectrum is a single point.
    pub window: Option<SpectralWindow>,
}

pub fn summarize(a: &HermitianMatrix) -> Result<OperatorSummary> {
    summarize_decomposition(&eigh(a)?)
}

pub fn summarize_decomposition(dec: &SpectralDecomposition) -> Result<OperatorSummary> {
    let lambda_min = dec.min_eigenvalue();
    let lambda_max = dec.max_eigenvalue();
    if lambda_min <= 0.0 {
        return Err(Error::NotPositive { min_eigenvalue: lambda_min });
    }
    let norm = dec.eigenvalues().iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    Ok(OperatorSummary {
        norm,
        // Positive operators are normal, so w(A) = ‖A‖.
        numerical_radius: norm,
        lambda_min,
        lambda_max,
        window: SpectralWindow::new(lambda_min, lambda_max).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_symmetric(n: usize, rng: &mut SplitMix64) -> HermitianMatrix {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.uniform(-1.0, 1.0);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        HermitianMatrix::from_row_major(n, data).unwrap()
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap();
        let dec = eigh(&a).unwrap();
        assert_eq!(dec.eigenvalues(), &[1.0, 2.0]);
        assert_eq!(dec.eigenvector_matrix(), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(dec.sweeps(), 0);
    }

    #[test]
    fn two_by_two_by_hand() {
        // det([[2-λ,1],[1,2-λ]]) = (2-λ)² - 1 → λ = 1, 3.
        let a = HermitianMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let dec = eigh(&a).unwrap();
        assert!((dec.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues()[1] - 3.0).abs() < 1e-14);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let v0 = dec.eigenvector(0);
        let v1 = dec.eigenvector(1);
        // (1,-1)/√2 and (1,1)/√2 up to sign.
        assert!((v0[0].abs() - h).abs() < 1e-14 && (v0[0] + v0[1]).abs() < 1e-14);
        assert!((v1[0] - h).abs() < 1e-14 && (v1[1] - h).abs() < 1e-14);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let dec = eigh(&HermitianMatrix::identity(5).unwrap()).unwrap();
        assert_eq!(dec.eigenvalues(), &[1.0; 5]);
        assert!(dec.orthogonality_residual() == 0.0);
    }

    #[test]
    fn ties_keep_column_order() {
        let a = HermitianMatrix::diagonal(&[3.0, 1.0, 3.0, 1.0]).unwrap();
        let dec = eigh(&a).unwrap();
        assert_eq!(dec.eigenvalues(), &[1.0, 1.0, 3.0, 3.0]);
        assert_eq!(dec.eigenvector(0), vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(dec.eigenvector(1), vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(dec.eigenvector(2), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(HermitianMatrix::from_rows(&[[1.0, f64::NAN], [f64::NAN, 1.0]]), Err(Error::InvalidMatrix(_))));
        assert!(matches!(HermitianMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]), Err(Error::InvalidMatrix(_))));
        assert!(matches!(HermitianMatrix::from_rows::<[f64; 0]>(&[]), Err(Error::Dimension(_))));
        assert!(matches!(HermitianMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0]]), Err(Error::InvalidMatrix(_))));
        assert!(HermitianMatrix::identity(MAX_ORDER + 1).is_err());
    }

    #[test]
    fn symmetrizes_rounding_asymmetry() {
        let a = HermitianMatrix::from_rows(&[[1.0, 0.5 + 1e-15], [0.5, 1.0]]).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 0));
    }

    #[test]
    fn reconstruction_on_random_matrices() {
        let mut rng = SplitMix64::new(11);
        for n in [1, 2, 3, 7, 16, 33] {
            let a = random_symmetric(n, &mut rng).scale(rng.uniform(0.1, 50.0));
            let dec = eigh(&a).unwrap();
            assert!(dec.orthogonality_residual() <= 1e-10);
            assert!(dec.reconstruction_residual(&a) <= 1e-10 * a.max_abs().max(1.0));
            assert!(dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn tighter_tolerance_still_terminates() {
        let mut rng = SplitMix64::new(3);
        let a = random_symmetric(40, &mut rng);
        let dec = eigh_with(&a, 1e-15, JACOBI_MAX_SWEEPS).unwrap();
        assert!(dec.sweeps() < JACOBI_MAX_SWEEPS);
        assert!(dec.reconstruction_residual(&a) <= 1e-10);
    }

    #[test]
    fn deterministic() {
        let mut rng = SplitMix64::new(5);
        let a = random_symmetric(12, &mut rng);
        assert_eq!(eigh(&a).unwrap(), eigh(&a).unwrap());
    }

    #[test]
    fn functional_calculus_examples() {
        let mut rng = SplitMix64::new(9);
        let a = random_symmetric(6, &mut rng);
        let dec = eigh(&a).unwrap();
        let id = apply_function(&dec, &ScalarFunction::Power { exponent: 1.0 }).unwrap();
        let worst = id.as_row_major().iter().zip(a.as_row_major()).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        assert!(worst <= 1e-12, "{worst}");

        let d = eigh(&HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap()).unwrap();
        let sq = apply_function(&d, &ScalarFunction::Power { exponent: 2.0 }).unwrap();
        assert_eq!(sq, HermitianMatrix::diagonal(&[1.0, 4.0]).unwrap());
        let inv = apply_function(&d, &ScalarFunction::Power { exponent: -1.0 }).unwrap();
        assert_eq!(inv, HermitianMatrix::diagonal(&[1.0, 0.5]).unwrap());
    }

    #[test]
    fn functional_calculus_domain_error() {
        let d = eigh(&HermitianMatrix::diagonal(&[-1.0, 2.0]).unwrap()).unwrap();
        assert!(matches!(apply_function(&d, &ScalarFunction::log10()), Err(Error::Domain(_))));
        assert!(matches!(apply_function(&d, &ScalarFunction::Power { exponent: 0.5 }), Err(Error::Domain(_))));
        assert!(apply_function(&d, &ScalarFunction::Power { exponent: 3.0 }).is_ok());
    }

    #[test]
    fn quadratic_form_examples() {
        let x = UnitVector::balanced_pair();
        let remark = HermitianMatrix::diagonal(&[1.0, 1.1]).unwrap();
        assert!((quad_form(&remark, &x).unwrap() - 1.05).abs() <= 4.0 * f64::EPSILON);
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap();
        assert!((quad_form(&a, &x).unwrap() - 1.5).abs() <= 4.0 * f64::EPSILON);
        let e = UnitVector::new(vec![0.6, 0.0, 0.8]).unwrap();
        assert!((quad_form(&HermitianMatrix::identity(3).unwrap(), &e).unwrap() - 1.0).abs() <= 1e-15);
        assert!(matches!(quad_form(&a, &e), Err(Error::Dimension(_))));
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(vec![1.0, 1.0]).is_err());
        assert!(UnitVector::new(vec![]).is_err());
        assert!(UnitVector::normalize(vec![0.0, 0.0]).is_err());
        let u = UnitVector::normalize(vec![3.0, 4.0]).unwrap();
        assert_eq!(u.as_slice(), &[0.6, 0.8]);
    }

    #[test]
    fn summaries() {
        let s = summarize(&HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!((s.norm, s.numerical_radius), (2.0, 2.0));
        assert_eq!(s.window, Some(SpectralWindow::new(1.0, 2.0).unwrap()));

        let s = summarize(&HermitianMatrix::diagonal(&[1.0, 1.1]).unwrap()).unwrap();
        assert_eq!(s.norm, 1.1);
        assert_eq!(s.window.unwrap().lower(), 1.0);

        let s = summarize(&HermitianMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        assert!((s.norm - 3.0).abs() < 1e-14);
        assert!((s.lambda_min - 1.0).abs() < 1e-14);
        assert_eq!(s.norm, s.numerical_radius);

        let s = summarize(&HermitianMatrix::identity(3).unwrap()).unwrap();
        assert!(s.window.is_none());

        assert!(matches!(
            summarize(&HermitianMatrix::diagonal(&[0.0, 1.0]).unwrap()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn windows() {
        assert!(SpectralWindow::new(0.0, 1.0).is_err());
        assert!(SpectralWindow::new(2.0, 1.0).is_err());
        assert!(SpectralWindow::new(1.0, 1.0).is_err());
        assert!(SpectralWindow::new(1.0, f64::INFINITY).is_err());
        let w = SpectralWindow::new(1.0, 2.0).unwrap();
        let p = w.padded(2.0).unwrap();
        assert_eq!((p.lower(), p.upper()), (0.5, 4.0));
        assert!(p.covers(&w) && !w.covers(&p));
        assert!(w.padded(0.5).is_err());
    }

    #[test]
    fn conjugation_preserves_spectrum() {
        let mut rng = SplitMix64::new(17);
        let a = random_symmetric(5, &mut rng);
        let q = eigh(&random_symmetric(5, &mut rng)).unwrap();
        let b = a.conjugate(q.eigenvector_matrix()).unwrap();
        let (ea, eb) = (eigh(&a).unwrap(), eigh(&b).unwrap());
        for (x, y) in ea.eigenvalues().iter().zip(eb.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
