//! Verifiers, instance generators, feasibility search and fuzz campaigns.
//!
//! Every verifier returns a [`Verdict`] whose `margin` is `rhs − lhs` (or a
//! minimum eigenvalue for operator-order checks). A verdict passes when the
//! margin is at least `−TOL_REL · max(1, |rhs|)`.

mod campaign;
mod feasible;
mod generate;
mod tightness;
mod verify;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bounds::RegimeTag;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::{self, HermitianMatrix, SpectralDecomposition, SpectralWindow, UnitVector};

pub use campaign::{fuzz_campaign, replay, run_instance, run_shard, CampaignReport, CheckKind, CheckSummary, FailureRecord, FuzzConfig, Instance, InstanceOutcome, WorstCase};
pub use feasible::{feasible_m_for_power, FeasibleSet};
pub use generate::{gen_matrix, gen_unit_vector, random_matrix, random_unit_vector};
pub use tightness::{tightness_search, TightnessParams};
pub use verify::{
    audit_norm_radius_corollaries, verify_classical_kantorovich, verify_diff, verify_diff_with, verify_holder_mccarthy, verify_jensen, verify_jensen_with, verify_operator_order, verify_order_variant, verify_ratio,
    verify_ratio_with, OrderVariant,
};

/// Relative tolerance of the pass rule.
pub const TOL_REL: f64 = 1e-9;
/// Verdicts with `|margin| ≤ MARGINAL_REL · max(1, |rhs|)` are marginal.
pub const MARGINAL_REL: f64 = 1e-7;

/// Parameters an inequality was evaluated at.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Params {
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub function: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub s: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub p: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub q: Option<f64>,
    pub m: f64,
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub upper: f64,
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub seed: Option<u64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub index: Option<u64>,
}

impl Params {
    pub(crate) fn for_operator(op: &Operator) -> Self {
        Self { m: op.lambda_min(), upper: op.lambda_max(), n: op.order(), ..Self::default() }
    }

    pub(crate) fn with_function(mut self, f: &ScalarFunction) -> Self {
        self.function = Some(format!("{f}"));
        if let ScalarFunction::Power { exponent } = f {
            self.p = Some(*exponent);
        }
        self
    }

    pub(crate) fn with_window(mut self, w: &SpectralWindow) -> Self {
        self.m = w.lower();
        self.upper = w.upper();
        self
    }
}

/// Outcome of one inequality check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub check_id: String,
    pub params: Params,
    pub regime: Option<RegimeTag>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
    pub marginal: bool,
}

impl Verdict {
    pub fn new(check_id: &str, params: Params, regime: Option<RegimeTag>, lhs: f64, rhs: f64, margin: f64) -> Self {
        let scale = 1.0f64.max(rhs.abs());
        Self {
            check_id: check_id.into(),
            params,
            regime,
            lhs,
            rhs,
            margin,
            passed: margin >= -TOL_REL * scale,
            marginal: margin.abs() <= MARGINAL_REL * scale,
        }
    }

    /// `lhs ≤ rhs`, margin `rhs − lhs`.
    pub(crate) fn compare(check_id: &str, params: Params, regime: Option<RegimeTag>, lhs: f64, rhs: f64) -> Self {
        Self::new(check_id, params, regime, lhs, rhs, rhs - lhs)
    }

    /// Margin scaled the same way as the pass rule; used to rank failures.
    pub fn normalized_margin(&self) -> f64 {
        self.margin / 1.0f64.max(self.rhs.abs())
    }

    /// The verdict with the smaller normalized margin; the first on ties.
    pub fn worse(self, other: Self) -> Self {
        if other.normalized_margin() < self.normalized_margin() {
            other
        } else {
            self
        }
    }
}

/// A positive matrix together with its spectral decomposition and the
/// window the verifiers evaluate constants on.
///
/// The window defaults to the exact spectral window `(λ_min, λ_max)`; it can
/// be replaced by a declared window covering the spectrum or padded.
#[derive(Debug, Clone)]
pub struct Operator {
    matrix: HermitianMatrix,
    decomposition: SpectralDecomposition,
    window: Option<SpectralWindow>,
}

impl Operator {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, linalg::JACOBI_TOLERANCE)
    }

    pub fn with_tolerance(matrix: HermitianMatrix, tolerance: f64) -> Result<Self> {
        let decomposition = linalg::eigh_with(&matrix, tolerance, linalg::JACOBI_MAX_SWEEPS)?;
        let summary = linalg::summarize_decomposition(&decomposition)?;
        Ok(Self { matrix, decomposition, window: summary.window })
    }

    /// Replaces the spectral window with `w`, which must contain every
    /// eigenvalue.
    pub fn with_window(mut self, w: SpectralWindow) -> Result<Self> {
        if !(w.contains(self.lambda_min()) && w.contains(self.lambda_max())) {
            return Err(Error::Precondition(format!(
                "declared window [{}, {}] does not contain the spectrum [{}, {}]",
                w.lower(),
                w.upper(),
                self.lambda_min(),
                self.lambda_max()
            )));
        }
        self.window = Some(w);
        Ok(self)
    }

    /// Widens the window to `(m/factor, M·factor)`.
    pub fn padded(self, factor: f64) -> Result<Self> {
        let w = self.window()?.padded(factor)?;
        self.with_window(w)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn lambda_min(&self) -> f64 {
        self.decomposition.min_eigenvalue()
    }

    pub fn lambda_max(&self) -> f64 {
        self.decomposition.max_eigenvalue()
    }

    pub fn window(&self) -> Result<SpectralWindow> {
        self.window.ok_or(Error::Degenerate("single-point spectrum; declare a window"))
    }

    /// Eigenvector of `λ_min`.
    pub fn min_eigenvector(&self) -> UnitVector {
        UnitVector::normalize(self.decomposition.eigenvector(0)).expect("eigenvectors are unit vectors")
    }

    /// Eigenvector of `λ_max`.
    pub fn max_eigenvector(&self) -> UnitVector {
        UnitVector::normalize(self.decomposition.eigenvector(self.order() - 1)).expect("eigenvectors are unit vectors")
    }

    /// `⟨Ax, x⟩`.
    pub fn quad(&self, x: &UnitVector) -> Result<f64> {
        linalg::quad_form(&self.matrix, x)
    }

    /// `⟨g(A)x, x⟩ = Σ g(λᵢ)·(vᵢ·x)²`.
    pub fn spectral_quad(&self, x: &UnitVector, g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let n = self.order();
        if x.len() != n {
            return Err(Error::Dimension(format!("vector has length {}, matrix order is {n}", x.len())));
        }
        let q = self.decomposition.eigenvector_matrix();
        let x = x.as_slice();
        let mut acc = 0.0;
        for (i, &lambda) in self.decomposition.eigenvalues().iter().enumerate() {
            let c: f64 = (0..n).map(|r| q[r * n + i] * x[r]).sum();
            acc += g(lambda)? * c * c;
        }
        Ok(acc)
    }

    /// `⟨f(A)x, x⟩`.
    pub fn function_quad(&self, f: &ScalarFunction, x: &UnitVector) -> Result<f64> {
        self.spectral_quad(x, |t| {
            if f.is_defined_at(t) {
                Ok(f.eval_unchecked(t))
            } else {
                Err(Error::Domain(format!("eigenvalue {t} is outside the domain of {f}")))
            }
        })
    }

    /// `A^p` as a matrix.
    pub fn power(&self, p: f64) -> Result<HermitianMatrix> {
        linalg::apply_function(&self.decomposition, &ScalarFunction::Power { exponent: p })
    }

    /// Both extreme eigenvectors followed by `extra`.
    pub fn probe_vectors(&self, extra: &[UnitVector]) -> Vec<UnitVector> {
        let mut xs = Vec::with_capacity(extra.len() + 2);
        xs.push(self.min_eigenvector());
        xs.push(self.max_eigenvector());
        xs.extend(extra.iter().cloned());
        xs
    }
}
