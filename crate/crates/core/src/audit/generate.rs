use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, SpectralWindow, UnitVector};
use crate::rng::SplitMix64;

/// Random `QΛQᵀ` with `λ₁ = m`, `λₙ = M` and the interior eigenvalues uniform
/// in `[m, M]`. `Q` is the orthogonal factor of a Householder QR of a standard
/// normal matrix.
pub fn gen_matrix(w: &SpectralWindow, n: usize, seed: u64) -> Result<HermitianMatrix> {
    random_matrix(&mut SplitMix64::new(seed), w, n)
}

/// Normalized standard-normal vector.
pub fn gen_unit_vector(n: usize, seed: u64) -> Result<UnitVector> {
    random_unit_vector(&mut SplitMix64::new(seed), n)
}

/// [`gen_matrix`] drawing from an existing stream.
pub fn random_matrix(rng: &mut SplitMix64, w: &SpectralWindow, n: usize) -> Result<HermitianMatrix> {
    if n < 2 {
        return Err(Error::Dimension(format!("generated matrices need n >= 2, got {n}")));
    }
    let mut eigenvalues = vec![0.0; n];
    eigenvalues[0] = w.lower();
    eigenvalues[n - 1] = w.upper();
    for value in &mut eigenvalues[1..n - 1] {
        *value = rng.uniform(w.lower(), w.upper());
    }
    let q = random_orthogonal(rng, n);
    HermitianMatrix::diagonal(&eigenvalues)?.conjugate(&q)
}

/// [`gen_unit_vector`] drawing from an existing stream.
pub fn random_unit_vector(rng: &mut SplitMix64, n: usize) -> Result<UnitVector> {
    if n == 0 {
        return Err(Error::Dimension("unit vectors need n >= 1".into()));
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        if let Ok(x) = UnitVector::normalize(v) {
            return Ok(x);
        }
    }
}

/// Row-major orthogonal `Q` from `G = QR`, columns signed so that `diag(R) > 0`.
fn random_orthogonal(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n * n).map(|_| rng.normal()).collect();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut signs = vec![1.0; n];
    let mut v = vec![0.0; n];
    for k in 0..n {
        let norm = libm::sqrt((k..n).map(|i| g[i * n + k] * g[i * n + k]).sum());
        if norm == 0.0 {
            continue;
        }
        let alpha = if g[k * n + k] > 0.0 { -norm } else { norm };
        signs[k] = if alpha < 0.0 { -1.0 } else { 1.0 };
        if k == n - 1 {
            break;
        }
        for i in k..n {
            v[i] = g[i * n + k];
        }
        v[k] -= alpha;
        let vnorm2: f64 = (k..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // G ← H·G on the trailing block.
        for j in k..n {
            let dot: f64 = (k..n).map(|i| v[i] * g[i * n + j]).sum();
            let c = 2.0 * dot / vnorm2;
            for i in k..n {
                g[i * n + j] -= c * v[i];
            }
        }
        // Q ← Q·H.
        for r in 0..n {
            let dot: f64 = (k..n).map(|i| q[r * n + i] * v[i]).sum();
            let c = 2.0 * dot / vnorm2;
            for i in k..n {
                q[r * n + i] -= c * v[i];
            }
        }
    }
    for r in 0..n {
        for (c, sign) in signs.iter().enumerate() {
            q[r * n + c] *= sign;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, summarize};

    #[test]
    fn orthogonal_factor() {
        let mut rng = SplitMix64::new(11);
        for n in [2, 3, 7, 20] {
            let q = random_orthogonal(&mut rng, n);
            for i in 0..n {
                for j in 0..n {
                    let dot: f64 = (0..n).map(|k| q[k * n + i] * q[k * n + j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-13, "n={n} ({i},{j}) {dot}");
                }
            }
        }
    }

    #[test]
    fn endpoints_are_exact() {
        let a = gen_matrix(&SpectralWindow::new(1.0, 2.0).unwrap(), 2, 5).unwrap();
        let ev = eigh(&a).unwrap();
        assert!((ev.eigenvalues()[0] - 1.0).abs() < 1e-13);
        assert!((ev.eigenvalues()[1] - 2.0).abs() < 1e-13);
        for seed in 0..10 {
            let s = summarize(&gen_matrix(&SpectralWindow::new(1.0, 10.0).unwrap(), 16, seed).unwrap()).unwrap();
            assert!((s.lambda_min - 1.0).abs() < 1e-10);
            assert!((s.lambda_max - 10.0).abs() < 1e-10);
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let w = SpectralWindow::new(0.5, 3.0).unwrap();
        assert_eq!(gen_matrix(&w, 6, 9).unwrap(), gen_matrix(&w, 6, 9).unwrap());
        assert_ne!(gen_matrix(&w, 6, 9).unwrap(), gen_matrix(&w, 6, 10).unwrap());
        assert!(matches!(gen_matrix(&w, 1, 0), Err(Error::Dimension(_))));
        assert_eq!(gen_unit_vector(5, 3).unwrap(), gen_unit_vector(5, 3).unwrap());
        assert_eq!(gen_unit_vector(1, 3).unwrap().as_slice()[0].abs(), 1.0);
        let x = gen_unit_vector(64, 1).unwrap();
        let norm: f64 = x.as_slice().iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
