use kaudit_core::audit::{
    feasible_m_for_power, gen_matrix, random_matrix, random_unit_vector, verify_classical_kantorovich, verify_order_variant, Operator, OrderVariant, Verdict,
};
use kaudit_core::bounds::{constant_kf, constant_kf_diff, Form};
use kaudit_core::linalg::eigh;
use kaudit_core::rng::SplitMix64;
use kaudit_core::{HermitianMatrix, ScalarFunction, SpectralWindow};
use proptest::prelude::*;

fn pow(r: f64) -> ScalarFunction {
    ScalarFunction::Power { exponent: r }
}

/// Orthogonal factor from the eigenvectors of a random symmetric matrix.
fn random_orthogonal(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = rng.normal();
            data[i * n + j] = x;
            data[j * n + i] = x;
        }
    }
    eigh(&HermitianMatrix::from_row_major(n, data).unwrap()).unwrap().eigenvector_matrix().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 1 << 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn power_constants_scale(p in 1.2f64..3.0, m in 0.2f64..5.0, ratio in 1.05f64..50.0, c in 0.1f64..10.0) {
        let w = SpectralWindow::new(m, m * ratio).unwrap();
        let scaled = SpectralWindow::new(c * m, c * m * ratio).unwrap();
        // t^p against t^q picks up c^(p-q); with q = p the constant is scale free.
        let k = constant_kf(&pow(p), &w, p).unwrap();
        let ks = constant_kf(&pow(p), &scaled, p).unwrap();
        prop_assert!((k - ks).abs() <= 1e-10 * k.abs().max(1.0));
        let d = constant_kf_diff(&pow(p), &w, p).unwrap();
        let ds = constant_kf_diff(&pow(p), &scaled, p).unwrap();
        prop_assert!((ds - libm::pow(c, p) * d).abs() <= 1e-9 * ds.abs().max(1.0));
    }

    #[test]
    fn classical_verdict_is_scale_free(seed in any::<u64>(), n in 2usize..8, m in 0.2f64..5.0, ratio in 1.05f64..50.0, c in 0.1f64..10.0) {
        let mut rng = SplitMix64::new(seed);
        let w = SpectralWindow::new(m, m * ratio).unwrap();
        let a = random_matrix(&mut rng, &w, n).unwrap();
        let x = random_unit_vector(&mut rng, n).unwrap();
        let v = verify_classical_kantorovich(&Operator::new(a.clone()).unwrap(), &x).unwrap();
        let vs = verify_classical_kantorovich(&Operator::new(a.scale(c)).unwrap(), &x).unwrap();
        // The reported link can switch under scaling (one side scales by c^2), so
        // only the verdict and the relative slack are compared.
        prop_assert_eq!(v.passed, vs.passed);
        prop_assert!(v.margin / v.rhs >= -1e-12 && vs.margin / vs.rhs >= -1e-12);
    }

    #[test]
    fn order_verdict_is_basis_free(
        seed in any::<u64>(),
        n in 2usize..7,
        p in 0.2f64..0.95,
        q in 0.2f64..0.95,
        s_frac in 0.05f64..0.95,
        ratio_variant in any::<bool>(),
    ) {
        let (variant, form) = if ratio_variant { (OrderVariant::Ratio, Form::Ratio) } else { (OrderVariant::Difference, Form::Difference) };
        let set = feasible_m_for_power(p, q, 1.0, form).unwrap();
        let mut rng = SplitMix64::new(seed);
        let upper = set.sample(&mut rng, 1.0, 100.0);
        prop_assume!(upper.is_some());
        let w = SpectralWindow::new(1.0, upper.unwrap()).unwrap();
        let s = s_frac * p.min(q);
        let a = gen_matrix(&w, n, seed).unwrap();
        let extra = gen_matrix(&SpectralWindow::new(0.01, 1.0).unwrap(), n, seed ^ 1).unwrap();
        let b = a.add(&extra).unwrap();
        let qm = random_orthogonal(n, seed ^ 2);
        let run = |a: &HermitianMatrix, b: &HermitianMatrix| -> Verdict {
            let a = Operator::new(a.clone()).unwrap();
            let b = Operator::new(b.clone()).unwrap();
            verify_order_variant(variant, &a, &b, p, q, s).unwrap()
        };
        let plain = run(&a, &b);
        let rotated = run(&a.conjugate(&qm).unwrap(), &b.conjugate(&qm).unwrap());
        prop_assert!((plain.margin - rotated.margin).abs() <= 1e-9 * plain.rhs.abs().max(1.0));
        prop_assert_eq!(plain.regime, rotated.regime);
    }

    #[test]
    fn generated_spectrum_hits_window(seed in any::<u64>(), n in 2usize..24, m in 0.05f64..10.0, ratio in 1.01f64..1e3) {
        let w = SpectralWindow::new(m, m * ratio).unwrap();
        let dec = eigh(&gen_matrix(&w, n, seed).unwrap()).unwrap();
        prop_assert!((dec.min_eigenvalue() - w.lower()).abs() <= 1e-10 * w.upper().max(1.0));
        prop_assert!((dec.max_eigenvalue() - w.upper()).abs() <= 1e-10 * w.upper().max(1.0));
    }

    #[test]
    fn verdict_pass_rule(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3) {
        let v = Verdict::new("probe", Default::default(), None, lhs, rhs, rhs - lhs);
        prop_assert_eq!(v.passed, rhs - lhs >= -1e-9 * rhs.abs().max(1.0));
    }
}
