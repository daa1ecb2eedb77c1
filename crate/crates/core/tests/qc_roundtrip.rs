//! Round-trip property: detection applied to a reconstructed curvature
//! tensor recovers the scalars and generator it was built from, on random
//! well-conditioned Lorentzian metrics.

use proptest::prelude::*;
use qcst_core::linalg::{self, Mat4, Vec4};
use qcst_core::qc::{detect_from_tensors, reconstruct_riemann};

const ETA: Mat4 = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// `g = B^T eta B` with `B = I + 0.3 S`: Lorentzian and well-conditioned.
fn lorentzian_from(s: &[[f64; 4]; 4]) -> Mat4 {
    let b = linalg::mat4(|i, j| if i == j { 1.0 } else { 0.0 } + 0.3 * s[i][j]);
    linalg::mat4(|i, j| linalg::sum2(|p, q| b[p][i] * ETA[p][q] * b[q][j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn detect_inverts_reconstruct(
        s_rows in proptest::array::uniform4(proptest::array::uniform4(-1.0f64..1.0)),
        raw_spatial in proptest::array::uniform3(-0.4f64..0.4),
        gamma in -2.0f64..2.0,
        mu_mag in 0.1f64..2.0,
        mu_negative in any::<bool>(),
    ) {
        let g = lorentzian_from(&s_rows);
        prop_assume!(linalg::invert4(&g).is_some());

        // a timelike direction near the coordinate time axis
        let raw: Vec4 = [1.0, raw_spatial[0], raw_spatial[1], raw_spatial[2]];
        let q = linalg::sum2(|i, j| g[i][j] * raw[i] * raw[j]);
        prop_assume!(q < -0.05);
        let mut a: Vec4 = core::array::from_fn(|i| raw[i] / (-q).sqrt());
        if a[0] < 0.0 {
            a = core::array::from_fn(|i| -a[i]);
        }
        let a_cov: Vec4 = core::array::from_fn(|i| linalg::sum1(|j| g[i][j] * a[j]));

        let mu = if mu_negative { -mu_mag } else { mu_mag };
        let riemann = reconstruct_riemann(gamma, mu, &a_cov, &g);
        let report = detect_from_tensors(&g, &riemann, 1e-9).unwrap();

        prop_assert!(report.is_qc, "{report:?}");
        prop_assert!(!report.constant_curvature);
        let scale = gamma.abs().max(mu.abs()).max(1.0);
        prop_assert!((report.gamma - gamma).abs() <= 1e-9 * scale);
        prop_assert!((report.mu - mu).abs() <= 1e-9 * scale);
        let gen = report.generator.unwrap();
        prop_assert!(gen.contravariant[0] > 0.0);
        for i in 0..4 {
            prop_assert!(
                (gen.contravariant[i] - a[i]).abs() <= 1e-9,
                "A^{i}: {} vs {}",
                gen.contravariant[i],
                a[i]
            );
        }
        prop_assert!(report.riemann_residual_rel <= 1e-9);
    }

    /// The constant-curvature branch: reconstruction with mu = 0 detects
    /// with no generator and gamma recovered.
    #[test]
    fn constant_curvature_branch(
        s_rows in proptest::array::uniform4(proptest::array::uniform4(-1.0f64..1.0)),
        gamma in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
    ) {
        let g = lorentzian_from(&s_rows);
        prop_assume!(linalg::invert4(&g).is_some());
        let riemann = reconstruct_riemann(gamma, 0.0, &[0.0; 4], &g);
        let report = detect_from_tensors(&g, &riemann, 1e-9).unwrap();
        prop_assert!(report.constant_curvature, "{report:?}");
        prop_assert!(report.is_qc);
        prop_assert!(report.generator.is_none());
        prop_assert!((report.gamma - gamma).abs() <= 1e-9 * gamma.abs().max(1.0));
        prop_assert_eq!(report.mu, 0.0);
    }
}
