//! Property tests for the jet algebra: polynomial partials are exact,
//! the ring laws hold, and compositions agree with a finite-difference
//! oracle.

use proptest::prelude::*;
use qcst_core::jet::{Jet3, MultiIndex, MULTI_INDEX, NUM_COEFFS};

fn falling(n: u8, k: u8) -> f64 {
    // n (n-1) ... (n-k+1)
    let mut acc = 1.0;
    for step in 0..k {
        acc *= (n - step) as f64;
    }
    acc
}

/// Analytic partial d^beta of the monomial x^alpha at `point`.
fn monomial_partial(alpha: MultiIndex, beta: MultiIndex, point: &[f64; 4]) -> f64 {
    let mut acc = 1.0;
    for v in 0..4 {
        if beta[v] > alpha[v] {
            return 0.0;
        }
        acc *= falling(alpha[v], beta[v]);
        acc *= point[v].powi((alpha[v] - beta[v]) as i32);
    }
    acc
}

fn poly_jet(coeffs: &[f64; NUM_COEFFS], point: &[f64; 4]) -> Jet3 {
    let vars: [Jet3; 4] = core::array::from_fn(|i| Jet3::variable(i, point[i]));
    let mut acc = Jet3::ZERO;
    for (slot, alpha) in MULTI_INDEX.iter().enumerate() {
        if coeffs[slot] == 0.0 {
            continue;
        }
        let mut term = Jet3::constant(coeffs[slot]);
        for v in 0..4 {
            for _ in 0..alpha[v] {
                term = term * vars[v];
            }
        }
        acc = acc + term;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Every partial of a random degree-3 polynomial is reproduced exactly
    /// (up to floating rounding).
    #[test]
    fn polynomial_partials_are_exact(
        coeffs in proptest::array::uniform32(-3.0f64..3.0),
        extra in proptest::array::uniform3(-3.0f64..3.0),
        point in proptest::array::uniform4(-2.0f64..2.0),
    ) {
        let mut full = [0.0; NUM_COEFFS];
        full[..32].copy_from_slice(&coeffs);
        full[32..].copy_from_slice(&extra);
        let jet = poly_jet(&full, &point);
        for &beta in MULTI_INDEX.iter() {
            let expect: f64 = MULTI_INDEX
                .iter()
                .zip(full.iter())
                .map(|(&alpha, &c)| c * monomial_partial(alpha, beta, &point))
                .sum();
            let got = jet.partial(beta);
            let scale = expect.abs().max(1.0);
            prop_assert!(
                (got - expect).abs() <= 1e-12 * scale,
                "partial {beta:?}: {got} vs {expect}"
            );
        }
    }

    /// Multiplication is commutative and associative up to rounding;
    /// addition is exact.
    #[test]
    fn ring_laws(
        a in proptest::array::uniform32(-2.0f64..2.0),
        b in proptest::array::uniform32(-2.0f64..2.0),
        c in proptest::array::uniform32(-2.0f64..2.0),
    ) {
        let mk = |v: &[f64; 32]| {
            let mut coeffs = [0.0; NUM_COEFFS];
            coeffs[..32].copy_from_slice(v);
            Jet3 { coeffs }
        };
        let (x, y, z) = (mk(&a), mk(&b), mk(&c));

        let xy = x * y;
        let yx = y * x;
        for (p, q) in xy.coeffs.iter().zip(yx.coeffs.iter()) {
            prop_assert!((p - q).abs() <= 1e-13 * p.abs().max(1.0));
        }

        let left = (x * y) * z;
        let right = x * (y * z);
        for (p, q) in left.coeffs.iter().zip(right.coeffs.iter()) {
            prop_assert!((p - q).abs() <= 1e-12 * p.abs().max(1.0));
        }

        // addition is plain coefficient-wise IEEE addition
        let sum = x + y;
        for (s, (p, q)) in sum.coeffs.iter().zip(a.iter().zip(b.iter())) {
            prop_assert_eq!(*s, p + q);
        }
    }

    /// First derivatives of two-level elementary compositions agree with a
    /// central difference of step 1e-4 (oracle accuracy ~1e-7).
    #[test]
    fn chain_rule_against_fd_oracle(
        u0 in 0.6f64..1.8,
        shift in 1.5f64..3.0,
        scale in 0.2f64..0.8,
        outer in 0usize..5,
        inner in 0usize..5,
    ) {
        let apply_scalar = |which: usize, x: f64| -> f64 {
            match which {
                0 => x.exp(),
                1 => x.ln(),
                2 => x.sin(),
                3 => x.cosh(),
                _ => x.sqrt(),
            }
        };
        let apply_jet = |which: usize, x: Jet3| -> Jet3 {
            match which {
                0 => x.exp(),
                1 => x.ln().unwrap(),
                2 => x.sin(),
                3 => x.cosh(),
                _ => x.sqrt().unwrap(),
            }
        };
        // inner output shifted into [shift - 1, shift + e], safely positive
        let scalar = |u: f64| apply_scalar(outer, shift + scale * apply_scalar(inner, u));
        let h = 1e-4;
        let fd = (scalar(u0 + h) - scalar(u0 - h)) / (2.0 * h);

        let u = Jet3::variable(0, u0);
        let jet = apply_jet(
            outer,
            Jet3::constant(shift) + apply_jet(inner, u) * scale,
        );
        prop_assert!((jet.value() - scalar(u0)).abs() <= 1e-12 * scalar(u0).abs().max(1.0));
        let d = jet.partial([1, 0, 0, 0]);
        prop_assert!(
            (d - fd).abs() <= 1e-6 * fd.abs().max(1.0),
            "jet {d} vs fd {fd}"
        );
    }
}
