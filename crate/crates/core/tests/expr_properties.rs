//! Property tests for the expression layer: printing round-trips, and the
//! jet evaluator agrees with the independent scalar evaluator on a random
//! corpus.

use proptest::prelude::*;
use qcst_core::expr::{BinOp, Expr, Func, Params};
use qcst_core::jet::Jet3;

const COORDS: [&str; 4] = ["t", "x", "y", "z"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0.01f64..100.0).prop_map(|value| Expr::Number { value, pos: 0 }),
        (0usize..4).prop_map(|index| Expr::Variable {
            name: COORDS[index].into(),
            index,
            pos: 0,
        }),
        prop_oneof![Just("k1"), Just("k2")].prop_map(|name| Expr::Parameter {
            name: name.into(),
            pos: 0,
        }),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Expr::Binary {
                    op,
                    lhs: Box::new(l),
                    rhs: Box::new(r),
                    pos: 0,
                }),
            (inner.clone(), 0i32..4).prop_map(|(l, n)| Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(l),
                rhs: Box::new(Expr::Number {
                    value: n as f64,
                    pos: 0,
                }),
                pos: 0,
            }),
            inner.clone().prop_map(|c| Expr::Neg {
                child: Box::new(c),
                pos: 0,
            }),
            (
                prop_oneof![
                    Just(Func::Exp),
                    Just(Func::Log),
                    Just(Func::Sin),
                    Just(Func::Cos),
                    Just(Func::Sinh),
                    Just(Func::Cosh),
                    Just(Func::Sqrt)
                ],
                inner
            )
                .prop_map(|(func, a)| Expr::Call {
                    func,
                    arg: Box::new(a),
                    pos: 0,
                }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Pretty-printing then re-parsing yields a structurally identical tree.
    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        let back = Expr::parse_str(&printed, &COORDS)
            .unwrap_or_else(|err| panic!("`{printed}` failed to re-parse: {err}"));
        prop_assert_eq!(&e, &back, "{}", printed);
    }

    /// The jet value coefficient matches the plain scalar evaluator, and
    /// the two paths fail on exactly the same inputs.
    #[test]
    fn jet_value_matches_scalar_oracle(
        e in arb_expr(),
        point in proptest::array::uniform4(0.3f64..2.0),
        k1 in 0.5f64..2.0,
        k2 in 0.5f64..2.0,
    ) {
        let mut params = Params::new();
        params.insert("k1".into(), k1);
        params.insert("k2".into(), k2);
        let env: [Jet3; 4] = core::array::from_fn(|i| Jet3::variable(i, point[i]));

        let scalar = e.eval_scalar(&point, &params);
        let jet = e.evaluate(&env, &params);
        match (scalar, jet) {
            (Ok(s), Ok(j)) => {
                if s.is_finite() {
                    let scale = s.abs().max(1.0);
                    prop_assert!(
                        (j.value() - s).abs() <= 1e-12 * scale,
                        "jet {} vs scalar {s}",
                        j.value()
                    );
                } else {
                    // overflow cases must overflow on both paths
                    prop_assert!(!j.value().is_finite());
                }
                // purity: evaluating twice is bit-identical (NaN included)
                let again = e.evaluate(&env, &params).unwrap();
                for (a, b) in j.coeffs.iter().zip(again.coeffs.iter()) {
                    prop_assert_eq!(a.to_bits(), b.to_bits());
                }
            }
            (Err(_), Err(_)) => {}
            (s, j) => prop_assert!(false, "paths disagree: scalar {s:?}, jet {j:?}"),
        }
    }
}
