//! Property tests for the expression layer: printing any parsed expression
//! and parsing it back must reproduce the tree, and the printed form must be
//! a fixed point.

use convergence::TermExpr;
use proptest::prelude::*;

fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("n".to_string()),
        (1u32..1000).prop_map(|v| v.to_string()),
        (1u32..100, 1u32..100).prop_map(|(a, b)| format!("{a}.{b:02}")),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})+({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
            (inner.clone(), 1u32..6u32).prop_map(|(a, e)| format!("({a})^{e}")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("ln({a})")),
            inner.clone().prop_map(|a| format!("exp({a})")),
            inner.prop_map(|a| format!("sqrt({a})")),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(src in expr_strategy()) {
        let parsed = TermExpr::parse(&src).unwrap();
        let printed = parsed.to_string();
        let reparsed = TermExpr::parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &parsed);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}
