mod common;

use common::{parse, polynomial_pairs, THEOREM_CORPUS};
use fraclim::fracderiv::{
    caputo, caputo_closed, caputo_quadrature, riemann_liouville, rl_caputo_bridge,
};
use fraclim::leibniz::{integer_leibniz_report, leibniz_defect};
use fraclim::lfd::{lfd_estimate, lfd_exact, DEFAULT_EXPONENT_TOL};
use fraclim::{
    Classification, DerivKind, FracOrder, FuncExpr, Method, QuadratureConfig, ScanConfig,
};
use proptest::prelude::*;

fn ord(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn poly() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5..2.0f64, 1..=6)
}

fn non_integer_order() -> impl Strategy<Value = f64> {
    (0.05..2.95f64).prop_filter("non-integer", |a| (a - a.round()).abs() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_tracks_closed_form(coeffs in poly(), al in non_integer_order(), x in 0.2..2.0f64) {
        let f = FuncExpr::polynomial(0.0, &coeffs);
        let cfg = QuadratureConfig::with_nodes(2048).unwrap();
        let closed = caputo_closed(&f, ord(al), 0.0, x).unwrap().value;
        let q = caputo_quadrature(&f, ord(al), 0.0, x, &cfg).unwrap();
        let err = (q.value - closed).abs();
        prop_assert!(err <= 1e-6 * closed.abs().max(1.0));
        prop_assert!(err <= 4.0 * q.est_error.unwrap() + 1e-12);
    }

    #[test]
    fn caputo_is_linear(p in poly(), s in -3.0..3.0f64, al in non_integer_order()) {
        let cfg = QuadratureConfig::default();
        let f = FuncExpr::polynomial(0.0, &p);
        let g = FuncExpr::sin(1.0, 1.5, 0.2);
        let combo = f.clone() + s * &g;
        let lhs = caputo_quadrature(&combo, ord(al), 0.0, 1.0, &cfg).unwrap().value;
        let rhs = caputo_quadrature(&f, ord(al), 0.0, 1.0, &cfg).unwrap().value
            + s * caputo(&g, ord(al), 0.0, 1.0, &cfg).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn rl_and_caputo_differ_by_boundary_terms(coeffs in poly(), al in non_integer_order(), x in 0.3..2.0f64) {
        let cfg = QuadratureConfig::default();
        let f = FuncExpr::polynomial(0.0, &coeffs);
        let rl = riemann_liouville(&f, ord(al), 0.0, x, &cfg).unwrap().value;
        let bridged = rl_caputo_bridge(&f, ord(al), 0.0, x, &cfg).unwrap();
        prop_assert_eq!(bridged.method, Method::Bridge);
        prop_assert!((rl - bridged.value).abs() <= 1e-10 * rl.abs().max(1.0));
    }

    #[test]
    fn integer_order_is_classical_derivative(k in 1u32..=3, x in 0.1..2.0f64) {
        let cfg = QuadratureConfig::default();
        for f in [FuncExpr::exp(1.0, 0.7), FuncExpr::polynomial(0.0, &[1.0, 2.0, 3.0, 4.0])] {
            let want = f.derivative(k).unwrap().evaluate(x).unwrap();
            let c = caputo(&f, ord(f64::from(k)), 0.0, x, &cfg).unwrap().value;
            let r = riemann_liouville(&f, ord(f64::from(k)), 0.0, x, &cfg).unwrap().value;
            prop_assert!((c - want).abs() <= 1e-12 * want.abs().max(1.0));
            prop_assert!((r - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }
}

#[test]
fn finer_scan_does_not_move_classification() {
    let base = ScanConfig {
        count: 24,
        ..ScanConfig::default()
    };
    let fine = ScanConfig {
        h0: base.h0 / 10.0,
        ..base
    };
    for &(s, a) in &THEOREM_CORPUS[..20] {
        let f = parse(s);
        for al in [0.5, 1.0, 1.5, 2.0] {
            let c0 = lfd_estimate(&f, ord(al), a, &base, DEFAULT_EXPONENT_TOL)
                .unwrap()
                .classification;
            let c1 = lfd_estimate(&f, ord(al), a, &fine, DEFAULT_EXPONENT_TOL)
                .unwrap()
                .classification;
            match (c0, c1) {
                (Classification::Finite { limit: l0 }, Classification::Finite { limit: l1 }) => {
                    assert!(
                        (l0 - l1).abs() <= 1e-5 * l0.abs().max(1.0),
                        "{s} @ {a}, {al}: {l0} vs {l1}"
                    )
                }
                (c0, c1) => assert_eq!(c0, c1, "{s} @ {a}, alpha {al}"),
            }
        }
    }
}

#[test]
fn numeric_classification_agrees_with_exact() {
    let cfg = ScanConfig::default();
    let cases = [
        FuncExpr::polynomial(0.0, &[1.0, 2.0, 3.0]),
        FuncExpr::monomial(2.0, 0.0, 3),
        FuncExpr::power(1.0, 0.0, 1.5).unwrap(),
        FuncExpr::power(1.0, 0.0, 0.8).unwrap(),
        FuncExpr::power(1.0, 0.0, 2.5).unwrap() + FuncExpr::monomial(1.0, 0.0, 1),
    ];
    for f in &cases {
        for al in [0.3, 0.8, 1.0, 1.5, 2.0] {
            let Ok(exact) = lfd_exact(f, ord(al), 0.0) else {
                continue;
            };
            let est = lfd_estimate(f, ord(al), 0.0, &cfg, DEFAULT_EXPONENT_TOL)
                .unwrap()
                .classification;
            match (exact, est) {
                (Classification::Finite { limit: l0 }, Classification::Finite { limit: l1 }) => {
                    assert!(
                        (l0 - l1).abs() <= 1e-3 * l0.abs().max(1.0),
                        "{f}, {al}: {l0} vs {l1}"
                    )
                }
                (exact, est) => assert_eq!(exact, est, "{f}, alpha {al}"),
            }
        }
    }
}

#[test]
fn leibniz_defect_vanishes_only_at_first_order() {
    let cfg = QuadratureConfig::default();
    let points = [0.5, 1.0, 1.7];
    for (f, g) in polynomial_pairs() {
        let one = leibniz_defect(&f, &g, ord(1.0), 0.0, &points, &cfg, DerivKind::Caputo).unwrap();
        assert!(one.max_abs_defect <= 1e-10);
        let sum = integer_leibniz_report(&f, &g, 2, 0.0, &points, &cfg).unwrap();
        assert!(
            sum.max_abs_defect <= 1e-9,
            "{f} * {g}: {}",
            sum.max_abs_defect
        );
    }
    let x = FuncExpr::monomial(1.0, 0.0, 1);
    for al in [0.25, 0.5, 0.75, 1.5, 2.0, 2.5] {
        for op in [DerivKind::Caputo, DerivKind::RiemannLiouville] {
            if op == DerivKind::Caputo && al > 2.0 {
                // Every factor is annihilated there.
                continue;
            }
            let r = leibniz_defect(&x, &x, ord(al), 0.0, &points, &cfg, op).unwrap();
            assert!(r.max_abs_defect > 1e-3, "alpha {al}, {op:?}");
        }
    }
}
