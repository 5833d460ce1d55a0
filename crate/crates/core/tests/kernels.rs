mod common;

use common::*;
use proptest::prelude::*;
use tangency::autodiff::Jet2;
use tangency::cones::rump_positive_definite;
use tangency::{Interval, IntervalMatrix, IntervalVector};

fn iv() -> impl Strategy<Value = Interval> {
    (-1e6f64..1e6, 0f64..1e3).prop_map(|(a, w)| Interval::hull_of(a, a + w).unwrap())
}

fn iv_with_point() -> impl Strategy<Value = (Interval, f64)> {
    iv().prop_flat_map(|x| (Just(x), x.lo()..=x.hi()))
}

proptest! {
    #[test]
    fn arithmetic_contains_exact_results((x, px) in iv_with_point(), (y, py) in iv_with_point()) {
        for op in BINARY_OPS {
            if let Some(out) = apply_binary(op, x, y) {
                prop_assert!(contains_rat(&out, &exact_binary(op, px, py)), "{} {:?} {:?}", op, x, y);
            }
        }
    }

    #[test]
    fn unary_operations_are_point_sound((x, px) in iv_with_point()) {
        for op in UNARY_OPS {
            let (x, px) = if op == "sqrt" { (x.abs(), px.abs()) } else { (x, px) };
            if let Some(out) = apply_unary(op, x) {
                prop_assert!(unary_point_sound(op, px, &out), "{} {:?} at {}", op, x, px);
            }
        }
    }

    #[test]
    fn hull_contains_both(a in iv(), b in iv()) {
        let h = a.hull(&b);
        prop_assert!(a.subset_of(&h) && b.subset_of(&h));
    }

    #[test]
    fn decimal_serialization_round_trips(a in iv()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: Interval = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back.lo().to_bits(), a.lo().to_bits());
        prop_assert_eq!(back.hi().to_bits(), a.hi().to_bits());
    }

    #[test]
    fn product_rule_holds_for_jets(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let x = Jet2::variables(&IntervalVector::from_points(&[a, b]));
        let p = &x[0] * &x[1];
        prop_assert!(p.partial(0).contains(b) && p.partial(1).contains(a));
        prop_assert!(p.second(0, 1).contains(1.0) && p.second(0, 0).contains(0.0));
    }

    #[test]
    fn determinant_of_diagonal_is_product(d in proptest::collection::vec(-5.0f64..5.0, 4)) {
        let m = IntervalMatrix::diag(&d.iter().map(|&x| Interval::point(x)).collect::<Vec<_>>());
        let det = m.det4().unwrap();
        prop_assert!(contains_rat(&det, &d.iter().map(|&x| rat(x)).product()));
    }
}

#[test]
fn interval_suite_has_no_violations() {
    let st = interval_suite(20_000, 7);
    assert_eq!(st.violations, 0, "{:?}", st.messages);
}

#[test]
fn elementary_functions_contain_series_values() {
    let st = elementary_series_suite(600, 11);
    assert_eq!(st.violations, 0, "{:?}", st.messages);
    assert_eq!(st.undecided, 0);
}

#[test]
fn wide_arguments_cover_extrema() {
    let x = Interval::new(0.0, 4.0).unwrap();
    assert!(x.sin().contains(1.0) && x.sin().contains(-0.75));
    assert!(x.cos().contains(-1.0));
    let atan = Interval::new(-1e300, 1e300).unwrap().atan();
    assert!(atan.contains(std::f64::consts::FRAC_PI_2) && atan.contains(-std::f64::consts::FRAC_PI_2));
}

#[test]
fn jet_corpus_matches_finite_differences() {
    let corpus = jet_corpus();
    assert_eq!(corpus.len(), 50);
    for (name, e) in &corpus {
        if let Err(msg) = jet_matches_differences(e, &JET_BASE) {
            panic!("{name}: {msg}");
        }
    }
}

#[test]
fn jets_at_second_base_point() {
    for (name, e) in jet_corpus() {
        if let Err(msg) = jet_matches_differences(&e, &[-0.3, 0.8, 0.6]) {
            panic!("{name}: {msg}");
        }
    }
}

#[test]
fn rump_agrees_with_eigenvalue_sampling() {
    let st = rump_suite(300, 3);
    assert_eq!(st.unsound, 0, "{st:?}");
    assert!(st.certified > 30, "{st:?}");
}

#[test]
fn point_matrix_verdict_matches_eigenvalues() {
    let a = IntervalMatrix::from_rows(vec![
        vec![Interval::point(2.0), Interval::point(-1.0), Interval::ZERO],
        vec![Interval::point(-1.0), Interval::point(2.0), Interval::point(-1.0)],
        vec![Interval::ZERO, Interval::point(-1.0), Interval::point(2.0)],
    ])
    .unwrap();
    assert!(rump_positive_definite(&a).unwrap().positive_definite);
    let b = a.sub(&IntervalMatrix::identity(3).scale(Interval::point(0.6))).unwrap();
    // Smallest eigenvalue of the tridiagonal matrix is 2 - √2 ≈ 0.586.
    assert!(!rump_positive_definite(&b).unwrap().positive_definite);
}
