mod common;

use proptest::prelude::*;
use tangency::toy::*;
use tangency::{Error, Interval};

fn params() -> impl Strategy<Value = ToyModelParams> {
    (
        prop_oneof![1.2f64..6.0, -6.0f64..-1.2],
        prop_oneof![0.05f64..0.9, -0.9f64..-0.05],
        0.1f64..0.9,
        0.001f64..0.05,
    )
        .prop_map(|(lambda, mu, delta, epsilon)| ToyModelParams { lambda, mu, delta, epsilon })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Either the sizes do not fit the two neighborhoods, or the whole chain certifies.
    #[test]
    fn chain_certifies_whenever_it_fits(p in params(), k in 1usize..5, s in 1usize..4) {
        match run_toy(p, k, s) {
            Err(Error::Config(_)) => {}
            Err(e) => prop_assert!(false, "{:?}: {}", p, e),
            Ok(r) => {
                prop_assert!(r.verified, "{:?} k={} s={}: {:?}", p, k, s, r.failures());
            }
        }
    }

    #[test]
    fn cones_fail_when_a_coefficient_stalls(p in params(), k in 2usize..5, s in 2usize..4, which in 0usize..2) {
        let Ok(chain) = build_toy_chain(p, k, s) else { return Ok(()) };
        let mut scheme = ToyFormScheme::standard(k, s);
        let link = if which == 0 {
            scheme.n_a[1] = scheme.n_a[0];
            0
        } else {
            scheme.m_a[s] = scheme.m_a[s - 1];
            k + s
        };
        let out = check_toy_cones(&chain, &scheme).unwrap();
        prop_assert!(!out[link].as_ref().unwrap().positive_definite);
        let others = out.iter().enumerate().filter(|(i, _)| *i != link);
        for (i, c) in others {
            prop_assert!(c.as_ref().unwrap().positive_definite, "link {}", i);
        }
    }

    #[test]
    fn determinant_ignores_the_mixed_term(a in -1e3f64..1e3, b in -1e3f64..1e3, c in -1e3f64..1e3) {
        let p = Interval::point;
        let det = transversality_determinant(p(a), p(b), p(c));
        prop_assert!((det - p(a) * p(b)).contains_zero());
        prop_assert!(common::contains_rat(&det, &(common::rat(a) * common::rat(b))));
    }
}

#[test]
fn random_parameters_mostly_fit() {
    let mut fitted = 0;
    let mut r = common::rng(5);
    use rand::Rng;
    for _ in 0..200 {
        let p = ToyModelParams {
            lambda: r.gen_range(1.5..4.0),
            mu: r.gen_range(0.1..0.8),
            delta: r.gen_range(0.2..0.8),
            epsilon: 0.01,
        };
        if let Ok(rep) = run_toy(p, 3, 2) {
            assert!(rep.verified, "{p:?}");
            fitted += 1;
        }
    }
    assert!(fitted > 100, "only {fitted} of 200 parameter sets fit");
}

#[test]
fn infeasible_sizes_are_reported_as_configuration_errors() {
    let p = ToyModelParams { lambda: 1.05, ..ToyModelParams::default() };
    assert!(matches!(build_toy_chain(p, 3, 2), Err(Error::Config(_))));
    assert!(matches!(build_toy_chain(ToyModelParams::default(), 0, 2), Err(Error::Config(_))));
}
