use oscent::oracle::{
    moment_check, quadrature_entropy, quadrature_entropy_1d_with, quadrature_entropy_2d,
    quadrature_entropy_functional, QuadratureConfig,
};
use oscent::{Evaluator, Execution, StateSpec};

#[test]
fn closed_form_matches_quadrature_up_to_twenty() {
    let ev = Evaluator::shared();
    let cfg = QuadratureConfig::default();
    for n in 0..=20 {
        for alpha in [0.25, 1.0, 4.0] {
            let formula = ev
                .position_entropy(&StateSpec::new(vec![n], alpha).unwrap())
                .unwrap();
            let q = quadrature_entropy_1d_with(n, alpha, &cfg, Execution::default()).unwrap();
            assert!(
                (formula - q.value).abs() <= 1e-8,
                "n = {n}, alpha = {alpha}"
            );
            assert!(q.abs_error < 1e-8);
        }
    }
}

#[test]
fn sequential_and_parallel_quadrature_agree_bitwise() {
    let cfg = QuadratureConfig::default();
    for n in [3, 11] {
        let a = quadrature_entropy_1d_with(n, 1.0, &cfg, Execution::Sequential).unwrap();
        let b = quadrature_entropy_1d_with(n, 1.0, &cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn multi_dimensional_state_by_quadrature() {
    let s = StateSpec::new(vec![2, 0, 5], 0.7).unwrap();
    let q = quadrature_entropy(&s, &QuadratureConfig::default()).unwrap();
    let formula = Evaluator::shared().position_entropy(&s).unwrap();
    assert!((q.value - formula).abs() < 1e-9);
}

#[test]
fn two_dimensional_integral_is_separable() {
    let cfg = QuadratureConfig {
        rel_tol: 1e-9,
        abs_tol: 1e-11,
        panel_order: 15,
        ..QuadratureConfig::default()
    };
    let q = quadrature_entropy_2d(1, 1, 1.0, &cfg).unwrap();
    let expected = 2.0 * Evaluator::shared().entropy_1d(1).unwrap();
    assert!((q.value - expected).abs() < 1e-8, "{q:?} vs {expected}");
}

#[test]
fn entropy_functional_matches_quadrature() {
    let ev = Evaluator::shared();
    let cfg = QuadratureConfig::default();
    for n in 0..=10 {
        let q = quadrature_entropy_functional(n, &cfg).unwrap();
        let formula = ev.normalized_entropy_functional(n).unwrap();
        assert!(
            (q.value - formula).abs() <= 1e-9,
            "n = {n}: {} vs {formula}",
            q.value
        );
    }
}

#[test]
fn second_moment_identity() {
    for n in 0..=30 {
        for alpha in [0.25, 1.0, 4.0] {
            let m = moment_check(n, alpha).unwrap();
            let expected = f64::from(n) + 0.5;
            assert!((m - expected).abs() <= 1e-12 * expected, "n = {n}: {m}");
        }
    }
}
