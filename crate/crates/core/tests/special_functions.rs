use oscent::dd::DoubleDouble;
use oscent::special::{f11_kernel, f22_kernel, ln_factorial, EULER_GAMMA};
use proptest::prelude::*;

/// Dawson's integral `e^{-x^2} ∫_0^x e^{t^2} dt` by composite Simpson.
fn dawson(x: f64) -> f64 {
    let intervals = 20_000;
    let h = x / intervals as f64;
    let f = |t: f64| (t * t - x * x).exp();
    let mut s = f(0.0) + f(x);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

/// `1F1(k;1/2;-x^2)` summed term by term in double-double, no transformation.
fn direct_series(k: u32, x: f64) -> f64 {
    let z = -DoubleDouble::square_of(x);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for j in 0..2000u32 {
        let num = DoubleDouble::from_f64(f64::from(k + j));
        let den = DoubleDouble::from_f64((f64::from(j) + 0.5) * f64::from(j + 1));
        term = term * num * z / den;
        sum += term;
        if term.abs().to_f64() < 1e-34 * sum.abs().to_f64().max(1e-300) && f64::from(j) > x * x {
            break;
        }
    }
    sum.to_f64()
}

#[test]
fn f11_first_kernel_matches_dawson() {
    for i in 0..100 {
        let x = 5.0 * f64::from(i) / 99.0;
        let expected = 1.0 - 2.0 * x * dawson(x);
        let got = f11_kernel(1, x).unwrap().value;
        assert!(
            (got - expected).abs() <= 1e-10,
            "x = {x}: {got} vs {expected}"
        );
    }
}

#[test]
fn kummer_agrees_with_direct_extended_series() {
    for k in 1..=10 {
        for i in 0..=50 {
            let x = 0.1 * f64::from(i);
            let got = f11_kernel(k, x).unwrap().value;
            let direct = direct_series(k, x);
            assert!(
                (got - direct).abs() <= 1e-11,
                "k = {k}, x = {x}: {got} vs {direct}"
            );
        }
    }
}

#[test]
fn contiguous_relation_at_negative_argument() {
    // (b-a) M(a-1) + (2a-b+z) M(a) - a M(a+1) = 0, b = 1/2, z = -1.69
    let x: f64 = 1.3;
    let z = -x * x;
    for a in 2..=10u32 {
        let m = |k: u32| f11_kernel(k, x).unwrap().value;
        let af = f64::from(a);
        let r = (0.5 - af) * m(a - 1) + (2.0 * af - 0.5 + z) * m(a) - af * m(a + 1);
        assert!(r.abs() < 1e-12 * (1.0 + af * af), "a = {a}: residual {r}");
    }
}

#[test]
fn f22_large_argument_asymptotics() {
    // x^2 2F2 -> (ln 4x^2 + gamma) / 2 as x grows
    let x: f64 = 24.0;
    let v = f22_kernel(x).unwrap().value * x * x;
    let leading = 0.5 * ((4.0 * x * x).ln() + EULER_GAMMA);
    assert!((v - leading).abs() < 2.0 / (x * x), "{v} vs {leading}");
}

proptest! {
    #[test]
    fn f22_derivative_is_twice_dawson(x in 0.05f64..6.0) {
        // d/dx [x^2 2F2(1,1;3/2,2;-x^2)] = 2x 1F1(1;3/2;-x^2) = 2 Dawson(x)
        let g = |t: f64| t * t * f22_kernel(t).unwrap().value;
        let h = 1e-4;
        let numeric = (g(x + h) - g(x - h)) / (2.0 * h);
        let exact = 2.0 * dawson(x);
        prop_assert!((numeric - exact).abs() < 1e-6, "{} vs {}", numeric, exact);
    }

    #[test]
    fn f11_is_bounded_and_smooth(k in 1u32..12, x in 0.0f64..8.0) {
        let r = f11_kernel(k, x).unwrap();
        prop_assert!(r.value.abs() <= 1.0 + 1e-12);
        prop_assert!(r.abs_error_estimate <= 1e-12);
    }

    #[test]
    fn ln_factorial_recurrence(n in 1u32..5000) {
        let step = ln_factorial(n) - ln_factorial(n - 1);
        let scale = ln_factorial(n).abs().max(1.0) * 4.0 * f64::EPSILON;
        prop_assert!((step - f64::from(n).ln()).abs() <= scale);
    }
}
