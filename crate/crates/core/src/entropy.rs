//! Closed-form Shannon entropies of the D-dimensional oscillator states.
//!
//! The position entropy separates over Cartesian coordinates,
//! `S = sum_i S_1(n_i) - (D/2) ln alpha`, where `S_1(n)` is the one-dimensional
//! entropy at unit strength:
//!
//! ```text
//! S_1(n) = ln(2^n n! sqrt(pi)) + n + 1/2 + n gamma
//!        - 2 sum_j x_j^2 2F2(1,1;3/2,2;-x_j^2)
//!        + sum_k C(n,k) (-2)^k / k  sum_j 1F1(k;1/2;-x_j^2)
//! ```
//!
//! with `x_j` the zeros of `H_n`. The `k`-sum has terms of size up to
//! `3^n / n` that cancel to O(1), so it is carried in the evaluator's
//! [`Precision`]; each kernel is evaluated at the exact `f64` root, and root
//! error only enters through the derivative of the combined per-root term.
//! All entropies are in nats.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{OnceLock, RwLock};

use crate::dd::{compensated_sum, DoubleDouble, Scalar};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hermite::{hermite_roots, RootSet, DEFAULT_ROOT_ACCURACY};
use crate::special::{
    kummer_neg, ln_factorial, z_f22, Precision, EULER_GAMMA_DD, HALF_LN_PI_DD, KERNEL_RANGE,
};

/// Largest estimated absolute error an entropy is reported with; beyond it
/// the evaluation fails instead.
pub const ENTROPY_ERROR_BUDGET: f64 = 1e-6;

/// A stationary state: occupations `n_1..n_D` and oscillator strength `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    occupations: Vec<u32>,
    alpha: f64,
}

impl StateSpec {
    pub fn new(occupations: Vec<u32>, alpha: f64) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::InvalidState(
                "occupation list must not be empty".into(),
            ));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidState("alpha must be positive".into()));
        }
        Ok(Self { occupations, alpha })
    }

    pub fn ground(dims: usize, alpha: f64) -> Result<Self> {
        Self::uniform(dims, 0, alpha)
    }

    pub fn uniform(dims: usize, fill: u32, alpha: f64) -> Result<Self> {
        Self::new(vec![fill; dims], alpha)
    }

    pub fn dims(&self) -> usize {
        self.occupations.len()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Principal quantum number `N = sum n_i`.
    pub fn total(&self) -> u64 {
        self.occupations.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.occupations.clone(), alpha)
    }

    fn half_dims(&self) -> f64 {
        self.dims() as f64 / 2.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub position_entropy: f64,
    pub momentum_entropy: f64,
    pub uncertainty_sum: f64,
    pub energy: f64,
    pub per_dimension_position: Vec<f64>,
    pub abs_error_estimate: f64,
}

/// `S_1(n)` at unit strength with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneDimEntropy {
    pub value: f64,
    pub abs_error: f64,
}

/// Energy eigenvalue `(N + D/2) omega` with `omega = alpha`.
pub fn energy(state: &StateSpec) -> f64 {
    (state.total() as f64 + state.half_dims()) * state.alpha
}

/// `N ln 2 + sum ln n_i! + (D/2) ln(pi / alpha)`.
pub fn i1_component(state: &StateSpec) -> f64 {
    let factorials = compensated_sum(state.occupations.iter().map(|&n| ln_factorial(n)));
    state.total() as f64 * LN_2 + factorials + state.half_dims() * (PI / state.alpha).ln()
}

/// `N + D/2`; the strength drops out.
pub fn i2_component(state: &StateSpec) -> f64 {
    state.total() as f64 + state.half_dims()
}

/// Per-root pieces of the root sums, in working precision.
struct RootTerm<S> {
    /// `x^2 2F2(1,1;3/2,2;-x^2)`
    f22: S,
    /// `sum_k c_k 1F1(k;1/2;-x^2)`
    k_sum: S,
    /// kernel truncation and rounding
    error: f64,
    /// `|d/dx (2 f22)| + |d/dx k_sum|`
    slope: f64,
}

/// `c_k = C(n,k) (-2)^k / k` for `k = 1..=n`.
fn k_coefficients<S: Scalar>(n: u32) -> Vec<S> {
    let mut binom = S::from_f64(1.0);
    let mut pow = 1.0f64;
    (1..=n)
        .map(|k| {
            binom = binom * S::from_f64(f64::from(n - k + 1)) / S::from_f64(f64::from(k));
            pow *= -2.0;
            binom * S::from_f64(pow) / S::from_f64(f64::from(k))
        })
        .collect()
}

fn root_term<S: Scalar>(coeffs: &[S], x: f64) -> Result<RootTerm<S>> {
    if x.abs() > KERNEL_RANGE {
        return Err(Error::OutOfRange {
            function: "entropy root sum",
            x,
            limit: KERNEL_RANGE,
        });
    }
    let z = S::square_of(x);
    let f22 = z_f22::<S>(x)?;
    let dawson_like = kummer_neg(1.0, 1.5, z)?;

    let mut k_sum = S::from_f64(0.0);
    let mut k_slope = S::from_f64(0.0);
    let mut error = 2.0 * f22.error + 4.0 * x.abs() * dawson_like.error;
    let mut magnitude = 0.0;
    for (i, &c) in coeffs.iter().enumerate() {
        let k = (i + 1) as f64;
        let m = kummer_neg(k, 0.5, z)?;
        let dm = kummer_neg(k + 1.0, 1.5, z)?;
        k_sum += c * m.value;
        k_slope += c * S::from_f64(k) * dm.value;
        let ca = c.abs_f64();
        error += ca * m.error;
        magnitude += ca * m.value.abs_f64();
    }
    error += 2.0 * S::UNIT_ROUNDOFF * magnitude;
    // d/dx [x^2 2F2] = 2 x 1F1(1;3/2;-x^2), d/dx 1F1(k;1/2;-x^2) = -4 k x 1F1(k+1;3/2;-x^2)
    let slope = 4.0 * (x * dawson_like.value.to_f64()).abs() + (4.0 * x * k_slope.to_f64()).abs();
    Ok(RootTerm {
        f22: f22.value,
        k_sum,
        error,
        slope,
    })
}

/// Root multiplicity under the `x -> -x` symmetry.
fn multiplicity(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        2.0
    }
}

struct RootSums<S> {
    f22: S,
    k_sum: S,
    error: f64,
}

/// Evaluates and weights the per-root terms over the non-negative roots.
fn root_sums<S: Scalar>(roots: &RootSet, execution: Execution) -> Result<RootSums<S>> {
    let coeffs = k_coefficients::<S>(roots.degree());
    let terms = execution.try_map(roots.non_negative(), |&x| root_term(&coeffs, x))?;
    let mut f22 = S::from_f64(0.0);
    let mut k_sum = S::from_f64(0.0);
    let mut error = 0.0;
    for (term, &x) in terms.iter().zip(roots.non_negative()) {
        let w = multiplicity(x);
        f22 += term.f22 * S::from_f64(w);
        k_sum += term.k_sum * S::from_f64(w);
        error += w * (term.error + term.slope * roots.accuracy());
    }
    Ok(RootSums { f22, k_sum, error })
}

fn dd_sum<S: Scalar>(parts: &[S]) -> (S, f64) {
    let mut acc = S::from_f64(0.0);
    let mut mag = 0.0;
    for &p in parts {
        acc += p;
        mag += p.abs_f64();
    }
    (acc, mag)
}

fn gamma<S: Scalar>() -> S {
    S::from_f64(EULER_GAMMA_DD.hi) + S::from_f64(EULER_GAMMA_DD.lo)
}

fn ln2<S: Scalar>() -> S {
    S::from_f64(DoubleDouble::LN_2.hi) + S::from_f64(DoubleDouble::LN_2.lo)
}

fn half_ln_pi<S: Scalar>() -> S {
    S::from_f64(HALF_LN_PI_DD.hi) + S::from_f64(HALF_LN_PI_DD.lo)
}

fn one_dim_entropy<S: Scalar>(
    n: u32,
    accuracy: f64,
    execution: Execution,
) -> Result<OneDimEntropy> {
    let nf = f64::from(n);
    let ln_fact = ln_factorial(n);
    let constant = S::from_f64(nf) * (ln2::<S>() + gamma::<S>())
        + S::from_f64(ln_fact)
        + half_ln_pi::<S>()
        + S::from_f64(nf + 0.5);
    if n == 0 {
        let value = constant.to_f64();
        return Ok(OneDimEntropy {
            value,
            abs_error: f64::EPSILON * value.abs(),
        });
    }
    let roots = hermite_roots(n, accuracy)?;
    let sums = root_sums::<S>(&roots, execution)?;
    let parts = [constant, -(sums.f22 * S::from_f64(2.0)), sums.k_sum];
    let (total, magnitude) = dd_sum(&parts);
    let value = total.to_f64();
    let abs_error = sums.error
        + f64::EPSILON * ln_fact
        + 4.0 * S::UNIT_ROUNDOFF * magnitude
        + f64::EPSILON / 2.0 * value.abs();
    if abs_error.is_nan() || abs_error > ENTROPY_ERROR_BUDGET {
        return Err(Error::ErrorBudget {
            function: "entropy_1d",
            estimate: abs_error,
            budget: ENTROPY_ERROR_BUDGET,
        });
    }
    Ok(OneDimEntropy { value, abs_error })
}

/// Normalised logarithmic potential `V_n(x) / (2^n n! sqrt(pi))`:
/// `ln 2 + gamma/2 - x^2 2F2(1,1;3/2,2;-x^2) + (1/2) sum_k c_k 1F1(k;1/2;-x^2)`.
fn normalized_log_potential_in<S: Scalar>(coeffs: &[S], x: f64) -> Result<S> {
    let t = root_term(coeffs, x)?;
    Ok(ln2::<S>() + gamma::<S>() * S::from_f64(0.5) - t.f22 + t.k_sum * S::from_f64(0.5))
}

fn normalized_entropy_functional_in<S: Scalar>(
    n: u32,
    accuracy: f64,
    execution: Execution,
) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let roots = hermite_roots(n, accuracy)?;
    let coeffs = k_coefficients::<S>(n);
    let brackets =
        execution.try_map(roots.roots(), |&x| normalized_log_potential_in(&coeffs, x))?;
    let mut sum = S::from_f64(0.0);
    for b in brackets {
        sum += b;
    }
    let value = S::from_f64(2.0 * f64::from(n)) * ln2::<S>() - sum * S::from_f64(2.0);
    Ok(value.to_f64())
}

/// `ln(2^n n! sqrt(pi))`.
fn ln_norm(n: u32) -> f64 {
    f64::from(n) * LN_2 + ln_factorial(n) + 0.5 * PI.ln()
}

/// Closed-form entropy evaluator with a memo of one-dimensional values.
#[derive(Debug)]
pub struct Evaluator {
    precision: Precision,
    root_accuracy: f64,
    execution: Execution,
    cache: RwLock<HashMap<u32, OneDimEntropy>>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(Precision::default())
    }
}

impl Evaluator {
    pub fn new(precision: Precision) -> Self {
        Self {
            precision,
            root_accuracy: DEFAULT_ROOT_ACCURACY,
            execution: Execution::default(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn with_root_accuracy(mut self, accuracy: f64) -> Self {
        self.root_accuracy = accuracy;
        self
    }

    /// Process-wide extended-precision evaluator used by the free functions.
    pub fn shared() -> &'static Evaluator {
        static SHARED: OnceLock<Evaluator> = OnceLock::new();
        SHARED.get_or_init(Evaluator::default)
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// `S_1(n)` at unit strength. Memoised: concurrent callers may both
    /// compute a missing entry, but every caller observes the same value.
    pub fn one_dim(&self, n: u32) -> Result<OneDimEntropy> {
        if let Some(v) = self.cache.read().expect("entropy cache poisoned").get(&n) {
            return Ok(*v);
        }
        let v = match self.precision {
            Precision::Double => one_dim_entropy::<f64>(n, self.root_accuracy, self.execution)?,
            Precision::Extended => {
                one_dim_entropy::<DoubleDouble>(n, self.root_accuracy, self.execution)?
            }
        };
        let mut cache = self.cache.write().expect("entropy cache poisoned");
        Ok(*cache.entry(n).or_insert(v))
    }

    pub fn entropy_1d(&self, n: u32) -> Result<f64> {
        Ok(self.one_dim(n)?.value)
    }

    /// `V_n(x) / (2^n n! sqrt(pi))`.
    pub fn normalized_log_potential(&self, n: u32, x: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("log potential needs n >= 1".into()));
        }
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("x must be finite, got {x}")));
        }
        Ok(match self.precision {
            Precision::Double => normalized_log_potential_in(&k_coefficients::<f64>(n), x)?,
            Precision::Extended => {
                normalized_log_potential_in(&k_coefficients::<DoubleDouble>(n), x)?.to_f64()
            }
        })
    }

    /// Logarithmic potential `V_n(x)`; fails with [`Error::Overflow`] once
    /// `2^n n!` leaves the `f64` range.
    pub fn log_potential(&self, n: u32, x: f64) -> Result<f64> {
        let scaled = self.normalized_log_potential(n, x)?;
        let v = ln_norm(n).exp() * scaled;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow("log_potential"))
        }
    }

    /// `E_n(H) / (2^n n! sqrt(pi))` from the roots' log potentials.
    pub fn normalized_entropy_functional(&self, n: u32) -> Result<f64> {
        match self.precision {
            Precision::Double => {
                normalized_entropy_functional_in::<f64>(n, self.root_accuracy, self.execution)
            }
            Precision::Extended => normalized_entropy_functional_in::<DoubleDouble>(
                n,
                self.root_accuracy,
                self.execution,
            ),
        }
    }

    /// `E_n(H) = ∫ H_n^2 ln H_n^2 e^{-x^2} dx` over the whole real line.
    pub fn entropy_functional(&self, n: u32) -> Result<f64> {
        let v = ln_norm(n).exp() * self.normalized_entropy_functional(n)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow("entropy_functional"))
        }
    }

    /// `-sum_i E_{n_i}(H) / (2^{n_i} n_i! sqrt(pi))`, the polynomial-log part of
    /// the position entropy.
    pub fn i3_component(&self, state: &StateSpec) -> Result<f64> {
        let parts = state
            .occupations
            .iter()
            .map(|&n| self.normalized_entropy_functional(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(-compensated_sum(parts))
    }

    fn one_dims(&self, state: &StateSpec) -> Result<Vec<OneDimEntropy>> {
        state.occupations.iter().map(|&n| self.one_dim(n)).collect()
    }

    /// `S_1(n_i) - (1/2) ln alpha` per coordinate.
    pub fn per_dimension_position(&self, state: &StateSpec) -> Result<Vec<f64>> {
        let shift = 0.5 * state.alpha.ln();
        Ok(self
            .one_dims(state)?
            .iter()
            .map(|e| e.value - shift)
            .collect())
    }

    pub fn position_entropy(&self, state: &StateSpec) -> Result<f64> {
        Ok(compensated_sum(self.per_dimension_position(state)?))
    }

    /// Position entropy of the same occupations at strength `1/alpha`.
    pub fn momentum_entropy(&self, state: &StateSpec) -> Result<f64> {
        self.position_entropy(&state.with_alpha(1.0 / state.alpha)?)
    }

    /// `2 sum_i S_1(n_i)`, independent of alpha.
    pub fn uncertainty_sum(&self, state: &StateSpec) -> Result<f64> {
        Ok(2.0 * compensated_sum(self.one_dims(state)?.iter().map(|e| e.value)))
    }

    pub fn report(&self, state: &StateSpec) -> Result<EntropyReport> {
        let one = self.one_dims(state)?;
        let shift = 0.5 * state.alpha.ln();
        let per_dimension_position: Vec<f64> = one.iter().map(|e| e.value - shift).collect();
        let position_entropy = compensated_sum(per_dimension_position.iter().copied());
        let momentum_entropy = compensated_sum(one.iter().map(|e| e.value + shift));
        let uncertainty_sum = 2.0 * compensated_sum(one.iter().map(|e| e.value));
        let kernel_error: f64 = one.iter().map(|e| e.abs_error).sum();
        let rounding = 4.0 * f64::EPSILON * (position_entropy.abs() + momentum_entropy.abs());
        Ok(EntropyReport {
            position_entropy,
            momentum_entropy,
            uncertainty_sum,
            energy: energy(state),
            per_dimension_position,
            abs_error_estimate: 2.0 * kernel_error + rounding,
        })
    }
}

/// `S_1(n)` with the shared evaluator.
pub fn entropy_1d(n: u32) -> Result<f64> {
    Evaluator::shared().entropy_1d(n)
}

pub fn position_entropy(state: &StateSpec) -> Result<f64> {
    Evaluator::shared().position_entropy(state)
}

pub fn momentum_entropy(state: &StateSpec) -> Result<f64> {
    Evaluator::shared().momentum_entropy(state)
}

pub fn uncertainty_sum(state: &StateSpec) -> Result<f64> {
    Evaluator::shared().uncertainty_sum(state)
}

pub fn report(state: &StateSpec) -> Result<EntropyReport> {
    Evaluator::shared().report(state)
}

pub fn log_potential(n: u32, x: f64) -> Result<f64> {
    Evaluator::shared().log_potential(n, x)
}

pub fn entropy_functional(n: u32) -> Result<f64> {
    Evaluator::shared().entropy_functional(n)
}

pub fn i3_component(state: &StateSpec) -> Result<f64> {
    Evaluator::shared().i3_component(state)
}

/// `D ln(e pi)`, the lower bound on the uncertainty sum.
pub fn uncertainty_bound(dims: usize) -> f64 {
    dims as f64 * (1.0 + PI.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::EULER_GAMMA;

    const S1_REF: [f64; 3] = [
        1.072_364_942_924_700_1,
        1.342_727_788_386_178_3,
        1.498_609_233_251_727_8,
    ];

    fn state(ns: &[u32], alpha: f64) -> StateSpec {
        StateSpec::new(ns.to_vec(), alpha).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            StateSpec::new(vec![], 1.0),
            Err(Error::InvalidState(_))
        ));
        let e = StateSpec::new(vec![0], 0.0).unwrap_err();
        assert_eq!(e.to_string(), "invalid state: alpha must be positive");
        assert!(StateSpec::new(vec![0], f64::NAN).is_err());
        assert_eq!(state(&[2, 1, 4], 1.0).total(), 7);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&state(&[0], 1.0)), 0.5);
        assert_eq!(energy(&state(&[0, 0, 0], 1.0)), 1.5);
        assert_eq!(energy(&state(&[2, 1], 4.0)), 16.0);
    }

    #[test]
    fn i1_examples() {
        let half_ln_pi = 0.5 * PI.ln();
        assert!((i1_component(&state(&[0], 1.0)) - half_ln_pi).abs() < 1e-15);
        assert!((i1_component(&state(&[1], 1.0)) - (LN_2 + half_ln_pi)).abs() < 1e-15);
        assert!(i1_component(&state(&[0, 0], PI)).abs() < 1e-15);
    }

    #[test]
    fn i2_examples() {
        assert_eq!(i2_component(&state(&[0], 1.0)), 0.5);
        assert_eq!(i2_component(&state(&[1, 1, 1], 1.0)), 4.5);
        assert_eq!(
            i2_component(&state(&[3, 2], 7.0)),
            i2_component(&state(&[3, 2], 1.0))
        );
    }

    #[test]
    fn one_dim_reference_values() {
        for (n, want) in S1_REF.iter().enumerate() {
            let got = entropy_1d(n as u32).unwrap();
            assert!((got - want).abs() < 1e-14, "n = {n}: {got} vs {want}");
        }
        let closed = LN_2 + 0.5 * PI.ln() + EULER_GAMMA - 0.5;
        assert!((entropy_1d(1).unwrap() - closed).abs() < 1e-15);
    }

    #[test]
    fn log_potential_examples() {
        // V_1(0) = 2 sqrt(pi) (ln 2 + gamma/2 - 1)
        let want = 2.0 * PI.sqrt() * (LN_2 + EULER_GAMMA / 2.0 - 1.0);
        let v = log_potential(1, 0.0).unwrap();
        assert!((v - want).abs() < 1e-15, "{v} vs {want}");
        assert!((log_potential(1, 1e-8).unwrap() - v).abs() < 1e-12);
        assert!(matches!(
            log_potential(0, 0.3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn entropy_functional_examples() {
        assert_eq!(entropy_functional(0).unwrap(), 0.0);
        let want = 2.0 * PI.sqrt() * (2.0 - EULER_GAMMA);
        assert!((entropy_functional(1).unwrap() - want).abs() < 1e-14);
        assert!(matches!(entropy_functional(200), Err(Error::Overflow(_))));
    }

    #[test]
    fn position_examples() {
        let ground3 = position_entropy(&state(&[0, 0, 0], 1.0)).unwrap();
        assert!((ground3 - 1.5 * (1.0 + PI.ln())).abs() < 1e-14);
        let s10 = position_entropy(&state(&[1, 0], 1.0)).unwrap();
        assert!((s10 - (S1_REF[1] + S1_REF[0])).abs() < 1e-14);
        let s2 = position_entropy(&state(&[2], 4.0)).unwrap();
        assert!((s2 - (S1_REF[2] - 0.5 * 4f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn momentum_and_sum_examples() {
        let m = momentum_entropy(&state(&[0], 4.0)).unwrap();
        assert!((m - 0.5 * (4.0 * std::f64::consts::E * PI).ln()).abs() < 1e-14);
        let g5 = uncertainty_sum(&state(&[0; 5], 1.0)).unwrap();
        assert!((g5 - uncertainty_bound(5)).abs() < 1e-13);
        let a = uncertainty_sum(&state(&[1], 0.3)).unwrap();
        let b = uncertainty_sum(&state(&[1], 9.0)).unwrap();
        assert_eq!(a, b);
        assert!((a - 2.0 * S1_REF[1]).abs() < 1e-14);
    }

    #[test]
    fn report_is_consistent() {
        let st = state(&[3, 0, 2], 2.5);
        let r = report(&st).unwrap();
        let sum: f64 = r.per_dimension_position.iter().sum();
        assert!((r.position_entropy - sum).abs() <= r.abs_error_estimate.max(1e-14));
        assert!((r.uncertainty_sum - r.position_entropy - r.momentum_entropy).abs() < 1e-12);
        assert!(r.uncertainty_sum >= uncertainty_bound(3) - r.abs_error_estimate);
        assert_eq!(r.energy, (5.0 + 1.5) * 2.5);
        assert!(r.abs_error_estimate > 0.0 && r.abs_error_estimate < 1e-10);
    }

    #[test]
    fn decomposition_into_three_integrals() {
        for n in 0..8u32 {
            let st = state(&[n], 1.0);
            let total = i1_component(&st) + i2_component(&st) + i3_component(&st).unwrap();
            let direct = position_entropy(&st).unwrap();
            assert!((total - direct).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn double_precision_agrees_at_low_degree() {
        let ev = Evaluator::new(Precision::Double);
        for n in 0..4u32 {
            let d = ev.one_dim(n);
            if let Ok(d) = d {
                assert!(
                    (d.value - S1_REF.get(n as usize).copied().unwrap_or(d.value)).abs()
                        <= d.abs_error + 1e-15
                );
            }
        }
    }

    #[test]
    fn large_degree_fails_the_budget_in_double() {
        let ev = Evaluator::new(Precision::Double);
        assert!(matches!(ev.one_dim(40), Err(Error::ErrorBudget { .. })));
    }
}
