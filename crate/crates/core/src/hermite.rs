//! Physicists' Hermite polynomials: overflow-free evaluation, zeros, and
//! Gauss–Hermite rules.
//!
//! Everything is built on the orthonormalised recurrence
//! `h_k = sqrt(2/k) x h_{k-1} - sqrt((k-1)/k) h_{k-2}` with
//! `h_k = H_k / sqrt(2^k k!)`, carried with an explicit log-scale so that
//! degree and argument can both be large without overflow.

use crate::error::{Error, Result};
use crate::jacobi::tridiagonal_eigenvalues;
use crate::special::ln_factorial;

/// Default absolute accuracy for polished roots.
pub const DEFAULT_ROOT_ACCURACY: f64 = 1e-13;

const NEWTON_MAX_ITER: usize = 100;
const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_FACTOR: f64 = 1e-150;
const LN_RESCALE: f64 = 345.387_763_949_107; // 150 ln 10

/// `h_n(x)` and `h_{n-1}(x)` sharing one log-scale: the true values are
/// `current * exp(log_scale)` and `previous * exp(log_scale)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Orthonormal {
    pub current: f64,
    pub previous: f64,
    pub log_scale: f64,
}

pub(crate) fn orthonormal(n: u32, x: f64) -> Orthonormal {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut log_scale = 0.0;
    for k in 1..=n {
        let kf = f64::from(k);
        let next = (2.0 / kf).sqrt() * x * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_FACTOR;
            prev *= RESCALE_FACTOR;
            log_scale += LN_RESCALE;
        }
    }
    Orthonormal {
        current: cur,
        previous: prev,
        log_scale,
    }
}

/// Sign and natural log of `|H_n(x)|`. At a zero the sign is 0 and the
/// log-magnitude is `-inf`.
pub fn hermite_eval(n: u32, x: f64) -> (i8, f64) {
    let h = orthonormal(n, x);
    if h.current == 0.0 {
        return (0, f64::NEG_INFINITY);
    }
    let sign = if h.current > 0.0 { 1 } else { -1 };
    let norm = 0.5 * (f64::from(n) * std::f64::consts::LN_2 + ln_factorial(n));
    (sign, h.current.abs().ln() + h.log_scale + norm)
}

/// `ln |h_n(x)|` for the orthonormalised polynomial (`-inf` at a zero).
pub(crate) fn ln_abs_orthonormal(n: u32, x: f64) -> f64 {
    let h = orthonormal(n, x);
    h.current.abs().ln() + h.log_scale
}

/// The zeros of `H_n`, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    degree: u32,
    roots: Vec<f64>,
    accuracy: f64,
}

impl RootSet {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Certified absolute error bound per root.
    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    /// The non-negative roots, ascending (includes 0 for odd degree).
    pub fn non_negative(&self) -> &[f64] {
        &self.roots[(self.degree / 2) as usize..]
    }
}

/// All `n` real zeros of `H_n` to within `accuracy_target`.
///
/// Starting values are the eigenvalues of the Jacobi matrix of the Hermite
/// weight; each is then Newton-polished on the recurrence, using
/// `H_n' = 2n H_{n-1}`. Roots are computed for the positive half and
/// mirrored, so the set is exactly symmetric and the middle root of an odd
/// degree is exactly zero.
pub fn hermite_roots(n: u32, accuracy_target: f64) -> Result<RootSet> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "H_0 has no roots; degree must be at least 1".into(),
        ));
    }
    if !(accuracy_target > 0.0 && accuracy_target.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "accuracy target must be positive, got {accuracy_target}"
        )));
    }
    let order = n as usize;
    let off: Vec<f64> = (1..order).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let eig = tridiagonal_eigenvalues(&vec![0.0; order], &off)?;

    let half = order / 2;
    let mut positive = Vec::with_capacity(half);
    let mut accuracy = 0.0f64;
    for i in 0..half {
        let start = 0.5 * (eig[order - 1 - i] - eig[i]);
        let (root, acc) = polish(n, start, accuracy_target)?;
        accuracy = accuracy.max(acc);
        positive.push(root);
    }
    positive.reverse();

    let mut roots = Vec::with_capacity(order);
    roots.extend(positive.iter().rev().map(|r| -r));
    if n % 2 == 1 {
        roots.push(0.0);
    }
    roots.extend_from_slice(&positive);

    if roots.windows(2).any(|w| w[0] >= w[1]) || positive.first().is_some_and(|&r| r <= 0.0) {
        return Err(Error::RootPolish {
            degree: n,
            achieved: f64::NAN,
        });
    }
    Ok(RootSet {
        degree: n,
        roots,
        accuracy: accuracy.max(f64::MIN_POSITIVE),
    })
}

fn polish(n: u32, start: f64, target: f64) -> Result<(f64, f64)> {
    let deriv_scale = (2.0 * f64::from(n)).sqrt();
    let newton_step = |x: f64| {
        let h = orthonormal(n, x);
        h.current / (deriv_scale * h.previous)
    };
    let mut x = start;
    let mut last = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let step = newton_step(x);
        if !step.is_finite() {
            break;
        }
        x -= step;
        let floor = 4.0 * f64::EPSILON * x.abs();
        if step.abs() <= floor || step.abs() >= last {
            break;
        }
        last = step.abs();
    }
    let acc = 2.0 * newton_step(x).abs() + 2.0 * f64::EPSILON * x.abs();
    if acc.is_nan() || acc > target {
        return Err(Error::RootPolish {
            degree: n,
            achieved: acc,
        });
    }
    Ok((x, acc))
}

/// An `m`-point Gauss–Hermite rule for the weight `exp(-x^2)` on the real line.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussHermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`, approximating `∫ f(x) exp(-x^2) dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        crate::dd::compensated_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x)),
        )
    }
}

/// Golub–Welsch rule of order `m`.
///
/// The eigenvector of the Jacobi matrix for eigenvalue `x_i` is
/// `(p_0(x_i), ..., p_{m-1}(x_i))` in the orthonormal basis, so its squared
/// first component gives `w_i = sqrt(pi) / sum_k h_k(x_i)^2`. The vector is
/// evaluated at the polished node instead of being taken from the
/// eigensolver. Outer weights underflow to zero beyond roughly `m = 350`.
pub fn gauss_hermite(m: usize) -> Result<GaussHermiteRule> {
    if m == 0 {
        return Err(Error::InvalidArgument("rule order must be positive".into()));
    }
    let degree =
        u32::try_from(m).map_err(|_| Error::InvalidArgument("rule order too large".into()))?;
    let roots = hermite_roots(degree, DEFAULT_ROOT_ACCURACY)?;
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let weights = roots
        .roots()
        .iter()
        .map(|&x| sqrt_pi * inverse_christoffel_sum(m, x))
        .collect();
    Ok(GaussHermiteRule {
        nodes: roots.roots,
        weights,
    })
}

/// `1 / sum_{k<m} h_k(x)^2`, with rescaling.
fn inverse_christoffel_sum(m: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 1.0;
    let mut log_scale = 0.0;
    for k in 1..m {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * x * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_FACTOR;
            prev *= RESCALE_FACTOR;
            sum *= RESCALE_FACTOR * RESCALE_FACTOR;
            log_scale += 2.0 * LN_RESCALE;
        }
    }
    (-(sum.ln() + log_scale)).exp()
}
