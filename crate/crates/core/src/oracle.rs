//! Direct numerical evaluation of `S[ρ] = -∫ ρ ln ρ dx`, independent of the
//! closed form.
//!
//! The one-dimensional density `ρ_n(x)` vanishes quadratically at the zeros
//! of `H_n(sqrt(alpha) x)`, where `ρ ln ρ` is continuous but has unbounded
//! higher derivatives. The integration range is therefore split at those
//! zeros and each panel refined adaptively by bisection with a Gauss–Legendre
//! rule; the error of a panel is estimated by comparing the rule on the panel
//! with the rule on its two halves. The tails beyond the cutoff are bounded
//! analytically and the bound is added to the reported error.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::dd::CompensatedSum;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hermite::{
    gauss_hermite, hermite_roots, ln_abs_orthonormal, orthonormal, DEFAULT_ROOT_ACCURACY,
};
use crate::jacobi::tridiagonal_eigenvalues;
use crate::special::ln_factorial;
use crate::StateSpec;

/// Panels split per refinement round.
const SPLITS_PER_ROUND: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cutoff beyond the outermost turning point, in units of the
    /// oscillator length `1/sqrt(alpha)`: `|x| <= (sqrt(2n+1) + sigma) / sqrt(alpha)`.
    /// Extended automatically until the tail bound is below `abs_tol / 10`.
    pub tail_cutoff_sigma: f64,
    pub max_subdivisions: usize,
    /// Gauss–Legendre points per panel.
    pub panel_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            tail_cutoff_sigma: 12.0,
            max_subdivisions: 2000,
            panel_order: 31,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("quadrature config: {what}")));
        if self.rel_tol.is_nan()
            || self.abs_tol.is_nan()
            || self.rel_tol <= 0.0
            || self.abs_tol <= 0.0
        {
            return bad("tolerances must be positive");
        }
        if !(self.tail_cutoff_sigma > 0.0 && self.tail_cutoff_sigma.is_finite()) {
            return bad("tail cutoff must be positive");
        }
        if self.panel_order < 5 {
            return bad("panel order must be at least 5");
        }
        if self.max_subdivisions == 0 {
            return bad("max_subdivisions must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

/// `ρ_n(x) = sqrt(alpha/pi) / (2^n n!) e^{-alpha x^2} H_n(sqrt(alpha) x)^2`,
/// evaluated in log space; underflow gives 0.
pub fn density_1d(n: u32, alpha: f64, x: f64) -> f64 {
    let ln_rho = ln_density(n, alpha, x);
    if ln_rho == f64::NEG_INFINITY {
        0.0
    } else {
        ln_rho.exp()
    }
}

fn ln_density(n: u32, alpha: f64, x: f64) -> f64 {
    let y = alpha.sqrt() * x;
    0.5 * (alpha / PI).ln() - y * y + 2.0 * ln_abs_orthonormal(n, y)
}

/// `-ρ ln ρ`, continuously extended by 0 where `ρ = 0`.
fn neg_rho_ln_rho(n: u32, alpha: f64, x: f64) -> f64 {
    let l = ln_density(n, alpha, x);
    if l == f64::NEG_INFINITY {
        return 0.0;
    }
    let rho = l.exp();
    if rho == 0.0 {
        0.0
    } else {
        -rho * l
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidArgument(
                "rule needs at least one point".into(),
            ));
        }
        let off: Vec<f64> = (1..points)
            .map(|k| {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            })
            .collect();
        let eig = tridiagonal_eigenvalues(&vec![0.0; points], &off)?;
        let mut nodes = vec![0.0; points];
        let mut weights = vec![0.0; points];
        for i in 0..points.div_ceil(2) {
            let j = points - 1 - i;
            let mut x = 0.5 * (eig[j] - eig[i]);
            if i == j {
                x = 0.0;
            }
            for _ in 0..20 {
                let (p, dp) = legendre(points, x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 2.0 * f64::EPSILON {
                    break;
                }
            }
            let (_, dp) = legendre(points, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[j] = x;
            nodes[i] = -x;
            weights[i] = w;
            weights[j] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        s * half
    }
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    coarse: f64,
    left: f64,
    right: f64,
}

impl Panel {
    fn evaluate<F: Fn(f64) -> f64>(
        f: &F,
        rule: &GaussLegendre,
        a: f64,
        b: f64,
        coarse: Option<f64>,
    ) -> Self {
        let m = 0.5 * (a + b);
        Self {
            a,
            b,
            coarse: coarse.unwrap_or_else(|| rule.integrate(f, a, b)),
            left: rule.integrate(f, a, m),
            right: rule.integrate(f, m, b),
        }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }

    fn error(&self) -> f64 {
        (self.coarse - self.value()).abs()
    }

    fn splittable(&self) -> bool {
        let m = 0.5 * (self.a + self.b);
        m > self.a
            && m < self.b
            && (self.b - self.a) > 8.0 * f64::EPSILON * self.a.abs().max(self.b.abs())
    }
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error()
            .total_cmp(&other.0.error())
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Globally adaptive integration of `f` over `[breaks[0], breaks[last]]`,
/// starting from one panel per pair of consecutive break points.
///
/// Each round splits the (up to) sixteen panels with the largest error
/// estimates, so the result does not depend on `execution`.
pub fn adaptive_integrate<F>(
    f: &F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
    execution: Execution,
) -> Result<QuadratureEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    if breaks.len() < 2
        || breaks
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::InvalidArgument(
            "break points must be strictly increasing".into(),
        ));
    }
    let rule = GaussLegendre::new(cfg.panel_order)?;
    let spans: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    let initial = execution.map(&spans, |&(a, b)| Panel::evaluate(f, &rule, a, b, None));

    let mut heap: BinaryHeap<ByError> = initial.into_iter().map(ByError).collect();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(heap.iter().map(|p| &p.0).chain(&frozen));
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if subdivisions >= cfg.max_subdivisions || heap.is_empty() {
            return Err(Error::NonConvergence {
                estimate: value,
                error_bound: error,
                subdivisions,
            });
        }
        let mut batch = Vec::with_capacity(SPLITS_PER_ROUND);
        while batch.len() < SPLITS_PER_ROUND && subdivisions < cfg.max_subdivisions {
            let Some(ByError(p)) = heap.pop() else { break };
            if !p.splittable() {
                frozen.push(p);
                continue;
            }
            batch.push(p);
            subdivisions += 1;
        }
        let children: Vec<(f64, f64, f64)> = batch
            .iter()
            .flat_map(|p| {
                let m = 0.5 * (p.a + p.b);
                [(p.a, m, p.left), (m, p.b, p.right)]
            })
            .collect();
        let evaluated = execution.map(&children, |&(a, b, c)| {
            Panel::evaluate(f, &rule, a, b, Some(c))
        });
        heap.extend(evaluated.into_iter().map(ByError));
    }

    let mut panels: Vec<Panel> = heap.into_iter().map(|p| p.0).chain(frozen).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, abs_error) = totals(panels.iter());
    Ok(QuadratureEstimate {
        value,
        abs_error,
        subdivisions,
    })
}

fn totals<'a, I: Iterator<Item = &'a Panel>>(panels: I) -> (f64, f64) {
    let mut value = CompensatedSum::new();
    let mut error = 0.0;
    for p in panels {
        value.add(p.value());
        error += p.error();
    }
    (value.value(), error)
}

/// Upper bound on `2 ∫_Y^∞ ρ (c2 y^2 + c0) dy` for the unit-strength density
/// `ρ(y) = h_n(y)^2 e^{-y^2} / sqrt(pi)`, valid for `Y` beyond the largest root.
///
/// Uses `|H_n(y)| <= (2y)^n` past the largest zero and
/// `∫_Y^∞ y^p e^{-y^2} dy <= Y^p e^{-Y^2} / (2Y - p/Y)`.
fn tail_bound(n: u32, y_cut: f64, c2: f64, c0: f64) -> f64 {
    let nf = f64::from(n);
    let ln_prefactor = nf * std::f64::consts::LN_2 - ln_factorial(n) - 0.5 * PI.ln();
    let piece = |p: f64| {
        let decay = 2.0 * y_cut - p / y_cut;
        if decay <= 0.0 {
            return f64::INFINITY;
        }
        (ln_prefactor + p * y_cut.ln() - y_cut * y_cut - decay.ln()).exp()
    };
    2.0 * (c2 * piece(2.0 * nf + 2.0) + c0 * piece(2.0 * nf))
}

/// Scaled cutoff `Y` (in `y = sqrt(alpha) x`) and the tail bound there, for a
/// tail integrand bounded by `ρ (c2 y^2 + c0(Y))`.
fn choose_cutoff<C: Fn(f64) -> f64>(n: u32, cfg: &QuadratureConfig, c2: f64, c0: C) -> (f64, f64) {
    let mut y = (2.0 * f64::from(n) + 1.0).sqrt() + cfg.tail_cutoff_sigma;
    loop {
        let bound = tail_bound(n, y, c2, c0(y));
        if bound < cfg.abs_tol / 10.0 || y > 1e4 {
            return (y, bound);
        }
        y += 1.0;
    }
}

fn scaled_breaks(n: u32, y_cut: f64, scale: f64) -> Result<Vec<f64>> {
    let mut breaks = vec![-y_cut * scale];
    if n > 0 {
        let roots = hermite_roots(n, DEFAULT_ROOT_ACCURACY)?;
        breaks.extend(roots.roots().iter().map(|r| r * scale));
    }
    breaks.push(y_cut * scale);
    Ok(breaks)
}

/// `-∫ ρ_n ln ρ_n dx` for one coordinate at strength `alpha`.
pub fn quadrature_entropy_1d(
    n: u32,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    quadrature_entropy_1d_with(n, alpha, cfg, Execution::default())
}

pub fn quadrature_entropy_1d_with(
    n: u32,
    alpha: f64,
    cfg: &QuadratureConfig,
    execution: Execution,
) -> Result<QuadratureEstimate> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    // |ln ρ_x| <= y^2 + ln(pi)/2 + max(0, -2 ln|h_n(Y)|) + |ln alpha|/2 on the tail
    let shift = 0.5 * PI.ln() + 0.5 * alpha.ln().abs();
    let (y_cut, tail) = choose_cutoff(n, cfg, 1.0, |y| {
        shift + (-2.0 * ln_abs_orthonormal(n, y)).max(0.0)
    });
    let breaks = scaled_breaks(n, y_cut, 1.0 / alpha.sqrt())?;
    let f = |x: f64| neg_rho_ln_rho(n, alpha, x);
    let mut est = adaptive_integrate(&f, &breaks, cfg, execution)?;
    est.abs_error += tail;
    Ok(est)
}

/// Position entropy of a D-dimensional state as the sum of its separable
/// one-dimensional integrals.
pub fn quadrature_entropy(state: &StateSpec, cfg: &QuadratureConfig) -> Result<QuadratureEstimate> {
    let mut value = CompensatedSum::new();
    let mut abs_error = 0.0;
    let mut subdivisions = 0;
    for &n in state.occupations() {
        let e = quadrature_entropy_1d(n, state.alpha(), cfg)?;
        value.add(e.value);
        abs_error += e.abs_error;
        subdivisions += e.subdivisions;
    }
    Ok(QuadratureEstimate {
        value: value.value(),
        abs_error,
        subdivisions,
    })
}

/// `∫ H_n^2 ln(H_n^2) e^{-x^2} dx / (2^n n! sqrt(pi))` over the real line.
pub fn quadrature_entropy_functional(n: u32, cfg: &QuadratureConfig) -> Result<QuadratureEstimate> {
    let ln_norm = f64::from(n) * std::f64::consts::LN_2 + ln_factorial(n);
    // |ln H_n^2| <= 2n ln(2y) <= 2n y^2 beyond the largest root, plus the
    // depth below zero at the cutoff
    let (y_cut, tail) = choose_cutoff(n, cfg, 2.0 * f64::from(n), |y| {
        (-(2.0 * ln_abs_orthonormal(n, y) + ln_norm)).max(0.0)
    });
    let breaks = scaled_breaks(n, y_cut, 1.0)?;
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    let f = |y: f64| {
        let ln_h2 = 2.0 * ln_abs_orthonormal(n, y);
        if ln_h2 == f64::NEG_INFINITY {
            return 0.0;
        }
        let weight = (ln_h2 - y * y).exp() * inv_sqrt_pi;
        if weight == 0.0 {
            0.0
        } else {
            weight * (ln_h2 + ln_norm)
        }
    };
    let mut est = adaptive_integrate(&f, &breaks, cfg, Execution::default())?;
    est.abs_error += tail;
    Ok(est)
}

/// `alpha <x^2>` for `ρ_n`, by a Gauss–Hermite rule of order `n + 2`
/// (exact for the degree-`2n+2` polynomial integrand). Equals `n + 1/2`.
pub fn moment_check(n: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let rule = gauss_hermite(n as usize + 2)?;
    // in y = sqrt(alpha) x the scale cancels: alpha <x^2> = <y^2>
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    Ok(rule.integrate(|y| {
        let h = orthonormal(n, y);
        let h = h.current * h.log_scale.exp();
        y * y * h * h * inv_sqrt_pi
    }))
}

/// Direct two-dimensional quadrature of `-∫∫ ρ ln ρ` for the product state
/// `(n1, n2)`: an adaptive outer integral over adaptive inner integrals.
/// Used to validate the separable reduction.
pub fn quadrature_entropy_2d(
    n1: u32,
    n2: u32,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let cut = |n: u32| (2.0 * f64::from(n) + 1.0).sqrt() + cfg.tail_cutoff_sigma.min(9.0);
    let scale = 1.0 / alpha.sqrt();
    let outer_breaks = scaled_breaks(n1, cut(n1), scale)?;
    let inner_breaks = scaled_breaks(n2, cut(n2), scale)?;
    let inner_cfg = QuadratureConfig {
        rel_tol: cfg.rel_tol * 1e-2,
        abs_tol: cfg.abs_tol * 1e-2,
        ..cfg.clone()
    };
    let inner_error = std::sync::Mutex::new(Ok(0.0f64));
    let outer = |x: f64| {
        let lx = ln_density(n1, alpha, x);
        if lx == f64::NEG_INFINITY || lx.exp() == 0.0 {
            return 0.0;
        }
        let g = |y: f64| {
            let l = lx + ln_density(n2, alpha, y);
            if l == f64::NEG_INFINITY {
                return 0.0;
            }
            let rho = l.exp();
            if rho == 0.0 {
                0.0
            } else {
                -rho * l
            }
        };
        match adaptive_integrate(&g, &inner_breaks, &inner_cfg, Execution::Sequential) {
            Ok(e) => {
                if let Ok(acc) = inner_error.lock().expect("poisoned").as_mut() {
                    *acc = acc.max(e.abs_error);
                }
                e.value
            }
            Err(e) => {
                *inner_error.lock().expect("poisoned") = Err(e);
                0.0
            }
        }
    };
    let mut est = adaptive_integrate(&outer, &outer_breaks, cfg, Execution::default())?;
    let inner = inner_error.into_inner().expect("poisoned")?;
    est.abs_error += inner * (outer_breaks[outer_breaks.len() - 1] - outer_breaks[0]);
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(7).unwrap();
        // degree 13 on [0, 2]: ∫ x^13 = 2^14 / 14
        let v = rule.integrate(&|x: f64| x.powi(13), 0.0, 2.0);
        assert!((v - 16384.0 / 14.0).abs() < 1e-10);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-15);
    }

    #[test]
    fn density_examples() {
        assert!((density_1d(0, 1.0, 0.0) - 1.0 / PI.sqrt()).abs() < 1e-16);
        assert_eq!(density_1d(1, 1.0, 0.0), 0.0);
        assert_eq!(density_1d(3, 1.0, 1e3), 0.0);
    }

    #[test]
    fn density_is_normalised() {
        let cfg = QuadratureConfig::default();
        for n in [0u32, 1, 7, 30] {
            for alpha in [0.25, 1.0, 4.0] {
                let y_cut = (2.0 * f64::from(n) + 1.0).sqrt() + 12.0;
                let breaks = scaled_breaks(n, y_cut, 1.0 / f64::sqrt(alpha)).unwrap();
                let mass = adaptive_integrate(
                    &|x| density_1d(n, alpha, x),
                    &breaks,
                    &cfg,
                    Execution::Sequential,
                )
                .unwrap();
                assert!(
                    (mass.value - 1.0).abs() < 1e-11,
                    "n = {n}, alpha = {alpha}: {mass:?}"
                );
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let cfg = QuadratureConfig::default();
        let g = quadrature_entropy_1d(0, 1.0, &cfg).unwrap();
        assert!((g.value - 0.5 * (1.0 + PI.ln())).abs() < 1e-12, "{g:?}");
        let e1 = quadrature_entropy_1d(1, 1.0, &cfg).unwrap();
        let closed = std::f64::consts::LN_2 + 0.5 * PI.ln() + crate::special::EULER_GAMMA - 0.5;
        assert!((e1.value - closed).abs() < 1e-10, "{e1:?}");
        let e2 = quadrature_entropy_1d(2, 1.0, &cfg).unwrap();
        assert!((e2.value - 1.498_609_233_251_727_8).abs() < 1e-10, "{e2:?}");
    }

    #[test]
    fn moment_examples() {
        assert!((moment_check(0, 3.3).unwrap() - 0.5).abs() < 1e-15);
        assert!((moment_check(3, 2.0).unwrap() - 3.5).abs() < 1e-13);
        assert!((moment_check(10, 0.1).unwrap() - 10.5).abs() < 1e-12);
    }

    #[test]
    fn non_convergence_carries_the_estimate() {
        let cfg = QuadratureConfig {
            max_subdivisions: 3,
            rel_tol: 1e-14,
            abs_tol: 1e-16,
            ..QuadratureConfig::default()
        };
        match quadrature_entropy_1d(6, 1.0, &cfg) {
            Err(Error::NonConvergence {
                estimate,
                error_bound,
                subdivisions,
            }) => {
                assert!(subdivisions <= 3);
                assert!(error_bound > 0.0);
                assert!((estimate - 1.828_968_490_272_838_7).abs() < 1e-3);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig {
            panel_order: 3,
            ..QuadratureConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(quadrature_entropy_1d(1, -1.0, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn tail_bound_shrinks_with_cutoff() {
        let a = tail_bound(5, 8.0, 1.0, 2.0);
        let b = tail_bound(5, 12.0, 1.0, 2.0);
        assert!(b < a && b > 0.0);
        assert!(tail_bound(5, 2.0, 1.0, 2.0).is_infinite());
    }
}
