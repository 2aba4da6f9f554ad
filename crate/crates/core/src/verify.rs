//! Closed-form entropies checked against the quadrature oracle.

use crate::entropy::{Evaluator, StateSpec};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{quadrature_entropy_1d_with, QuadratureConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyRow {
    pub n: u32,
    pub alpha: f64,
    pub formula: f64,
    pub oracle: f64,
    pub oracle_error: f64,
    pub delta: f64,
}

/// One row per `(n, alpha)` with `n <= n_max`, ordered by `n` then by the
/// position of `alpha` in `alphas`.
pub fn verify_grid(
    evaluator: &Evaluator,
    n_max: u32,
    alphas: &[f64],
    cfg: &QuadratureConfig,
    execution: Execution,
) -> Result<Vec<VerifyRow>> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one alpha is required".into(),
        ));
    }
    let grid: Vec<(u32, f64)> = (0..=n_max)
        .flat_map(|n| alphas.iter().map(move |&a| (n, a)))
        .collect();
    for &(_, a) in &grid {
        StateSpec::new(vec![0], a)?;
    }
    execution.try_map(&grid, |&(n, alpha)| {
        let formula = evaluator.position_entropy(&StateSpec::new(vec![n], alpha)?)?;
        let oracle = quadrature_entropy_1d_with(n, alpha, cfg, Execution::Sequential)?;
        Ok(VerifyRow {
            n,
            alpha,
            formula,
            oracle: oracle.value,
            oracle_error: oracle.abs_error,
            delta: (formula - oracle.value).abs(),
        })
    })
}
