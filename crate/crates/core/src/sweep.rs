//! Entropy against dimension for the four reference configuration families.

use std::fmt;
use std::str::FromStr;

use crate::entropy::{Evaluator, StateSpec};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// All `n_i = 0`.
    Ground,
    /// `n_1 = 1`, the rest 0.
    OneExcited,
    /// `n_i = 1` for `i < D`, `n_D = 0`.
    AllButOne,
    /// All `n_i = 1`.
    AllOnes,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Ground,
        Family::OneExcited,
        Family::AllButOne,
        Family::AllOnes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ground => "ground",
            Family::OneExcited => "one-excited",
            Family::AllButOne => "all-but-one",
            Family::AllOnes => "all-ones",
        }
    }

    pub fn occupations(self, dims: usize) -> Vec<u32> {
        (0..dims)
            .map(|i| match self {
                Family::Ground => 0,
                Family::OneExcited => u32::from(i == 0),
                Family::AllButOne => u32::from(i + 1 < dims),
                Family::AllOnes => 1,
            })
            .collect()
    }

    pub fn state(self, dims: usize, alpha: f64) -> Result<StateSpec> {
        StateSpec::new(self.occupations(dims), alpha)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown configuration family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub dims: usize,
    pub state: StateSpec,
    pub position_entropy: f64,
}

/// Position entropy for `D = 1..=d_max`, in ascending `D`.
pub fn sweep(
    evaluator: &Evaluator,
    family: Family,
    d_max: usize,
    alpha: f64,
    execution: Execution,
) -> Result<Vec<SweepRow>> {
    if d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let dims: Vec<usize> = (1..=d_max).collect();
    execution.try_map(&dims, |&d| {
        let state = family.state(d, alpha)?;
        let position_entropy = evaluator.position_entropy(&state)?;
        Ok(SweepRow {
            dims: d,
            state,
            position_entropy,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shapes() {
        assert_eq!(Family::Ground.occupations(3), vec![0, 0, 0]);
        assert_eq!(Family::OneExcited.occupations(3), vec![1, 0, 0]);
        assert_eq!(Family::AllButOne.occupations(3), vec![1, 1, 0]);
        assert_eq!(Family::AllButOne.occupations(1), vec![0]);
        assert_eq!(Family::AllOnes.occupations(2), vec![1, 1]);
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("excited".parse::<Family>().is_err());
    }

    #[test]
    fn sweep_examples() {
        let ev = Evaluator::shared();
        let g = sweep(ev, Family::Ground, 1, 1.0, Execution::Sequential).unwrap();
        assert!((g[0].position_entropy - 1.072_364_942_924_700_1).abs() < 1e-12);
        let a = sweep(ev, Family::AllOnes, 2, 1.0, Execution::default()).unwrap();
        assert_eq!(a.iter().map(|r| r.dims).collect::<Vec<_>>(), vec![1, 2]);
        assert!((a[1].position_entropy - 2.685_455_576_772_356_5).abs() < 1e-12);
        assert!(sweep(ev, Family::Ground, 0, 1.0, Execution::Sequential).is_err());
    }

    #[test]
    fn columns_increase_with_dimension() {
        let ev = Evaluator::shared();
        for f in Family::ALL {
            let rows = sweep(ev, f, 15, 1.0, Execution::default()).unwrap();
            assert!(
                rows.windows(2)
                    .all(|w| w[0].position_entropy < w[1].position_entropy),
                "{f}"
            );
        }
    }
}
