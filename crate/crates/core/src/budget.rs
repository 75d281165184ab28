use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cap on the number of elementary products a brute-force evaluator may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(100_000_000);
    pub const UNLIMITED: Budget = Budget(u64::MAX);

    pub fn check(self, estimated: u128) -> Result<()> {
        if estimated > self.0 as u128 {
            Err(Error::BudgetExceeded { estimated, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// `base^exp` without overflow; saturates at `u128::MAX`.
pub(crate) fn pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Largest `n` in `1..=limit` whose estimated cost fits the budget, if any.
pub fn largest_feasible(budget: Budget, limit: usize, cost: impl Fn(usize) -> u128) -> Option<usize> {
    (1..=limit).rev().find(|&n| cost(n) <= budget.0 as u128)
}
