//! Resource caps shared by the rewriting engine and the model oracle.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Caps on the work any single operation may perform.
///
/// Every exhaustive method in the crate is exponential somewhere; these caps
/// turn runaway inputs into [`Error::ResourceLimit`] instead of a hang.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of propositional letters for truth tables.
    pub max_letters: usize,
    /// Maximum number of clauses or cubes produced by one distribution.
    pub max_terms: usize,
    /// Maximum number of atoms in a formula built by one elimination step.
    pub max_atoms: usize,
    /// Maximum count bound appearing in a counting atom.
    pub max_bound: u32,
    /// Maximum number of unary predicates in a counting context.
    pub max_signature: usize,
    /// Maximum number of node evaluations performed by the oracle.
    pub max_evaluations: u64,
    /// Wall-clock budget for oracle searches.
    pub budget: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_letters: 20,
            max_terms: 20_000,
            max_atoms: 500_000,
            max_bound: 64,
            max_signature: 6,
            max_evaluations: 2_000_000_000,
            budget: None,
        }
    }
}

impl Limits {
    /// Reads `MLOGIC_BUDGET_MS` from the environment, if set.
    pub fn with_env_budget(mut self) -> Self {
        if let Some(ms) = std::env::var("MLOGIC_BUDGET_MS")
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            self.budget = Some(Duration::from_millis(ms));
        }
        self
    }

    pub(crate) fn check_atoms(&self, n: usize, what: &str) -> Result<()> {
        if n > self.max_atoms {
            Err(Error::ResourceLimit(format!(
                "{what}: {n} atoms exceeds cap {}",
                self.max_atoms
            )))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_terms(&self, n: usize, what: &str) -> Result<()> {
        if n > self.max_terms {
            Err(Error::ResourceLimit(format!(
                "{what}: {n} terms exceeds cap {}",
                self.max_terms
            )))
        } else {
            Ok(())
        }
    }
}

/// Running counter against [`Limits::max_evaluations`] and the wall clock.
#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    max: u64,
    deadline: Option<Instant>,
}

impl Meter {
    pub(crate) fn new(limits: &Limits) -> Self {
        Meter {
            used: 0,
            max: limits.max_evaluations,
            deadline: limits.budget.map(|b| Instant::now() + b),
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > self.max {
            return Err(Error::ResourceLimit(format!(
                "oracle evaluation budget of {} steps exhausted",
                self.max
            )));
        }
        if self.used & 0xffff < n {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::ResourceLimit("oracle time budget exhausted".into()));
                }
            }
        }
        Ok(())
    }
}
