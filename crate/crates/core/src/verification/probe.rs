use serde::{Deserialize, Serialize};

use crate::bellman::{bellman_closed, Params};
use crate::error::Result;
use crate::extremizer::build_extremizer;
use crate::par::{map_indexed, Execution};
use crate::verification::sampler::{sample_admissible_rng, trial_rng};
use crate::verification::step::{discrete_hardy, discretize};

/// Outcome of probing the supremum with random admissible step functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub params: Params,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub accepted: usize,
    pub rejected: usize,
    /// Largest Hardy functional seen, including the discretized extremizer.
    pub best_value: f64,
    pub analytic_value: f64,
    /// `best_value - analytic_value`; positive means the bound was beaten.
    pub max_violation: f64,
    pub extremizer_discrete_value: f64,
    /// Per-trial values in trial order; `None` for rejected draws.
    #[serde(skip)]
    pub trial_values: Vec<Option<f64>>,
}

impl ProbeReport {
    pub fn passes(&self, slack: f64) -> bool {
        self.max_violation <= slack
    }
}

/// Hardy functional of the cell averages of the extremal function on `n`
/// cells.
pub fn discretized_extremizer_value(params: &Params, n: usize) -> Result<f64> {
    let g = build_extremizer(params)?;
    discrete_hardy(&discretize(&g, n)?, params.p, params.k)
}

pub fn probe_supremum(params: &Params, n: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    probe_supremum_with(params, n, trials, seed, Execution::default())
}

/// Trial `i` draws from [`trial_rng`]`(seed, i)`, so the report does not
/// depend on `exec`.
pub fn probe_supremum_with(
    params: &Params,
    n: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ProbeReport> {
    let analytic_value = bellman_closed(params)?;
    let extremizer_discrete_value = discretized_extremizer_value(params, n)?;
    let outcomes = map_indexed(trials, exec, |i| {
        let mut rng = trial_rng(seed, i as u64);
        match sample_admissible_rng(params, n, &mut rng) {
            Ok(s) => discrete_hardy(&s, params.p, params.k).map(Some),
            Err(crate::Error::Rejected { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let trial_values = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let best_value = trial_values
        .iter()
        .flatten()
        .copied()
        .fold(extremizer_discrete_value, f64::max);
    let accepted = trial_values.iter().filter(|v| v.is_some()).count();
    Ok(ProbeReport {
        params: *params,
        n,
        trials,
        seed,
        accepted,
        rejected: trials - accepted,
        best_value,
        analytic_value,
        max_violation: best_value - analytic_value,
        extremizer_discrete_value,
        trial_values,
    })
}
