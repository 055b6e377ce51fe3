//! Parallel execution of a [`Simulation`] over all `(τ, trial)` pairs.

use rayon::prelude::*;
use syncline_core::simulator::{RunConfig, RunResult, Scenario, Simulation};

use crate::Result;

/// Same result as [`Simulation::run`], bit for bit: trial errors are
/// independent and the per-`τ` reduction is a maximum.
pub fn run_parallel(sim: &Simulation) -> Result<RunResult> {
    let trials = sim.config().trials_per_tau;
    let total = sim.config().tau_grid.len() * trials;
    let errors = (0..total)
        .into_par_iter()
        .map(|idx| sim.trial_error(idx / trials, idx % trials))
        .collect::<Result<Vec<f64>, _>>()?;
    let worst = errors.chunks(trials).map(|c| c.iter().fold(0.0_f64, |a, &e| a.max(e))).collect();
    Ok(sim.finish(worst)?)
}

pub fn run(scenario: Scenario, config: RunConfig, parallel: bool) -> Result<RunResult> {
    let sim = Simulation::new(scenario, config)?;
    if parallel {
        run_parallel(&sim)
    } else {
        Ok(sim.run()?)
    }
}
