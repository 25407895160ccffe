//! Data-parallel execution of independent work items.
//!
//! With the `parallel` feature (default) the maps run on rayon; without it
//! they fall back to plain iterators. The `_seq` variants always run
//! sequentially so the two paths can be benchmarked against each other.
//! Results are returned in input order either way, so outputs are
//! deterministic regardless of scheduling.

use serde::Serialize;

use crate::error::Result;
use crate::hamiltonian::SparseHamiltonian;
use crate::simulator::{self, SegmentPlan, SimulationReport, Strategy};

/// Map `f` over 0..count, parallel when the feature allows.
pub fn indexed_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Sequential reference version of [`indexed_map`].
pub fn indexed_map_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// One simulation work item: an instance plus run parameters.
#[derive(Debug, Clone)]
pub struct SimJob {
    pub label: String,
    pub h: SparseHamiltonian,
    pub t: f64,
    pub epsilon: f64,
    pub strategy: Strategy,
    pub x_scale: Option<f64>,
}

impl SimJob {
    pub fn plan(&self) -> Result<SegmentPlan> {
        simulator::plan_segments(&self.h, self.t, self.epsilon, self.strategy, self.x_scale)
    }

    pub fn run(&self) -> Result<SimulationReport> {
        let plan = self.plan()?;
        simulator::run(&self.h, &plan)
    }
}

/// Outcome of one job, pairing the label with the result.
#[derive(Debug, Serialize)]
pub struct JobOutcome {
    pub label: String,
    #[serde(flatten)]
    pub report: std::result::Result<SimulationReport, String>,
}

/// Run all jobs, parallel when enabled, preserving input order.
pub fn run_all(jobs: &[SimJob]) -> Vec<(String, Result<SimulationReport>)> {
    indexed_map(jobs.len(), |i| (jobs[i].label.clone(), jobs[i].run()))
}

/// Sequential reference version of [`run_all`].
pub fn run_all_seq(jobs: &[SimJob]) -> Vec<(String, Result<SimulationReport>)> {
    indexed_map_seq(jobs.len(), |i| (jobs[i].label.clone(), jobs[i].run()))
}
