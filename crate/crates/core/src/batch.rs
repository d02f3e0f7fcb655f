//! Independent runs over many scenarios, on a rayon pool when the `parallel` feature is on.

use crate::runner::{run_summary, RunError, RunSummary};
use crate::scenario::Scenario;

/// Summaries in input order. Parallel when the `parallel` feature is enabled.
pub fn run_batch(scenarios: &[Scenario]) -> Vec<Result<RunSummary, RunError>> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(scenarios)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(scenarios)
    }
}

pub fn run_batch_sequential(scenarios: &[Scenario]) -> Vec<Result<RunSummary, RunError>> {
    scenarios.iter().map(run_summary).collect()
}

#[cfg(feature = "parallel")]
pub fn run_batch_parallel(scenarios: &[Scenario]) -> Vec<Result<RunSummary, RunError>> {
    use rayon::prelude::*;
    scenarios.par_iter().map(run_summary).collect()
}

/// Apply `f` to every item, in parallel when available, keeping input order.
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
