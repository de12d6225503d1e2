//! Multi-threaded simulation with thread-count-independent output.

use batchdispatch_core::sim::{self, CycleTotals, SimConfig, SimResult};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Simulate on `threads` workers (all cores when `None`).
///
/// Blocks are the ones [`sim::simulate`] uses and are merged in index order,
/// so the result equals the sequential one bit for bit.
pub fn simulate(config: &SimConfig, threads: Option<usize>) -> Result<SimResult> {
    config.validate()?;
    let blocks: Vec<_> = sim::block_ranges(config.cycles).collect();
    let run = || {
        blocks
            .par_iter()
            .map(|r| sim::simulate_cycles(config, r.clone()))
            .collect::<std::result::Result<Vec<CycleTotals>, _>>()
    };
    let pieces = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(run),
        None => run(),
    }?;
    let mut totals = CycleTotals::default();
    for p in &pieces {
        totals.merge(p);
    }
    Ok(totals.finish(config.params.operating_cost))
}
