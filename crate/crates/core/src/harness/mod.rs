//! Experiment configuration, studies and result persistence.

pub mod config;
pub mod find;
pub mod record;
pub mod run;
pub mod sequence;
pub mod tables;
pub mod vtk;

pub use config::{CenterKind, DomainKind, EpsilonSpec, ExperimentConfig, FindSpace, PreconditionerKind, StudyKind};
pub use find::{find_config, FindOutcome, FindRow, RowStatus};
pub use record::{load_records, RecordStore, ResultRecord, Timings, SCHEMA_VERSION};
pub use run::{build_domain, rerun, run_case, solve_case, Case};
pub use sequence::{run_sequence, Direction, SequenceOutcome, SequenceRow};

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::SpherePointSet;

/// Fibonacci lattice of `count` points on the unit sphere.
///
/// Point `i` has height `1 - 2(i + 1/2)/count` and azimuth `2 pi i / phi^2`.
pub fn fibonacci_centers(count: usize) -> Result<SpherePointSet> {
    if count == 0 {
        return Err(invalid("fibonacci lattice needs at least one point"));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let points = (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let azimuth = 2.0 * PI * i as f64 / (phi * phi);
            let r = (1.0 - z * z).sqrt();
            [r * azimuth.cos(), r * azimuth.sin(), z]
        })
        .collect();
    SpherePointSet::new(points)
}

/// Maps `f` over `jobs` on a pool of `workers` threads, keeping input order.
pub(crate) fn with_pool<J, R, F>(workers: usize, jobs: &[J], f: F) -> Result<Vec<R>>
where
    J: Sync,
    R: Send,
    F: Fn(&J) -> R + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| invalid(format!("worker pool: {e}")))?;
    Ok(pool.install(|| jobs.par_iter().map(&f).collect()))
}
