//! Search for a configuration whose `psi_2` passes the containment test.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::config::{CenterKind, DomainKind, EpsilonSpec, ExperimentConfig, StudyKind};
use super::record::ResultRecord;
use super::run::run_case;
use super::with_pool;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RowStatus {
    Passed,
    Failed,
    /// The node estimate exceeds the search budget; not run.
    Unaffordable,
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindRow {
    pub domain: DomainKind,
    pub outer: f64,
    pub count: usize,
    pub fraction: f64,
    pub epsilon: f64,
    pub h: f64,
    pub estimated_nodes: usize,
    pub status: RowStatus,
    pub lambda2: Option<f64>,
    pub record: Option<ResultRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindOutcome {
    /// Index into `log` of the first passing row.
    pub found: Option<usize>,
    pub log: Vec<FindRow>,
}

impl FindOutcome {
    pub fn best(&self) -> Option<&ResultRecord> {
        self.log[self.found?].record.as_ref()
    }

    pub fn summary(&self) -> String {
        match self.best() {
            Some(r) => format!("found: h = {}, lambda_2 = {:?}", r.h, r.lambda(2)),
            None => "not found at this resolution".into(),
        }
    }
}

/// Lattice nodes inside a ball of radius `r` at spacing `h`, roughly.
pub fn estimate_nodes(r: f64, h: f64) -> usize {
    (4.0 / 3.0 * PI * (r / h).powi(3)).ceil() as usize
}

/// Coarsest spacing `1/N` not above `target`.
pub fn lattice_spacing(target: f64) -> f64 {
    1.0 / (1.0 / target).ceil()
}

struct Plan {
    row: FindRow,
    cfg: ExperimentConfig,
}

fn plan(cfg: &ExperimentConfig) -> Result<Vec<Plan>> {
    let space = &cfg.find;
    let mut out = Vec::new();
    let base = ExperimentConfig { study: StudyKind::Single, domain: DomainKind::Fournais, ..cfg.clone() };
    for &outer in &space.outers {
        for &count in &space.counts {
            let shape = ExperimentConfig { outer_radius: outer, centers: CenterKind::Fibonacci, count, ..base.clone() };
            let points = shape.center_set()?;
            let bound = shape.reference_bound(&points);
            for &fraction in &space.fractions {
                let epsilon = fraction * bound;
                let spacings = if space.spacings.is_empty() {
                    vec![lattice_spacing(space.spacing_factor * epsilon)]
                } else {
                    space.spacings.clone()
                };
                for h in spacings {
                    out.push(Plan {
                        row: FindRow {
                            domain: DomainKind::Fournais,
                            outer,
                            count,
                            fraction,
                            epsilon,
                            h,
                            estimated_nodes: estimate_nodes(outer.max(1.0 + epsilon), h),
                            status: RowStatus::Unaffordable,
                            lambda2: None,
                            record: None,
                        },
                        cfg: ExperimentConfig { epsilon: EpsilonSpec::Value(epsilon), spacings: vec![h], ..shape.clone() },
                    });
                }
            }
        }
        if space.shell_rows {
            let spacings = if space.spacings.is_empty() { cfg.spacings.clone() } else { space.spacings.clone() };
            for h in spacings {
                out.push(Plan {
                    row: FindRow {
                        domain: DomainKind::Shell,
                        outer,
                        count: 0,
                        fraction: 0.0,
                        epsilon: 0.0,
                        h,
                        estimated_nodes: estimate_nodes(outer, h),
                        status: RowStatus::Unaffordable,
                        lambda2: None,
                        record: None,
                    },
                    cfg: ExperimentConfig { domain: DomainKind::Shell, outer_radius: outer, spacings: vec![h], ..base.clone() },
                });
            }
        }
    }
    Ok(out)
}

/// Visits the search space in order outer radius, center count, epsilon
/// fraction, spacing (shell rows last for each radius) and reports the first
/// row with a true containment verdict. Every affordable row is run.
pub fn find_config(cfg: &ExperimentConfig) -> Result<FindOutcome> {
    let plans = plan(cfg)?;
    let budget = cfg.find.max_nodes;
    let jobs: Vec<&Plan> = plans.iter().filter(|p| p.row.estimated_nodes <= budget).collect();
    let records = with_pool(cfg.workers, &jobs, |p| run_case(&p.cfg, None, p.row.h))?;
    let mut records = records.into_iter();
    let mut log = Vec::with_capacity(plans.len());
    for p in plans {
        let mut row = p.row;
        if row.estimated_nodes <= budget {
            let rec = records.next().expect("one record per affordable row");
            row.lambda2 = rec.lambda(2);
            row.status = match &rec.error {
                Some(e) => RowStatus::Error(e.clone()),
                None if rec.verdict() => RowStatus::Passed,
                None => RowStatus::Failed,
            };
            row.record = Some(rec);
        }
        log.push(row);
    }
    let found = log.iter().position(|r| r.status == RowStatus::Passed);
    Ok(FindOutcome { found, log })
}
