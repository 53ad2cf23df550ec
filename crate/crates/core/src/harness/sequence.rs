//! Perturbation sequences and the epsilon sweep.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::config::{DomainKind, EpsilonSpec, ExperimentConfig, StudyKind};
use super::record::ResultRecord;
use super::run::run_case;
use super::with_pool;

/// Relative slack allowed in monotonicity checks, covering solver tolerance.
pub const MONOTONE_SLACK: f64 = 1e-6;

/// How `lambda_2` must move as the swept index increases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

impl Direction {
    /// Expected direction for a study, from the inclusion order of its domains.
    pub fn of(study: StudyKind) -> Option<Self> {
        match study {
            // Longer passages, more poles, wider smoothing and bigger rooms all enlarge the domain.
            StudyKind::PassageSequence
            | StudyKind::PoleSequence
            | StudyKind::SmoothSequence
            | StudyKind::EpsilonSweep => Some(Direction::NonIncreasing),
            // Thinner sheets shrink it.
            StudyKind::SheetSequence => Some(Direction::NonDecreasing),
            StudyKind::Single | StudyKind::FindConfig => None,
        }
    }

    pub fn holds(self, a: f64, b: f64) -> bool {
        let slack = MONOTONE_SLACK * a.abs().max(b.abs());
        match self {
            Direction::NonIncreasing => b <= a + slack,
            Direction::NonDecreasing => b >= a - slack,
        }
    }
}

/// Per-row configuration of a sequence study with the swept value applied.
pub fn row_config(cfg: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
    let mut row = cfg.clone();
    row.study = StudyKind::Single;
    let index = || -> Result<u32> {
        if value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
            Ok(value as u32)
        } else {
            Err(invalid(format!("sequence index {value} is not a positive integer")))
        }
    };
    match cfg.study {
        StudyKind::PassageSequence => {
            row.domain = DomainKind::Passage;
            row.n = index()?;
        }
        StudyKind::SheetSequence => {
            row.domain = DomainKind::Sheet;
            row.m = index()?;
        }
        StudyKind::PoleSequence => {
            row.domain = DomainKind::Pole;
            row.l = index()?;
        }
        StudyKind::SmoothSequence => {
            row.domain = DomainKind::Smoothed;
            row.delta = value;
        }
        StudyKind::EpsilonSweep => {
            let points = cfg.center_set()?;
            row.epsilon = EpsilonSpec::Value(value * cfg.reference_bound(&points));
        }
        StudyKind::Single | StudyKind::FindConfig => {
            return Err(invalid(format!("`{}` is not a sequence study", cfg.study)));
        }
    }
    Ok(row)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub index: f64,
    pub h: f64,
    pub lambda2: Option<f64>,
    pub verdict: bool,
    pub min_boundary_distance: Option<f64>,
    pub error: Option<String>,
}

/// Monotonicity of `lambda_2` along the index at one spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCheck {
    pub h: f64,
    pub direction: Direction,
    /// Consecutive successful rows, in increasing index, all move in `direction`.
    pub holds: bool,
    pub rows_compared: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceOutcome {
    pub study: StudyKind,
    pub records: Vec<ResultRecord>,
    pub rows: Vec<SequenceRow>,
    pub checks: Vec<MonotoneCheck>,
}

impl SequenceOutcome {
    pub fn monotone(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// Rows at spacing `h`, in sweep order.
    pub fn at(&self, h: f64) -> impl Iterator<Item = &SequenceRow> {
        self.rows.iter().filter(move |r| r.h == h)
    }
}

fn check(rows: &[SequenceRow], h: f64, direction: Direction) -> MonotoneCheck {
    let mut pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.h == h).filter_map(|r| Some((r.index, r.lambda2?))).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let holds = pts.windows(2).all(|w| direction.holds(w[0].1, w[1].1));
    MonotoneCheck { h, direction, holds, rows_compared: pts.len() }
}

/// Runs every index value at every spacing of a sequence study.
///
/// Rows run on `cfg.workers` threads; failures are recorded per row.
pub fn run_sequence(cfg: &ExperimentConfig) -> Result<SequenceOutcome> {
    let direction = Direction::of(cfg.study).ok_or_else(|| invalid(format!("`{}` is not a sequence study", cfg.study)))?;
    if cfg.values.is_empty() {
        return Err(invalid("a sequence study needs `values`"));
    }
    let mut jobs = Vec::new();
    for &h in &cfg.spacings {
        for &value in &cfg.values {
            jobs.push((row_config(cfg, value)?, value, h));
        }
    }
    let records = with_pool(cfg.workers, &jobs, |(row, value, h)| run_case(row, Some(*value), *h))?;
    let rows: Vec<SequenceRow> = records
        .iter()
        .map(|r| SequenceRow {
            index: r.index.unwrap_or_default(),
            h: r.h,
            lambda2: r.lambda(2),
            verdict: r.verdict(),
            min_boundary_distance: r.nodal.as_ref().and_then(|n| n.min_boundary_distance),
            error: r.error.clone(),
        })
        .collect();
    let checks = cfg.spacings.iter().map(|&h| check(&rows, h, direction)).collect();
    Ok(SequenceOutcome { study: cfg.study, records, rows, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_slack() {
        assert!(Direction::NonIncreasing.holds(10.0, 10.0 + 1e-6));
        assert!(!Direction::NonIncreasing.holds(10.0, 10.01));
        assert!(Direction::NonDecreasing.holds(10.0, 10.01));
    }

    #[test]
    fn check_sorts_by_index() {
        let row = |index, l| SequenceRow {
            index,
            h: 0.1,
            lambda2: Some(l),
            verdict: false,
            min_boundary_distance: None,
            error: None,
        };
        let rows = [row(8.0, 1.0), row(2.0, 3.0), row(4.0, 2.0)];
        assert!(check(&rows, 0.1, Direction::NonIncreasing).holds);
        assert!(!check(&rows, 0.1, Direction::NonDecreasing).holds);
    }

    #[test]
    fn row_configs() {
        let cfg = ExperimentConfig { study: StudyKind::PoleSequence, ..Default::default() };
        assert_eq!(row_config(&cfg, 4.0).unwrap().l, 4);
        assert!(row_config(&cfg, 2.5).is_err());
        let eps = ExperimentConfig { study: StudyKind::EpsilonSweep, ..Default::default() };
        let row = row_config(&eps, 0.5).unwrap();
        assert_eq!(row.study, StudyKind::Single);
        assert!(matches!(row.epsilon, EpsilonSpec::Value(_)));
    }

    #[test]
    fn short_passage_sequence() {
        let cfg = ExperimentConfig {
            study: StudyKind::PassageSequence,
            values: vec![2.0, 4.0],
            spacings: vec![0.2],
            ..Default::default()
        };
        let out = run_sequence(&cfg).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert!(out.rows.iter().all(|r| r.error.is_none()));
        assert!(out.monotone());
    }
}
