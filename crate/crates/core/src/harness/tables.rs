//! CSV tables of records, sequences and search logs.

use std::io::Write;

use crate::error::Result;

use super::find::{FindOutcome, RowStatus};
use super::record::ResultRecord;
use super::sequence::SequenceOutcome;

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// One row per record with the first `k` eigenvalues.
pub fn write_records_csv(records: &[ResultRecord], w: impl Write) -> Result<()> {
    let k = records.iter().map(|r| r.eigenvalues.len()).max().unwrap_or(0);
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["index", "h", "epsilon", "nodes", "converged"].map(String::from).to_vec();
    header.extend((1..=k).map(|j| format!("lambda{j}")));
    header.extend(
        ["nodal_count", "verdict", "min_boundary_distance", "max_nonpositive_radius", "courant_ok", "error"]
            .map(String::from),
    );
    out.write_record(&header)?;
    for r in records {
        let mut row = vec![opt(r.index), format!("{:?}", r.h), opt(r.epsilon), r.nodes.to_string(), r.converged.to_string()];
        row.extend((1..=k).map(|j| opt(r.lambda(j))));
        let nodal = r.nodal.as_ref();
        row.push(nodal.map(|n| n.component_count.to_string()).unwrap_or_default());
        row.push(r.verdict().to_string());
        row.push(opt(nodal.and_then(|n| n.min_boundary_distance)));
        row.push(opt(nodal.and_then(|n| n.max_nonpositive_radius)));
        row.push(r.courant_ok.to_string());
        row.push(r.error.clone().unwrap_or_default());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// The convergence table of a sequence: `lambda_2` and verdict per index and spacing.
pub fn write_sequence_csv(seq: &SequenceOutcome, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["study", "index", "h", "lambda2", "verdict", "min_boundary_distance", "monotone_at_h", "error"])?;
    for r in &seq.rows {
        let monotone = seq.checks.iter().find(|c| c.h == r.h).is_some_and(|c| c.holds);
        out.write_record([
            seq.study.to_string(),
            format!("{:?}", r.index),
            format!("{:?}", r.h),
            opt(r.lambda2),
            r.verdict.to_string(),
            opt(r.min_boundary_distance),
            monotone.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_find_csv(outcome: &FindOutcome, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["domain", "outer", "count", "fraction", "epsilon", "h", "estimated_nodes", "status", "lambda2", "detail"])?;
    for r in &outcome.log {
        let (status, detail) = match &r.status {
            RowStatus::Passed => ("passed", String::new()),
            RowStatus::Failed => ("failed", String::new()),
            RowStatus::Unaffordable => ("unaffordable", String::new()),
            RowStatus::Error(e) => ("error", e.clone()),
        };
        out.write_record([
            r.domain.to_string(),
            format!("{:?}", r.outer),
            r.count.to_string(),
            format!("{:?}", r.fraction),
            format!("{:?}", r.epsilon),
            format!("{:?}", r.h),
            r.estimated_nodes.to_string(),
            status.to_string(),
            opt(r.lambda2),
            detail,
        ])?;
    }
    out.flush()?;
    Ok(())
}
