//! Building a domain from a configuration and running one grid spacing.

use std::time::Instant;

use crate::discretize::{boundary_distance_field, voxelize, GridLaplacian, VoxelGrid};
use crate::eigensolve::{smallest_eigenpairs, simplicity_report, Spectrum};
use crate::error::{invalid, Error, Result};
use crate::geometry::*;
use crate::nodal::{certified_nodal_count, containment_report_with, eigenvector_bands, interface_check, nodal_domains, ZERO_BAND};
use crate::topology::{complement_components, full_report, BETTI_VOXEL_LIMIT};

use super::config::{DomainKind, ExperimentConfig};
use super::record::{ResultRecord, Timings, SCHEMA_VERSION};

fn fournais(cfg: &ExperimentConfig) -> Result<Fournais> {
    if cfg.inner_radius != INNER_RADIUS {
        return Err(invalid(format!("the perturbed family is built on inner radius {INNER_RADIUS}")));
    }
    let points = cfg.center_set()?;
    let eps = cfg.resolve_epsilon(&points);
    if cfg.relaxed {
        make_fournais_relaxed(points, eps, cfg.outer_radius)
    } else {
        make_fournais(points, eps, cfg.outer_radius)
    }
}

fn pole(cfg: &ExperimentConfig) -> Result<Pole> {
    let sheet = make_sheet(make_passage(fournais(cfg)?, cfg.n)?, cfg.m)?;
    if cfg.l > 0 {
        return make_pole(sheet, cfg.l);
    }
    match make_pole(sheet.clone(), 1) {
        Err(Error::PoleTooWide { required, .. }) => make_pole(sheet, required),
        other => other,
    }
}

fn build_kind(cfg: &ExperimentConfig, kind: DomainKind) -> Result<DomainSpec> {
    Ok(match kind {
        DomainKind::Ball => Ball::new(cfg.inner_radius)?.into(),
        DomainKind::Shell => Shell::new(cfg.inner_radius, cfg.outer_radius)?.into(),
        DomainKind::Fournais => fournais(cfg)?.into(),
        DomainKind::Passage => make_passage(fournais(cfg)?, cfg.n)?.into(),
        DomainKind::Sheet => make_sheet(make_passage(fournais(cfg)?, cfg.n)?, cfg.m)?.into(),
        DomainKind::Pole => pole(cfg)?.into(),
        DomainKind::Smoothed => {
            let base = build_kind(cfg, cfg.smooth_base)?;
            smooth_domain(base, cfg.delta, cfg.width, None)?.into()
        }
    })
}

pub fn build_domain(cfg: &ExperimentConfig) -> Result<DomainSpec> {
    build_kind(cfg, cfg.domain)
}

/// Epsilon of the domain's rooms, if it has any.
pub fn domain_epsilon(spec: &DomainSpec) -> Option<f64> {
    match spec {
        DomainSpec::Ball(_) | DomainSpec::Shell(_) => None,
        DomainSpec::Fournais(f) => Some(f.epsilon()),
        DomainSpec::Passage(p) => Some(p.base().epsilon()),
        DomainSpec::Sheet(s) => Some(s.fournais().epsilon()),
        DomainSpec::Pole(p) => Some(p.base().fournais().epsilon()),
        DomainSpec::Smoothed(s) => domain_epsilon(s.base()),
    }
}

/// Half-width of a lattice box that strictly contains the domain at spacing `h`.
pub fn topology_half_width(spec: &DomainSpec, h: f64) -> f64 {
    spec.bounding_radius() + 2.0 * h
}

/// A solved case with the data needed for field export.
pub struct Case {
    pub grid: VoxelGrid,
    pub spectrum: Spectrum,
    pub record: ResultRecord,
}

/// Runs one configuration at spacing `h`.
pub fn solve_case(cfg: &ExperimentConfig, index: Option<f64>, h: f64) -> Result<Case> {
    let t = Instant::now();
    let spec = build_domain(cfg)?;
    let build_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let grid = voxelize(&spec, h)?;
    let voxelize_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let op = GridLaplacian::new(&grid);
    let spectrum = smallest_eigenpairs(&op, &cfg.solver_options())?;
    let solve_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let have = spectrum.converged_count.min(spectrum.len());
    let simple = (cfg.k >= 3).then(|| simplicity_report(&spectrum, 2, 0.0).ok().map(|r| r.simple)).flatten();
    let bands = eigenvector_bands(&spectrum.eigenvalues, &spectrum.residuals);
    let mut nodal_counts = Vec::with_capacity(spectrum.len());
    let mut certified_counts = Vec::with_capacity(spectrum.len());
    for (psi, &band) in spectrum.eigenvectors.iter().zip(&bands) {
        nodal_counts.push(nodal_domains(&grid, psi)?.component_count);
        // Below the band the sign of a node is solver noise.
        let band = band.max(ZERO_BAND * psi.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        certified_counts.push(certified_nodal_count(&grid, psi, band)?);
    }
    // The Courant bound is asserted on converged pairs only.
    let courant_ok = certified_counts.iter().take(have).enumerate().all(|(j, &c)| c <= j + 1);
    let (nodal, interface) = if spectrum.len() >= 2 {
        let distance = boundary_distance_field(&grid);
        let psi2 = &spectrum.eigenvectors[1];
        let mut report = containment_report_with(&grid, psi2, cfg.margin_for(h), &distance)?;
        report.labels = Vec::new();
        (Some(report), Some(interface_check(&grid, psi2)?))
    } else {
        (None, None)
    };
    let topology = if cfg.topology {
        let half = topology_half_width(&spec, h);
        Some(if grid.len() <= BETTI_VOXEL_LIMIT { full_report(&grid, half)? } else { complement_components(&grid, half)? })
    } else {
        None
    };
    let analyse_s = t.elapsed().as_secs_f64();

    let record = ResultRecord {
        schema_version: SCHEMA_VERSION,
        config: cfg.to_text(),
        index,
        h,
        epsilon: domain_epsilon(&spec),
        nodes: grid.len(),
        severed: grid.severed().len(),
        under_resolved: grid.under_resolved(),
        eigenvalues: spectrum.eigenvalues.clone(),
        residuals: spectrum.residuals.clone(),
        converged: spectrum.converged,
        iterations: spectrum.iterations,
        gaps: spectrum.gaps(),
        simple,
        nodal,
        nodal_counts,
        certified_counts,
        courant_ok,
        interface,
        topology,
        timings: Timings { build_s, voxelize_s, solve_s, analyse_s },
        error: None,
    };
    Ok(Case { grid, spectrum, record })
}

/// As [`solve_case`], folding any failure into the record.
pub fn run_case(cfg: &ExperimentConfig, index: Option<f64>, h: f64) -> ResultRecord {
    match solve_case(cfg, index, h) {
        Ok(case) => case.record,
        Err(e) => ResultRecord::failed(cfg, index, h, &e),
    }
}

/// Re-runs a record from its embedded configuration snapshot.
pub fn rerun(record: &ResultRecord) -> Result<ResultRecord> {
    Ok(run_case(&record.snapshot()?, record.index, record.h))
}
