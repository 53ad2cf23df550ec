//! Implicit geometry for the ball, the shell and the perturbed ball-and-shell family.

mod domain;
mod points;
mod sphere_mesh;
mod text;
mod web;

pub use domain::*;
pub use points::{epsilon_upper_bound, SpherePointSet, LEVEL_TOLERANCE};
pub use sphere_mesh::CubeSphere;
pub use text::{from_text, to_text};
pub use web::SheetWeb;

use crate::discretize::voxelize;
use crate::error::{Error, Result};
use crate::topology::complement_components;

/// Mollified dilation of `base`, checked against a topology change.
///
/// The complement component count of base and result is compared on voxel
/// grids of spacing `guard_spacing` (default: a third of the smallest feature).
/// `delta = width = 0` returns the base unchanged.
pub fn smooth_domain(base: DomainSpec, delta: f64, width: f64, guard_spacing: Option<f64>) -> Result<Smoothed> {
    let smoothed = smoothed_unchecked(base, delta, width)?;
    if smoothed.is_identity() {
        return Ok(smoothed);
    }
    if delta >= smoothed.base().delta_limit() {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} is not below the estimated limit {}",
            smoothed.base().delta_limit()
        )));
    }
    let h = guard_spacing.unwrap_or_else(|| smoothed.base().min_feature_size() / 3.0);
    let wrapped = DomainSpec::Smoothed(smoothed.clone());
    let half_width = wrapped.bounding_radius() + 2.0 * h;
    let before = complement_components(&voxelize(smoothed.base(), h)?, half_width)?.components;
    let after = complement_components(&voxelize(&wrapped, h)?, half_width)?.components;
    if before != after {
        return Err(Error::TopologyChanged { before, after });
    }
    Ok(smoothed)
}
