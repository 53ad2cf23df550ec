//! Nodal domains of discrete eigenfunctions and the inner-ball containment test.

use serde::{Deserialize, Serialize};

use crate::discretize::{boundary_distance_field, VoxelGrid, NO_NODE};
use crate::error::{Error, Result};

/// Relative zero band: values `<= ZERO_BAND * max|psi|` count as nonpositive.
pub const ZERO_BAND: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalComponent {
    /// `+1` or `-1`.
    pub sign: i8,
    pub nodes: usize,
    pub volume: f64,
    /// No node of the component has a Dirichlet neighbor.
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodalReport {
    pub component_count: usize,
    pub components: Vec<NodalComponent>,
    /// Component label per node.
    #[serde(skip)]
    pub labels: Vec<u32>,
    /// The input was negated to make the outermost node positive.
    pub flipped: bool,
    /// Smallest boundary distance over nonpositive nodes.
    pub min_boundary_distance: Option<f64>,
    /// Largest radius over nonpositive nodes.
    pub max_nonpositive_radius: Option<f64>,
    pub verdict: bool,
    pub margin: f64,
    pub courant_violation: bool,
}

/// Node of largest radius, lowest lattice order on ties.
pub fn witness_node(grid: &VoxelGrid) -> usize {
    let mut best = 0;
    let mut best_r = f64::NEG_INFINITY;
    for i in 0..grid.len() {
        let r = grid.radius(i);
        if r > best_r {
            best_r = r;
            best = i;
        }
    }
    best
}

/// `psi` scaled so the witness node is nonnegative; the flag reports a flip.
pub fn orient(grid: &VoxelGrid, psi: &[f64]) -> Result<(Vec<f64>, bool)> {
    check(grid, psi)?;
    let flip = psi[witness_node(grid)] < 0.0;
    let out = if flip { psi.iter().map(|v| -v).collect() } else { psi.to_vec() };
    Ok((out, flip))
}

fn check(grid: &VoxelGrid, psi: &[f64]) -> Result<f64> {
    if psi.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "grid function has {} values for {} nodes",
            psi.len(),
            grid.len()
        )));
    }
    let sup = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(sup > 0.0) || !sup.is_finite() {
        return Err(Error::ZeroFunction);
    }
    Ok(sup)
}

/// Positive-set membership after orientation and zero banding.
fn positive_mask(grid: &VoxelGrid, psi: &[f64]) -> Result<(Vec<bool>, bool)> {
    let sup = check(grid, psi)?;
    let (psi, flipped) = orient(grid, psi)?;
    let band = ZERO_BAND * sup;
    Ok((psi.iter().map(|&v| v > band).collect(), flipped))
}

/// Same-sign components over unsevered adjacency.
pub fn nodal_domains(grid: &VoxelGrid, psi: &[f64]) -> Result<NodalReport> {
    let (positive, flipped) = positive_mask(grid, psi)?;
    let n = grid.len();
    let mut labels = vec![u32::MAX; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    let cell = grid.h().powi(3);
    for s in 0..n {
        if labels[s] != u32::MAX {
            continue;
        }
        let id = components.len() as u32;
        let sign = positive[s];
        let mut count = 0;
        let mut interior = true;
        labels[s] = id;
        stack.push(s);
        while let Some(i) = stack.pop() {
            count += 1;
            interior &= !grid.is_boundary_adjacent(i);
            for &j in grid.neighbors(i) {
                if j != NO_NODE {
                    let j = j as usize;
                    if labels[j] == u32::MAX && positive[j] == sign {
                        labels[j] = id;
                        stack.push(j);
                    }
                }
            }
        }
        components.push(NodalComponent {
            sign: if sign { 1 } else { -1 },
            nodes: count,
            volume: count as f64 * cell,
            interior,
        });
    }
    Ok(NodalReport {
        component_count: components.len(),
        components,
        labels,
        flipped,
        min_boundary_distance: None,
        max_nonpositive_radius: None,
        verdict: false,
        margin: 0.0,
        courant_violation: false,
    })
}

/// Containment of the nonpositive set of `psi2` in the domain and in the
/// inner unit ball, with the given margin.
pub fn containment_report(grid: &VoxelGrid, psi2: &[f64], margin: f64) -> Result<NodalReport> {
    let distance = boundary_distance_field(grid);
    containment_report_with(grid, psi2, margin, &distance)
}

/// As [`containment_report`] with a precomputed boundary distance field.
pub fn containment_report_with(grid: &VoxelGrid, psi2: &[f64], margin: f64, distance: &[f64]) -> Result<NodalReport> {
    if !(margin >= 0.0) {
        return Err(Error::InvalidParameter("margin must be nonnegative".into()));
    }
    let mut report = nodal_domains(grid, psi2)?;
    let (positive, _) = positive_mask(grid, psi2)?;
    let mut min_d = f64::INFINITY;
    let mut max_r = f64::NEG_INFINITY;
    let mut touches = false;
    let mut any = false;
    for i in (0..grid.len()).filter(|&i| !positive[i]) {
        any = true;
        min_d = min_d.min(distance[i]);
        max_r = max_r.max(grid.radius(i));
        touches |= grid.is_boundary_adjacent(i);
    }
    report.margin = margin;
    report.courant_violation = report.component_count != 2;
    if any {
        report.min_boundary_distance = Some(min_d);
        report.max_nonpositive_radius = Some(max_r);
    }
    report.verdict = !report.courant_violation && any && !touches && min_d > margin && max_r < 1.0 - margin;
    Ok(report)
}

/// Whether positive and nonpositive nodes meet along an unsevered edge, with
/// every nodal component adjacent to a component of the opposite sign.
pub fn interface_check(grid: &VoxelGrid, psi2: &[f64]) -> Result<bool> {
    let report = nodal_domains(grid, psi2)?;
    let mut meets = vec![false; report.component_count];
    for i in 0..grid.len() {
        let li = report.labels[i] as usize;
        for &j in grid.neighbors(i) {
            if j != NO_NODE {
                let lj = report.labels[j as usize] as usize;
                if report.components[li].sign != report.components[lj].sign {
                    meets[li] = true;
                }
            }
        }
    }
    Ok(meets.iter().all(|&m| m) && report.components.iter().any(|c| c.sign < 0))
}

/// Entrywise error bounds for unit eigenvectors from their residuals.
///
/// Pairs whose eigenvalues cannot be told apart (`|θ_i - θ_{i+1}| <= r_i + r_{i+1}`)
/// form a cluster, and the bound then holds against the cluster's eigenspace:
/// `sqrt(2) * |R_cluster| / gap`, where the gap is to the nearest eigenvalue outside
/// the cluster. The top cluster only knows its lower neighbor, so its band can
/// be too small, never too large. Infinite when no separated neighbor exists.
pub fn eigenvector_bands(values: &[f64], residuals: &[f64]) -> Vec<f64> {
    let n = values.len().min(residuals.len());
    let mut bands = vec![f64::INFINITY; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= residuals[end] + residuals[end - 1] {
            end += 1;
        }
        let below = (start > 0).then(|| values[start] - values[start - 1]);
        let above = (end < n).then(|| values[end] - values[end - 1]);
        let gap = match (below, above) {
            (Some(a), Some(b)) => a.min(b),
            (Some(g), None) | (None, Some(g)) => g,
            (None, None) => 0.0,
        };
        let r = residuals[start..end].iter().map(|r| r * r).sum::<f64>().sqrt();
        if gap > 0.0 {
            bands[start..end].fill(std::f64::consts::SQRT_2 * r / gap);
        }
        start = end;
    }
    bands
}

/// Nodal domains whose sign survives an entrywise perturbation of `band`.
///
/// Counts the components of `{psi > -band}` holding a node above `band`, plus
/// the components of `{psi < band}` holding a node below `-band`. Any vector
/// within `band` of `psi` has at least this many weak nodal domains.
pub fn certified_nodal_count(grid: &VoxelGrid, psi: &[f64], band: f64) -> Result<usize> {
    check(grid, psi)?;
    let side = |sign: f64| {
        let member: Vec<bool> = psi.iter().map(|&v| sign * v > -band).collect();
        let mut seen = vec![false; grid.len()];
        let mut stack = Vec::new();
        let mut count = 0;
        for s in 0..grid.len() {
            if seen[s] || !member[s] {
                continue;
            }
            let mut certain = false;
            seen[s] = true;
            stack.push(s);
            while let Some(i) = stack.pop() {
                certain |= sign * psi[i] > band;
                for &j in grid.neighbors(i) {
                    if j != NO_NODE && member[j as usize] && !seen[j as usize] {
                        seen[j as usize] = true;
                        stack.push(j as usize);
                    }
                }
            }
            count += usize::from(certain);
        }
        count
    };
    Ok(side(1.0) + side(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_below_the_band_is_not_a_domain() {
        let g = VoxelGrid::from_nodes(0.1, vec![[0, 0, 0], [1, 0, 0], [2, 0, 0]], &[]).unwrap();
        let psi = [-1e-13, 1e-13, 1.0];
        assert_eq!(nodal_domains(&g, &psi).unwrap().component_count, 2);
        assert_eq!(certified_nodal_count(&g, &psi, 1e-9).unwrap(), 1);
        assert_eq!(certified_nodal_count(&g, &[1.0, 0.5, -1.0], 1e-9).unwrap(), 2);
        // a dip inside the band does not split a positive domain
        assert_eq!(certified_nodal_count(&g, &[1.0, -1e-12, 1.0], 1e-9).unwrap(), 1);
    }

    #[test]
    fn bands_follow_clusters() {
        let b = eigenvector_bands(&[1.0, 2.0, 2.0 + 1e-12, 3.0], &[1e-6, 1e-6, 1e-6, 1e-6]);
        assert!((b[0] - 2f64.sqrt() * 1e-6).abs() < 1e-18);
        assert_eq!(b[1], b[2]);
        assert!((b[1] - 2f64.sqrt() * 2f64.sqrt() * 1e-6 / (1.0 - 1e-12)).abs() < 1e-15);
        assert!(eigenvector_bands(&[5.0, 5.0], &[1e-3, 1e-3]).iter().all(|b| b.is_infinite()));
    }

    fn pair(severed: bool) -> VoxelGrid {
        let cut = [([0, 0, 0], [1, 0, 0])];
        VoxelGrid::from_nodes(0.1, vec![[0, 0, 0], [1, 0, 0]], if severed { &cut[..] } else { &[] }).unwrap()
    }

    #[test]
    fn constant_function_is_one_domain() {
        let g = pair(false);
        let r = nodal_domains(&g, &[1.0, 1.0]).unwrap();
        assert_eq!(r.component_count, 1);
        assert_eq!(r.components[0].sign, 1);
    }

    #[test]
    fn sign_change_splits() {
        let g = pair(false);
        let r = nodal_domains(&g, &[1.0, -1.0]).unwrap();
        assert_eq!(r.component_count, 2);
        assert!(interface_check(&g, &[1.0, -1.0]).unwrap());
    }

    #[test]
    fn severed_wall_without_sign_change_has_no_interface() {
        let g = pair(true);
        assert_eq!(nodal_domains(&g, &[1.0, 1.0]).unwrap().component_count, 2);
        assert!(!interface_check(&g, &[1.0, 1.0]).unwrap());
    }

    #[test]
    fn zero_function_is_an_error() {
        assert!(matches!(nodal_domains(&pair(false), &[0.0, 0.0]), Err(Error::ZeroFunction)));
    }

    #[test]
    fn witness_orientation() {
        let g = pair(false);
        // both nodes have radius 0 and 0.1; the second is the witness
        let (o, flipped) = orient(&g, &[2.0, -1.0]).unwrap();
        assert!(flipped);
        assert_eq!(o, vec![-2.0, 1.0]);
    }

    #[test]
    fn zero_band_nodes_are_nonpositive() {
        let g = pair(false);
        let r = nodal_domains(&g, &[1e-14, 1.0]).unwrap();
        assert_eq!(r.component_count, 2);
        assert_eq!(r.components[r.labels[0] as usize].sign, -1);
    }
}
