//! Voxel-level topology: complement components, Euler characteristic and
//! mod-2 Betti numbers of the closed voxel solid.

mod homology;

pub use homology::{betti_mod2, euler_characteristic, BETTI_VOXEL_LIMIT};

use serde::{Deserialize, Serialize};

use crate::discretize::VoxelGrid;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    /// Face-connected components of the non-interior lattice points in the box.
    pub components: usize,
    /// Bounded holes: `components - 1`.
    pub j_observed: usize,
    /// The same count under 26-connectivity.
    pub components26: usize,
    /// Both connectivities agree.
    pub resolved: bool,
    pub euler: Option<i64>,
    pub betti: Option<[usize; 3]>,
    pub h: f64,
}

fn flood(free: &[bool], side: usize, offsets: &[[i32; 3]]) -> usize {
    let mut label = vec![false; free.len()];
    let mut stack = Vec::new();
    let mut count = 0;
    let s = side as i32;
    for start in 0..free.len() {
        if !free[start] || label[start] {
            continue;
        }
        count += 1;
        label[start] = true;
        stack.push(start);
        while let Some(li) = stack.pop() {
            let z = (li % side) as i32;
            let y = ((li / side) % side) as i32;
            let x = (li / (side * side)) as i32;
            for o in offsets {
                let (a, b, c) = (x + o[0], y + o[1], z + o[2]);
                if a < 0 || b < 0 || c < 0 || a >= s || b >= s || c >= s {
                    continue;
                }
                let lj = ((a * s + b) * s + c) as usize;
                if free[lj] && !label[lj] {
                    label[lj] = true;
                    stack.push(lj);
                }
            }
        }
    }
    count
}

/// Components of the lattice complement inside the cube of half-width
/// `half_width`, which must strictly contain every node.
pub fn complement_components(grid: &VoxelGrid, half_width: f64) -> Result<TopologyReport> {
    let h = grid.h();
    let k = (half_width / h).floor() as i32;
    let reach = grid.nodes().iter().flat_map(|c| c.iter().map(|v| v.abs())).max().unwrap_or(0);
    if reach >= k {
        let radius = (0..grid.len()).map(|i| grid.radius(i)).fold(0.0, f64::max);
        return Err(Error::BoxTooSmall { half_width, radius });
    }
    let side = (2 * k + 1) as usize;
    let mut free = vec![true; side * side * side];
    for c in grid.nodes() {
        let li = (((c[0] + k) as usize * side) + (c[1] + k) as usize) * side + (c[2] + k) as usize;
        free[li] = false;
    }
    let six: Vec<[i32; 3]> = crate::discretize::STEPS.to_vec();
    let mut all = Vec::with_capacity(26);
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                if (a, b, c) != (0, 0, 0) {
                    all.push([a, b, c]);
                }
            }
        }
    }
    let components = flood(&free, side, &six);
    let components26 = flood(&free, side, &all);
    Ok(TopologyReport {
        components,
        j_observed: components.saturating_sub(1),
        components26,
        resolved: components == components26,
        euler: None,
        betti: None,
        h,
    })
}

/// Complement counts plus the Euler characteristic, and Betti numbers when
/// the grid is under the rank-computation guard.
pub fn full_report(grid: &VoxelGrid, half_width: f64) -> Result<TopologyReport> {
    let mut report = complement_components(grid, half_width)?;
    report.euler = Some(euler_characteristic(grid));
    if grid.len() <= BETTI_VOXEL_LIMIT {
        let b = betti_mod2(grid)?;
        report.betti = Some(b);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::voxelize;
    use crate::geometry::{Ball, DomainSpec, Shell};

    #[test]
    fn ball_has_no_holes() {
        let g = voxelize(&Ball::new(1.0).unwrap().into(), 0.1).unwrap();
        let r = complement_components(&g, 1.5).unwrap();
        assert_eq!((r.components, r.j_observed), (1, 0));
        assert!(r.resolved);
    }

    #[test]
    fn shell_has_a_cavity() {
        let spec: DomainSpec = Shell::new(1.0, 1.8).unwrap().into();
        let g = voxelize(&spec, 0.1).unwrap();
        let r = complement_components(&g, 2.2).unwrap();
        assert_eq!((r.components, r.j_observed), (2, 1));
    }

    #[test]
    fn box_must_contain_the_grid() {
        let g = voxelize(&Ball::new(1.0).unwrap().into(), 0.1).unwrap();
        assert!(matches!(complement_components(&g, 0.95), Err(Error::BoxTooSmall { .. })));
    }
}
