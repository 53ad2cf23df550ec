use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::vec3::Vec3;

/// Marker for a missing or severed neighbor.
pub const NO_NODE: u32 = u32::MAX;

/// Lattice steps in neighbor-slot order: -x, +x, -y, +y, -z, +z.
pub const STEPS: [[i32; 3]; 6] = [
    [-1, 0, 0],
    [1, 0, 0],
    [0, -1, 0],
    [0, 1, 0],
    [0, 0, -1],
    [0, 0, 1],
];

/// Interior nodes of a domain on the lattice `h * Z^3`.
///
/// Nodes are stored in lexicographic order of their lattice coordinates. A
/// neighbor slot holds [`NO_NODE`] when the lattice neighbor is outside the
/// domain or the connecting edge is severed by a wall.
#[derive(Clone, Debug)]
pub struct VoxelGrid {
    h: f64,
    half_extent: i32,
    nodes: Vec<[i32; 3]>,
    index: Vec<u32>,
    neighbors: Vec<[u32; 6]>,
    severed: Vec<(u32, u32)>,
    under_resolved: bool,
}

impl VoxelGrid {
    fn side(half_extent: i32) -> usize {
        (2 * half_extent + 1) as usize
    }

    fn linear(half_extent: i32, c: &[i32; 3]) -> Option<usize> {
        let k = half_extent;
        if c.iter().any(|v| v.abs() > k) {
            return None;
        }
        let w = Self::side(k);
        Some((((c[0] + k) as usize * w) + (c[1] + k) as usize) * w + (c[2] + k) as usize)
    }

    fn assemble(
        h: f64,
        half_extent: i32,
        nodes: Vec<[i32; 3]>,
        is_cut: impl Fn(usize, usize) -> bool + Sync,
        under_resolved: bool,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let w = Self::side(half_extent);
        let mut index = vec![NO_NODE; w * w * w];
        for (i, c) in nodes.iter().enumerate() {
            let li = Self::linear(half_extent, c).expect("node inside the lattice box");
            index[li] = i as u32;
        }
        let neighbors: Vec<[u32; 6]> = nodes
            .par_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut slots = [NO_NODE; 6];
                for (slot, s) in slots.iter_mut().zip(STEPS.iter()) {
                    let q = [c[0] + s[0], c[1] + s[1], c[2] + s[2]];
                    if let Some(li) = Self::linear(half_extent, &q) {
                        let j = index[li];
                        // canonical order keeps the cut decision symmetric
                        if j != NO_NODE && !is_cut(i.min(j as usize), i.max(j as usize)) {
                            *slot = j;
                        }
                    }
                }
                slots
            })
            .collect();
        let mut severed = Vec::new();
        for (i, c) in nodes.iter().enumerate() {
            for (d, s) in STEPS.iter().enumerate().skip(1).step_by(2) {
                let q = [c[0] + s[0], c[1] + s[1], c[2] + s[2]];
                if let Some(li) = Self::linear(half_extent, &q) {
                    let j = index[li];
                    if j != NO_NODE && neighbors[i][d] == NO_NODE {
                        severed.push((i as u32, j));
                    }
                }
            }
        }
        severed.sort_unstable();
        Ok(Self { h, half_extent, nodes, index, neighbors, severed, under_resolved })
    }

    /// Grid from an explicit node list; `severed` pairs must be lattice-adjacent.
    pub fn from_nodes(h: f64, mut nodes: Vec<[i32; 3]>, severed: &[([i32; 3], [i32; 3])]) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter("spacing must be positive".into()));
        }
        nodes.sort_unstable();
        nodes.dedup();
        let half_extent = nodes.iter().flat_map(|c| c.iter().map(|v| v.abs())).max().unwrap_or(0) + 1;
        for (a, b) in severed {
            let d: i32 = (0..3).map(|k| (a[k] - b[k]).abs()).sum();
            if d != 1 {
                return Err(Error::InvalidParameter("severed pairs must be lattice-adjacent".into()));
            }
        }
        let mut cut: Vec<([i32; 3], [i32; 3])> =
            severed.iter().map(|&(a, b)| if a < b { (a, b) } else { (b, a) }).collect();
        cut.sort_unstable();
        let lookup = nodes.clone();
        Self::assemble(
            h,
            half_extent,
            nodes,
            |i, j| {
                let (a, b) = if lookup[i] < lookup[j] { (lookup[i], lookup[j]) } else { (lookup[j], lookup[i]) };
                cut.binary_search(&(a, b)).is_ok()
            },
            false,
        )
    }

    /// Rebuilds a grid from its stored parts; `severed` holds sorted index pairs.
    pub(crate) fn from_parts(
        h: f64,
        half_extent: i32,
        nodes: Vec<[i32; 3]>,
        severed: &[(u32, u32)],
        under_resolved: bool,
    ) -> Result<Self> {
        if !(h > 0.0) || !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Format("grid nodes must be sorted and unique".into()));
        }
        if nodes.iter().any(|c| c.iter().any(|v| v.abs() >= half_extent)) {
            return Err(Error::Format("grid node outside its lattice box".into()));
        }
        let grid = Self::assemble(
            h,
            half_extent,
            nodes,
            |i, j| {
                let key = if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
                severed.binary_search(&key).is_ok()
            },
            under_resolved,
        )?;
        if grid.severed.as_slice() != severed {
            return Err(Error::Format("severed pairs are not lattice-adjacent nodes".into()));
        }
        Ok(grid)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Lattice coordinates are bounded by this value in every axis (exclusive of padding).
    pub fn half_extent(&self) -> i32 {
        self.half_extent
    }

    pub fn nodes(&self) -> &[[i32; 3]] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &[u32; 6] {
        &self.neighbors[i]
    }

    pub fn severed(&self) -> &[(u32, u32)] {
        &self.severed
    }

    /// Set when the spacing exceeds half the domain's smallest feature.
    pub fn under_resolved(&self) -> bool {
        self.under_resolved
    }

    pub fn point(&self, i: usize) -> Vec3 {
        let c = self.nodes[i];
        [c[0] as f64 * self.h, c[1] as f64 * self.h, c[2] as f64 * self.h]
    }

    pub fn radius(&self, i: usize) -> f64 {
        crate::vec3::norm(&self.point(i))
    }

    /// Node index at lattice coordinates, if interior.
    pub fn node_at(&self, c: &[i32; 3]) -> Option<usize> {
        Self::linear(self.half_extent, c).and_then(|li| {
            let j = self.index[li];
            (j != NO_NODE).then_some(j as usize)
        })
    }

    pub fn is_interior(&self, c: &[i32; 3]) -> bool {
        self.node_at(c).is_some()
    }

    /// Whether any stencil neighbor of node `i` is a Dirichlet boundary value.
    pub fn is_boundary_adjacent(&self, i: usize) -> bool {
        self.neighbors[i].contains(&NO_NODE)
    }

    /// Whether nodes `a` and `b` are lattice neighbors separated by a wall.
    pub fn is_severed(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) };
        self.severed.binary_search(&key).is_ok()
    }

    /// Connected components of the node adjacency graph.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(i) = stack.pop() {
                for &j in &self.neighbors[i] {
                    if j != NO_NODE && !seen[j as usize] {
                        seen[j as usize] = true;
                        stack.push(j as usize);
                    }
                }
            }
        }
        count
    }
}

/// Interior lattice nodes of `spec` at spacing `h`, with wall crossings severed.
pub fn voxelize(spec: &DomainSpec, h: f64) -> Result<VoxelGrid> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter("spacing must be positive".into()));
    }
    let radius = spec.bounding_radius();
    let k = (radius / h).ceil() as i32 + 1;
    let r2 = radius * radius;
    let nodes: Vec<[i32; 3]> = (-k..=k)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut slab = Vec::new();
            for j in -k..=k {
                for l in -k..=k {
                    let p = [i as f64 * h, j as f64 * h, l as f64 * h];
                    if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= r2 && spec.contains(&p) {
                        slab.push([i, j, l]);
                    }
                }
            }
            slab.into_iter()
        })
        .collect();
    let under_resolved = h > 0.5 * spec.min_feature_size();
    let cuts = spec.has_cuts();
    let lookup = nodes.clone();
    let point = |c: &[i32; 3]| [c[0] as f64 * h, c[1] as f64 * h, c[2] as f64 * h];
    VoxelGrid::assemble(
        h,
        k,
        nodes,
        |i, j| cuts && spec.severs(&point(&lookup[i]), &point(&lookup[j])),
        under_resolved,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_fournais, Ball, SpherePointSet};

    fn ball(r: f64) -> DomainSpec {
        Ball::new(r).unwrap().into()
    }

    /// Exhaustive count of lattice points strictly inside a ball.
    fn brute_count(radius: f64, h: f64) -> usize {
        let k = (radius / h).ceil() as i32 + 2;
        let mut n = 0;
        for i in -k..=k {
            for j in -k..=k {
                for l in -k..=k {
                    let r = ((i * i + j * j + l * l) as f64).sqrt() * h;
                    n += usize::from(r < radius);
                }
            }
        }
        n
    }

    #[test]
    fn ball_node_counts() {
        assert_eq!(voxelize(&ball(1.0), 0.5).unwrap().len(), 27);
        assert_eq!(voxelize(&ball(1.0), 0.9).unwrap().len(), 7);
        for h in [0.3, 0.21, 0.1] {
            assert_eq!(voxelize(&ball(1.0), h).unwrap().len(), brute_count(1.0, h));
        }
    }

    #[test]
    fn index_map_is_a_bijection() {
        let g = voxelize(&ball(1.0), 0.2).unwrap();
        for (i, c) in g.nodes().iter().enumerate() {
            assert_eq!(g.node_at(c), Some(i));
        }
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(!g.is_interior(&[5, 0, 0]));
    }

    #[test]
    fn fournais_severs_equator_not_pole() {
        let f = make_fournais(SpherePointSet::new(vec![[0.0, 0.0, 1.0]]).unwrap(), 0.2, 1.8).unwrap();
        let g = voxelize(&f.into(), 0.25).unwrap();
        let north_in = g.node_at(&[0, 0, 3]).unwrap();
        let north_out = g.node_at(&[0, 0, 5]).unwrap();
        // (0,0,1) lies on the sphere inside the room, so it is a member too
        let on_sphere = g.node_at(&[0, 0, 4]).unwrap();
        assert!(!g.is_severed(north_in, on_sphere));
        assert!(!g.is_severed(on_sphere, north_out));
        // (1,0,0) is on the wall and excluded; take a diagonal equatorial edge instead
        assert!(g.node_at(&[4, 0, 0]).is_none());
        let a = g.node_at(&[3, 2, 0]).unwrap();
        let b = g.node_at(&[4, 2, 0]).unwrap();
        assert!(g.is_severed(a, b));
        for &(a, b) in g.severed() {
            let (p, q) = (g.nodes()[a as usize], g.nodes()[b as usize]);
            let d: i32 = (0..3).map(|k| (p[k] - q[k]).abs()).sum();
            assert_eq!(d, 1);
        }
    }

    #[test]
    fn empty_grid_is_an_error() {
        let thin: DomainSpec = crate::geometry::Shell::new(1.0, 1.05).unwrap().into();
        assert!(matches!(voxelize(&thin, 0.5), Err(Error::EmptyGrid)));
        assert!(matches!(VoxelGrid::from_nodes(0.1, vec![], &[]), Err(Error::EmptyGrid)));
    }

    #[test]
    fn ball_is_connected() {
        assert_eq!(voxelize(&ball(1.0), 0.1).unwrap().component_count(), 1);
    }
}
