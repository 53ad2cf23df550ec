use std::collections::HashMap;

use crate::discretize::VoxelGrid;
use crate::error::{Error, Result};

/// Largest voxel count accepted by [`betti_mod2`] (a 32^3 block).
pub const BETTI_VOXEL_LIMIT: usize = 32 * 32 * 32;

/// Cells of the closed voxel complex in doubled coordinates: a voxel centred
/// at lattice point `c` is the cell `2c`, and its faces are `2c + d` with
/// `d` in `{-1, 0, 1}^3`. The dimension of a cell is its number of even
/// coordinates.
fn cells_by_dimension(grid: &VoxelGrid) -> [Vec<[i32; 3]>; 4] {
    let mut seen: std::collections::HashSet<[i32; 3]> = std::collections::HashSet::new();
    let mut out: [Vec<[i32; 3]>; 4] = Default::default();
    for c in grid.nodes() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let cell = [2 * c[0] + dx, 2 * c[1] + dy, 2 * c[2] + dz];
                    if seen.insert(cell) {
                        let dim = cell.iter().filter(|v| *v % 2 == 0).count();
                        out[dim].push(cell);
                    }
                }
            }
        }
    }
    for v in &mut out {
        v.sort_unstable();
    }
    out
}

/// `V - E + F - C` of the closed voxel solid.
pub fn euler_characteristic(grid: &VoxelGrid) -> i64 {
    let cells = cells_by_dimension(grid);
    cells[0].len() as i64 - cells[1].len() as i64 + cells[2].len() as i64 - cells[3].len() as i64
}

fn facets(cell: &[i32; 3]) -> impl Iterator<Item = [i32; 3]> + '_ {
    (0..3).filter(move |&a| cell[a] % 2 == 0).flat_map(move |a| {
        [-1, 1].into_iter().map(move |d| {
            let mut f = *cell;
            f[a] += d;
            f
        })
    })
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Column reduction over GF(2). Columns listed in `skip` are known to
/// reduce to zero and are not processed. Returns the rank and the pivot rows.
fn reduce(columns: Vec<Vec<usize>>, skip: &[bool]) -> (usize, Vec<usize>) {
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(columns.len());
    let mut pivots = Vec::new();
    for (j, mut col) in columns.into_iter().enumerate() {
        if skip.get(j).copied().unwrap_or(false) {
            reduced.push(Vec::new());
            continue;
        }
        col.sort_unstable();
        while let Some(&low) = col.last() {
            match owner.get(&low) {
                Some(&o) => col = xor(&col, &reduced[o]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            owner.insert(low, j);
            pivots.push(low);
        }
        reduced.push(col);
    }
    (pivots.len(), pivots)
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Betti numbers `(b0, b1, b2)` of the closed voxel solid over GF(2).
pub fn betti_mod2(grid: &VoxelGrid) -> Result<[usize; 3]> {
    if grid.len() > BETTI_VOXEL_LIMIT {
        return Err(Error::SizeGuard { voxels: grid.len(), limit: BETTI_VOXEL_LIMIT });
    }
    let cells = cells_by_dimension(grid);
    let index: Vec<HashMap<[i32; 3], usize>> =
        cells.iter().map(|v| v.iter().enumerate().map(|(i, c)| (*c, i)).collect()).collect();
    let boundary = |dim: usize| -> Vec<Vec<usize>> {
        cells[dim].iter().map(|c| facets(c).map(|f| index[dim - 1][&f]).collect()).collect()
    };

    // rank d1 = V - number of components of the 1-skeleton
    let mut parent: Vec<usize> = (0..cells[0].len()).collect();
    let mut rank1 = 0;
    for col in boundary(1) {
        let (a, b) = (find(&mut parent, col[0]), find(&mut parent, col[1]));
        if a != b {
            parent[a] = b;
            rank1 += 1;
        }
    }
    let (rank3, pivots3) = reduce(boundary(3), &[]);
    let mut cleared = vec![false; cells[2].len()];
    for p in pivots3 {
        cleared[p] = true;
    }
    let (rank2, _) = reduce(boundary(2), &cleared);

    let (v, e, f) = (cells[0].len(), cells[1].len(), cells[2].len());
    Ok([v - rank1, e - rank1 - rank2, f - rank2 - rank3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::voxelize;
    use crate::geometry::{Ball, Shell};

    fn grid(nodes: Vec<[i32; 3]>) -> VoxelGrid {
        VoxelGrid::from_nodes(1.0, nodes, &[]).unwrap()
    }

    fn square_ring() -> Vec<[i32; 3]> {
        let mut v = Vec::new();
        for x in -2..=2i32 {
            for y in -2..=2i32 {
                if x.abs().max(y.abs()) == 2 {
                    v.push([x, y, 0]);
                }
            }
        }
        v
    }

    #[test]
    fn single_voxel() {
        let g = grid(vec![[0, 0, 0]]);
        assert_eq!(euler_characteristic(&g), 1);
        assert_eq!(betti_mod2(&g).unwrap(), [1, 0, 0]);
    }

    #[test]
    fn solid_torus() {
        let g = grid(square_ring());
        assert_eq!(betti_mod2(&g).unwrap(), [1, 1, 0]);
        assert_eq!(euler_characteristic(&g), 0);
    }

    #[test]
    fn hollow_cube_encloses_a_void() {
        let mut v = Vec::new();
        for x in -1..=1i32 {
            for y in -1..=1i32 {
                for z in -1..=1i32 {
                    if (x, y, z) != (0, 0, 0) {
                        v.push([x, y, z]);
                    }
                }
            }
        }
        let g = grid(v);
        assert_eq!(betti_mod2(&g).unwrap(), [1, 0, 1]);
        assert_eq!(euler_characteristic(&g), 2);
    }

    #[test]
    fn two_pieces() {
        let g = grid(vec![[0, 0, 0], [3, 0, 0]]);
        assert_eq!(betti_mod2(&g).unwrap(), [2, 0, 0]);
    }

    #[test]
    fn ball_and_shell_euler() {
        let b = voxelize(&Ball::new(1.0).unwrap().into(), 0.1).unwrap();
        assert_eq!(euler_characteristic(&b), 1);
        let s = voxelize(&Shell::new(1.0, 1.8).unwrap().into(), 0.05).unwrap();
        assert_eq!(euler_characteristic(&s), 2);
    }

    #[test]
    fn guard() {
        let g = voxelize(&Ball::new(1.0).unwrap().into(), 0.05).unwrap();
        assert!(g.len() > BETTI_VOXEL_LIMIT);
        assert!(matches!(betti_mod2(&g), Err(Error::SizeGuard { .. })));
    }
}
