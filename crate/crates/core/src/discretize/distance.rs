use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::grid::VoxelGrid;

fn offsets26() -> Vec<[i32; 3]> {
    let mut v = Vec::with_capacity(26);
    for i in -1..=1 {
        for j in -1..=1 {
            for k in -1..=1 {
                if (i, j, k) != (0, 0, 0) {
                    v.push([i, j, k]);
                }
            }
        }
    }
    v
}

/// Squared distance in half-lattice units between a node and a seed given
/// in doubled coordinates.
fn dist2(node: &[i32; 3], seed: &[i32; 3]) -> i64 {
    (0..3).map(|k| {
        let d = (2 * node[k] - seed[k]) as i64;
        d * d
    }).sum()
}

/// Distance from every node to the nearest non-interior lattice point or
/// severed-edge midpoint.
///
/// Seeds within the 26-neighborhood are measured exactly; the nearest seed
/// is then propagated through the 26-connected node graph, so the result
/// overestimates the true lattice distance by well under one spacing.
pub fn boundary_distance_field(grid: &VoxelGrid) -> Vec<f64> {
    let n = grid.len();
    let offs = offsets26();
    let mut best: Vec<i64> = vec![i64::MAX; n];
    let mut seed: Vec<[i32; 3]> = vec![[0; 3]; n];
    for (i, c) in grid.nodes().iter().enumerate() {
        for o in &offs {
            let q = [c[0] + o[0], c[1] + o[1], c[2] + o[2]];
            if !grid.is_interior(&q) {
                let s = [2 * q[0], 2 * q[1], 2 * q[2]];
                let d = dist2(c, &s);
                if d < best[i] || (d == best[i] && s < seed[i]) {
                    best[i] = d;
                    seed[i] = s;
                }
            }
        }
    }
    for &(a, b) in grid.severed() {
        let (p, q) = (grid.nodes()[a as usize], grid.nodes()[b as usize]);
        let s = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
        for i in [a as usize, b as usize] {
            let d = dist2(&grid.nodes()[i], &s);
            if d < best[i] || (d == best[i] && s < seed[i]) {
                best[i] = d;
                seed[i] = s;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> =
        (0..n).filter(|&i| best[i] < i64::MAX).map(|i| Reverse((best[i], i))).collect();
    while let Some(Reverse((d, i))) = heap.pop() {
        if d > best[i] {
            continue;
        }
        let c = grid.nodes()[i];
        let s = seed[i];
        for o in &offs {
            let q = [c[0] + o[0], c[1] + o[1], c[2] + o[2]];
            if let Some(j) = grid.node_at(&q) {
                let dj = dist2(&q, &s);
                if dj < best[j] {
                    best[j] = dj;
                    seed[j] = s;
                    heap.push(Reverse((dj, j)));
                }
            }
        }
    }
    let half_h = 0.5 * grid.h();
    best.iter().map(|&d| (d as f64).sqrt() * half_h).collect()
}
