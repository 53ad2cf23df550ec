use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::eigensolve::SymmetricOperator;

use super::grid::{VoxelGrid, NO_NODE};

/// Symmetric sparse matrix in compressed-row layout with sorted column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymMatrix {
    order: usize,
    row_offsets: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    pub fn from_parts(order: usize, row_offsets: Vec<usize>, cols: Vec<u32>, values: Vec<f64>) -> Self {
        assert_eq!(row_offsets.len(), order + 1);
        assert_eq!(cols.len(), values.len());
        Self { order, row_offsets, cols, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        self.cols[r.clone()].iter().zip(&self.values[r]).map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.cols[r.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    /// Exact structural and numerical symmetry.
    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.order).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.order, self.order);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }
}

impl SymmetricOperator for SparseSymMatrix {
    fn order(&self) -> usize {
        self.order
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        });
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }
}

/// Discrete Dirichlet Laplacian: `2N/h^2` on the diagonal and `-1/h^2` for
/// every unsevered interior neighbor. Missing neighbors contribute nothing.
pub fn assemble_laplacian(grid: &VoxelGrid) -> SparseSymMatrix {
    let inv = 1.0 / (grid.h() * grid.h());
    let rows: Vec<Vec<(u32, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let mut row: Vec<(u32, f64)> = grid
                .neighbors(i)
                .iter()
                .filter(|&&j| j != NO_NODE)
                .map(|&j| (j, -inv))
                .collect();
            row.push((i as u32, 6.0 * inv));
            row.sort_unstable_by_key(|e| e.0);
            row
        })
        .collect();
    let mut row_offsets = Vec::with_capacity(grid.len() + 1);
    row_offsets.push(0);
    let mut cols = Vec::new();
    let mut values = Vec::new();
    for row in rows {
        for (c, v) in row {
            cols.push(c);
            values.push(v);
        }
        row_offsets.push(cols.len());
    }
    SparseSymMatrix { order: grid.len(), row_offsets, cols, values }
}

/// Matrix-free form of the same operator, reading the grid's neighbor table.
pub struct GridLaplacian<'a> {
    grid: &'a VoxelGrid,
    inv_h2: f64,
}

impl<'a> GridLaplacian<'a> {
    pub fn new(grid: &'a VoxelGrid) -> Self {
        Self { grid, inv_h2: 1.0 / (grid.h() * grid.h()) }
    }
}

impl SymmetricOperator for GridLaplacian<'_> {
    fn order(&self) -> usize {
        self.grid.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let g = self.grid;
        let s = self.inv_h2;
        y.par_chunks_mut(4096).enumerate().for_each(|(block, chunk)| {
            let start = block * 4096;
            for (k, yi) in chunk.iter_mut().enumerate() {
                let i = start + k;
                let mut acc = 6.0 * x[i];
                for &j in g.neighbors(i) {
                    if j != NO_NODE {
                        acc -= x[j as usize];
                    }
                }
                *yi = acc * s;
            }
        });
    }

    fn diagonal(&self) -> Vec<f64> {
        vec![6.0 * self.inv_h2; self.grid.len()]
    }
}
