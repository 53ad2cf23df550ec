//! Voxel grids, the discrete Dirichlet Laplacian and boundary distances.

mod distance;
mod dump;
mod grid;
mod laplacian;

pub use distance::boundary_distance_field;
pub use dump::{read_grid, read_matrix, read_triplets, write_grid, write_matrix, write_triplets};
pub use grid::{voxelize, VoxelGrid, NO_NODE, STEPS};
pub use laplacian::{assemble_laplacian, GridLaplacian, SparseSymMatrix};
