//! Smallest eigenpairs of symmetric positive semidefinite operators.

mod lobpcg;
mod operator;

pub use lobpcg::smallest_eigenpairs;
pub use operator::{to_dense, SymmetricOperator};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preconditioner {
    /// Division by the operator diagonal.
    Jacobi,
    /// A fixed number of Jacobi-preconditioned conjugate-gradient steps on
    /// `A w = r`, started from zero.
    InnerCg { steps: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub k: usize,
    /// Relative residual tolerance: `|A v - lambda v| <= tol * lambda_k`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub preconditioner: Preconditioner,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { k: 3, tol: 1e-6, max_iter: 3000, seed: 0x5eed, preconditioner: Preconditioner::Jacobi }
    }
}

impl SolverOptions {
    pub fn with_k(k: usize) -> Self {
        Self { k, ..Self::default() }
    }

    /// Block width: `k` plus a padding of `max(2, k)`.
    pub fn block_size(&self) -> usize {
        self.k + self.k.max(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Dense,
    Lobpcg,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvectors, one per eigenvalue.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Leading pairs meeting the tolerance.
    pub converged_count: usize,
    pub iterations: usize,
    pub tol: f64,
    pub block_size: usize,
    pub method: SolveMethod,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `lambda_{j+1} - lambda_j` for consecutive values.
    pub fn gaps(&self) -> Vec<f64> {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub simple: bool,
    pub gap: f64,
}

/// Whether the `j`-th eigenvalue (1-based) is separated from the next one by
/// more than `max(10 * tol * lambda_j, gap_floor)`.
pub fn simplicity_report(spectrum: &Spectrum, j: usize, gap_floor: f64) -> Result<SimplicityReport> {
    if j == 0 {
        return Err(Error::InvalidParameter("eigenvalue index is 1-based".into()));
    }
    if spectrum.converged_count < j + 1 {
        return Err(Error::InsufficientPairs { need: j + 1, have: spectrum.converged_count });
    }
    let (a, b) = (spectrum.eigenvalues[j - 1], spectrum.eigenvalues[j]);
    let gap = b - a;
    let threshold = (10.0 * spectrum.tol * a.abs()).max(gap_floor);
    Ok(SimplicityReport { simple: gap > threshold, gap })
}
