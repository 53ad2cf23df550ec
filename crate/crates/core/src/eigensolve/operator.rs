use nalgebra::DMatrix;

/// A symmetric linear operator consumed through products only.
pub trait SymmetricOperator: Sync {
    fn order(&self) -> usize;

    /// `y = A x`; both slices have length `order()`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn diagonal(&self) -> Vec<f64>;
}

impl SymmetricOperator for DMatrix<f64> {
    fn order(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.nrows();
        for (i, yi) in y.iter_mut().enumerate().take(n) {
            *yi = (0..n).map(|j| self[(i, j)] * x[j]).sum();
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows()).map(|i| self[(i, i)]).collect()
    }
}

/// Materializes an operator as a dense matrix, one unit vector at a time.
pub fn to_dense<A: SymmetricOperator + ?Sized>(op: &A) -> DMatrix<f64> {
    let n = op.order();
    let mut out = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        op.apply(&e, &mut col);
        out.column_mut(j).copy_from_slice(&col);
        e[j] = 0.0;
    }
    out
}
