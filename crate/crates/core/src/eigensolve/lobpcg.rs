use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{to_dense, Preconditioner, SolveMethod, SolverOptions, Spectrum, SymmetricOperator};
use crate::error::{Error, Result};

/// Relative cutoff for basis directions in the Rayleigh-Ritz Gram matrix.
const GRAM_CUTOFF: f64 = 1e-10;

fn column(m: &DMatrix<f64>, j: usize) -> &[f64] {
    let n = m.nrows();
    &m.as_slice()[j * n..(j + 1) * n]
}

fn column_mut(m: &mut DMatrix<f64>, j: usize) -> &mut [f64] {
    let n = m.nrows();
    &mut m.as_mut_slice()[j * n..(j + 1) * n]
}

fn apply_block<A: SymmetricOperator + ?Sized>(op: &A, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(x.nrows(), x.ncols());
    for j in 0..x.ncols() {
        op.apply(column(x, j), column_mut(&mut y, j));
    }
    y
}

/// `a^T b` through the blocked matrix product.
fn gram(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.transpose() * b
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigen-decomposition with eigenvalues sorted ascending.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Rayleigh-Ritz on the span of `s`: returns the lowest `keep` Ritz values
/// and the coefficient matrix, or `None` if the basis is too degenerate.
fn rayleigh_ritz(s: &DMatrix<f64>, a_s: &DMatrix<f64>, keep: usize) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let m = s.ncols();
    let g = gram(&s, &s);
    let h = symmetrize(&gram(&s, &a_s));
    let d: Vec<f64> = (0..m).map(|i| 1.0 / g[(i, i)].max(f64::MIN_POSITIVE).sqrt()).collect();
    let scale = DMatrix::from_diagonal(&DVector::from_vec(d));
    let gs = symmetrize(&(&scale * g * &scale));
    let hs = &scale * h * &scale;
    let (gl, gv) = sorted_eigen(gs);
    let top = gl.last().copied().unwrap_or(0.0);
    if !(top > 0.0) {
        return None;
    }
    let kept: Vec<usize> = (0..m).filter(|&i| gl[i] > GRAM_CUTOFF * top).collect();
    if kept.len() < keep {
        return None;
    }
    let z = DMatrix::from_fn(m, kept.len(), |r, c| gv[(r, kept[c])] / gl[kept[c]].sqrt());
    let reduced = symmetrize(&(z.transpose() * hs * &z));
    let (theta, v) = sorted_eigen(reduced);
    let c = &scale * z * v.columns(0, keep);
    Some((theta[..keep].to_vec(), c))
}

/// Orthonormalizes the columns of `x` through its Gram matrix.
fn orthonormalize(x: &mut DMatrix<f64>, ax: Option<&mut DMatrix<f64>>) {
    let g = symmetrize(&gram(&x, &x));
    let (gl, gv) = sorted_eigen(g);
    let m = x.ncols();
    let t = DMatrix::from_fn(m, m, |r, c| gv[(r, c)] / gl[c].max(f64::MIN_POSITIVE).sqrt());
    *x = &*x * &t;
    if let Some(ax) = ax {
        *ax = &*ax * &t;
    }
}

fn normalize_columns(w: &mut DMatrix<f64>, aw: Option<&mut DMatrix<f64>>) -> Vec<usize> {
    let mut live = Vec::new();
    let mut norms = Vec::new();
    for j in 0..w.ncols() {
        let nrm = dot(column(w, j), column(w, j)).sqrt();
        norms.push(nrm);
        if nrm > 0.0 && nrm.is_finite() {
            live.push(j);
            column_mut(w, j).iter_mut().for_each(|v| *v /= nrm);
        }
    }
    if let Some(aw) = aw {
        for &j in &live {
            let nrm = norms[j];
            column_mut(aw, j).iter_mut().for_each(|v| *v /= nrm);
        }
    }
    live
}

/// Residuals below `RESIDUAL_FLOOR * eps * max diag` are rounding noise.
const RESIDUAL_FLOOR: f64 = 1e5;

fn residual_limit(tol: f64, theta: f64, floor: f64) -> f64 {
    (tol * theta.abs()).max(floor).max(f64::MIN_POSITIVE)
}

fn precondition<A: SymmetricOperator + ?Sized>(op: &A, diag: &[f64], r: &DMatrix<f64>, kind: Preconditioner) -> DMatrix<f64> {
    let n = r.nrows();
    let mut w = DMatrix::zeros(n, r.ncols());
    for j in 0..r.ncols() {
        let rj = column(r, j);
        let out = column_mut(&mut w, j);
        match kind {
            Preconditioner::Jacobi => {
                for i in 0..n {
                    out[i] = rj[i] / diag[i];
                }
            }
            Preconditioner::InnerCg { steps } => inner_cg(op, diag, rj, out, steps.max(1)),
        }
    }
    w
}

/// Jacobi-preconditioned conjugate gradients on `A x = b` from a zero start.
fn inner_cg<A: SymmetricOperator + ?Sized>(op: &A, diag: &[f64], b: &[f64], x: &mut [f64], steps: usize) {
    let n = b.len();
    x.iter_mut().for_each(|v| *v = 0.0);
    let mut r = b.to_vec();
    let mut z: Vec<f64> = (0..n).map(|i| r[i] / diag[i]).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for _ in 0..steps {
        if !(rz > 0.0) {
            break;
        }
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = r[i] / diag[i];
        }
        let next = dot(&r, &z);
        let beta = next / rz;
        rz = next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
}

fn residual_norms(x: &DMatrix<f64>, ax: &DMatrix<f64>, theta: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
    let mut r = ax.clone();
    let mut norms = Vec::with_capacity(theta.len());
    for (j, &t) in theta.iter().enumerate() {
        let xj = column(x, j).to_vec();
        let rj = column_mut(&mut r, j);
        for (ri, xi) in rj.iter_mut().zip(&xj) {
            *ri -= t * xi;
        }
        norms.push(dot(rj, rj).sqrt());
    }
    (r, norms)
}

fn select_columns(m: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    m.select_columns(cols.iter())
}

fn hstack(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let n = blocks[0].nrows();
    let mut data = Vec::with_capacity(n * blocks.iter().map(|b| b.ncols()).sum::<usize>());
    for b in blocks {
        data.extend_from_slice(b.as_slice());
    }
    let cols = data.len() / n.max(1);
    DMatrix::from_vec(n, cols, data)
}

fn dense_solve<A: SymmetricOperator + ?Sized>(op: &A, opts: &SolverOptions) -> Spectrum {
    let a = to_dense(op);
    let (values, vectors) = sorted_eigen(symmetrize(&a));
    let k = opts.k;
    let x = vectors.columns(0, k).into_owned();
    let ax = &a * &x;
    let theta: Vec<f64> = (0..k).map(|j| dot(column(&x, j), column(&ax, j))).collect();
    let (_, residuals) = residual_norms(&x, &ax, &theta);
    let _ = values;
    Spectrum {
        eigenvectors: (0..k).map(|j| column(&x, j).to_vec()).collect(),
        eigenvalues: theta,
        residuals,
        converged: true,
        converged_count: k,
        iterations: 0,
        tol: opts.tol,
        block_size: op.order(),
        method: SolveMethod::Dense,
    }
}

/// The `opts.k` smallest eigenpairs of `op`.
///
/// Uses a locally optimal block preconditioned conjugate-gradient iteration
/// with a seeded random start block; operators too small for the padded
/// block are solved densely. Non-convergence is reported through
/// [`Spectrum::converged`] rather than an error.
pub fn smallest_eigenpairs<A: SymmetricOperator + ?Sized>(op: &A, opts: &SolverOptions) -> Result<Spectrum> {
    let n = op.order();
    let k = opts.k;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n < k {
        return Err(Error::OrderTooSmall { order: n, k });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let b = opts.block_size().min(n);
    if n <= 3 * b {
        return Ok(dense_solve(op, opts));
    }
    let diag = op.diagonal();
    if diag.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidParameter("operator diagonal must be positive".into()));
    }
    let floor = RESIDUAL_FLOOR * f64::EPSILON * diag.iter().fold(0.0f64, |a, &d| a.max(d));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::from_iterator(n, b, (0..n * b).map(|_| rng.gen_range(-1.0..1.0)));
    orthonormalize(&mut x, None);
    let mut ax = apply_block(op, &x);
    let (mut theta, c) = rayleigh_ritz(&x, &ax, b).ok_or(Error::InvalidParameter("degenerate start block".into()))?;
    x = &x * &c;
    ax = &ax * &c;
    let mut p: Option<(DMatrix<f64>, DMatrix<f64>)> = None;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        let (r, norms) = residual_norms(&x, &ax, &theta);
        let limit = residual_limit(opts.tol, theta[k - 1], floor);
        if norms[..k].iter().all(|&v| v <= limit) {
            converged = true;
            break;
        }
        iterations += 1;
        let active: Vec<usize> = (0..b).filter(|&j| norms[j] > limit).collect();
        let mut w = precondition(op, &diag, &select_columns(&r, &active), opts.preconditioner);
        for _ in 0..2 {
            let coeff = gram(&x, &w);
            w -= &x * coeff;
        }
        let live = normalize_columns(&mut w, None);
        let w = select_columns(&w, &live);
        let aw = apply_block(op, &w);

        let (s, a_s, with_p) = match &p {
            Some((pm, apm)) => (hstack(&[&x, &w, pm]), hstack(&[&ax, &aw, apm]), true),
            None => (hstack(&[&x, &w]), hstack(&[&ax, &aw]), false),
        };
        let (c, s, a_s) = match rayleigh_ritz(&s, &a_s, b) {
            Some((_, c)) => (c, s, a_s),
            None if with_p => {
                let s = hstack(&[&x, &w]);
                let a_s = hstack(&[&ax, &aw]);
                match rayleigh_ritz(&s, &a_s, b) {
                    Some((_, c)) => (c, s, a_s),
                    None => break,
                }
            }
            None => break,
        };
        let m = s.ncols();
        let tail = c.rows(b, m - b).into_owned();
        let mut pm = s.columns(b, m - b) * &tail;
        let mut apm = a_s.columns(b, m - b) * &tail;
        x = &s * &c;
        let live = normalize_columns(&mut pm, Some(&mut apm));
        p = (live.len() == pm.ncols()).then_some((pm, apm));

        // The updated product drifts from A X through cancellation in the
        // combination, which stalls the residuals; re-apply the operator.
        orthonormalize(&mut x, None);
        ax = apply_block(op, &x);
        let (t, c) = rayleigh_ritz(&x, &ax, b).ok_or(Error::InvalidParameter("block lost rank".into()))?;
        x = &x * &c;
        ax = &ax * &c;
        theta = t;
    }

    // Final extraction from a freshly applied, orthonormal block.
    orthonormalize(&mut x, None);
    let ax = apply_block(op, &x);
    let h = symmetrize(&gram(&x, &ax));
    let (_, v) = sorted_eigen(h);
    let x = &x * &v;
    let ax = &ax * &v;
    let theta: Vec<f64> = (0..b).map(|j| dot(column(&x, j), column(&ax, j))).collect();
    let (_, residuals) = residual_norms(&x, &ax, &theta);
    let limit = residual_limit(opts.tol, theta[k - 1], floor);
    let converged_count = residuals[..k].iter().take_while(|&&r| r <= limit).count();
    Ok(Spectrum {
        eigenvalues: theta[..k].to_vec(),
        eigenvectors: (0..k).map(|j| column(&x, j).to_vec()).collect(),
        residuals: residuals[..k].to_vec(),
        converged: converged && converged_count == k,
        converged_count,
        iterations,
        tol: opts.tol,
        block_size: b,
        method: SolveMethod::Lobpcg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn one_by_one() {
        let a = DMatrix::from_element(1, 1, 600.0);
        let s = smallest_eigenpairs(&a, &SolverOptions::with_k(1)).unwrap();
        assert_eq!(s.eigenvalues, vec![600.0]);
        assert!((s.eigenvectors[0][0].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn path_graph_matches_closed_form() {
        let n = 200;
        let a = path_laplacian(n);
        let s = smallest_eigenpairs(&a, &SolverOptions { tol: 1e-9, ..SolverOptions::with_k(3) }).unwrap();
        assert!(s.converged, "{s:?}");
        assert_eq!(s.method, SolveMethod::Lobpcg);
        for (j, &l) in s.eigenvalues.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((l - exact).abs() <= 1e-8 * exact, "{l} vs {exact}");
        }
    }

    #[test]
    fn inner_cg_preconditioner_agrees() {
        let a = path_laplacian(150);
        let base = SolverOptions { tol: 1e-9, ..SolverOptions::with_k(2) };
        let j = smallest_eigenpairs(&a, &base).unwrap();
        let c = smallest_eigenpairs(&a, &SolverOptions { preconditioner: Preconditioner::InnerCg { steps: 8 }, ..base })
            .unwrap();
        assert!(c.converged);
        for (x, y) in j.eigenvalues.iter().zip(&c.eigenvalues) {
            assert!((x - y).abs() < 1e-9 * x);
        }
    }

    #[test]
    fn order_too_small() {
        let a = DMatrix::<f64>::identity(2, 2);
        assert!(matches!(
            smallest_eigenpairs(&a, &SolverOptions::with_k(3)),
            Err(Error::OrderTooSmall { order: 2, k: 3 })
        ));
    }
}
