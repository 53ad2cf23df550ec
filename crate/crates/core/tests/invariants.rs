use nalgebra::SymmetricEigen;
use proptest::prelude::*;

use nodalshell::discretize::{assemble_laplacian, GridLaplacian, VoxelGrid, STEPS};
use nodalshell::eigensolve::{smallest_eigenpairs, to_dense, SolverOptions};
use nodalshell::geometry::*;
use nodalshell::nodal::containment_report;

/// Connected lattice blob grown from the origin by the step choices in `picks`.
fn blob(picks: &[(usize, usize)], h: f64) -> VoxelGrid {
    let mut nodes = vec![[0, 0, 0]];
    for &(from, step) in picks {
        let base = nodes[from % nodes.len()];
        let s = STEPS[step % 6];
        let c = [base[0] + s[0], base[1] + s[1], base[2] + s[2]];
        if !nodes.contains(&c) {
            nodes.push(c);
        }
    }
    VoxelGrid::from_nodes(h, nodes, &[]).unwrap()
}

fn picks(max: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..10_000, 0usize..6), 0..max)
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-1.9f64..1.9, -1.9f64..1.9, -1.9f64..1.9]
}

fn poles(eps: f64) -> Fournais {
    make_fournais(SpherePointSet::poles(), eps, 1.8).unwrap()
}

fn pole(n: u32, m: u32, l: u32) -> Pole {
    make_pole(make_sheet(make_passage(poles(0.25), n).unwrap(), m).unwrap(), l).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perturbation_sequences_nest(x in point()) {
        let f = |e| DomainSpec::from(poles(e));
        if f(0.1).contains(&x) { prop_assert!(f(0.2).contains(&x)); }
        let passage = |n| DomainSpec::from(make_passage(poles(0.25), n).unwrap());
        if passage(2).contains(&x) { prop_assert!(passage(4).contains(&x)); }
        let sheet = |m| DomainSpec::from(make_sheet(make_passage(poles(0.25), 2).unwrap(), m).unwrap());
        if sheet(2).contains(&x) { prop_assert!(sheet(1).contains(&x)); }
        if DomainSpec::from(pole(2, 1, 3)).contains(&x) {
            prop_assert!(DomainSpec::from(pole(2, 1, 5)).contains(&x));
        }
        let smooth = |d| DomainSpec::from(smoothed_unchecked(pole(2, 1, 3).into(), d, 0.02).unwrap());
        if smooth(0.03).contains(&x) { prop_assert!(smooth(0.06).contains(&x)); }
    }

    #[test]
    fn containment_margin_is_monotone(p in picks(120), vals in prop::collection::vec(-1.0f64..1.0, 121), a in 0.0f64..0.5, b in 0.0f64..0.5) {
        let grid = blob(&p, 0.1);
        let psi: Vec<f64> = (0..grid.len()).map(|i| vals[i]).collect();
        prop_assume!(psi.iter().any(|v| *v != 0.0));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if containment_report(&grid, &psi, hi).unwrap().verdict {
            prop_assert!(containment_report(&grid, &psi, lo).unwrap().verdict);
        }
    }

    #[test]
    fn containment_ignores_sign(p in picks(120), vals in prop::collection::vec(-1.0f64..1.0, 121)) {
        let grid = blob(&p, 0.1);
        let psi: Vec<f64> = (0..grid.len()).map(|i| vals[i]).collect();
        prop_assume!(psi.iter().any(|v| *v != 0.0));
        let neg: Vec<f64> = psi.iter().map(|v| -v).collect();
        let a = containment_report(&grid, &psi, 0.0).unwrap();
        let mut b = containment_report(&grid, &neg, 0.0).unwrap();
        prop_assert_ne!(a.flipped, b.flipped);
        b.flipped = a.flipped;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn spectrum_inside_gershgorin_bounds(p in picks(300), h in 0.05f64..1.0) {
        let grid = blob(&p, h);
        prop_assume!(grid.len() >= 4);
        let s = smallest_eigenpairs(&GridLaplacian::new(&grid), &SolverOptions::with_k(3)).unwrap();
        for &l in &s.eigenvalues {
            prop_assert!(l > 0.0 && l <= 12.0 / (h * h) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn iterative_matches_dense(p in picks(400)) {
        let grid = blob(&p, 1.0);
        prop_assume!(grid.len() >= 30);
        let a = assemble_laplacian(&grid);
        let opts = SolverOptions { tol: 1e-10, ..SolverOptions::with_k(3) };
        let s = smallest_eigenpairs(&a, &opts).unwrap();
        let mut exact = SymmetricEigen::new(to_dense(&a)).eigenvalues.as_slice().to_vec();
        exact.sort_by(f64::total_cmp);
        for (x, e) in s.eigenvalues.iter().zip(&exact) {
            prop_assert!((x - e).abs() <= 1e-8 * e, "{x} vs {e}");
        }
    }
}
