//! Shared pieces of the acceptance suite.

use rand::Rng;

use nodalshell::discretize::{VoxelGrid, STEPS};
use nodalshell::harness::Case;
use nodalshell::nodal::containment_report;

/// Extrapolates a first-order quantity `q(h) = q0 + c h` from two spacings.
pub fn richardson(h1: f64, q1: f64, h2: f64, q2: f64) -> f64 {
    (h1 * q2 - h2 * q1) / (h1 - h2)
}

pub fn relative_error(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

/// Connected lattice blob of exactly `order` nodes grown from the origin.
pub fn random_connected_grid(rng: &mut impl Rng, order: usize, h: f64) -> VoxelGrid {
    let mut nodes = vec![[0, 0, 0]];
    while nodes.len() < order {
        let base = nodes[rng.gen_range(0..nodes.len())];
        let s = STEPS[rng.gen_range(0..6)];
        let c = [base[0] + s[0], base[1] + s[1], base[2] + s[2]];
        if !nodes.contains(&c) {
            nodes.push(c);
        }
    }
    VoxelGrid::from_nodes(h, nodes, &[]).expect("valid blob")
}

/// Suite-wide observations: Courant bound and sign-flip invariance per solved case.
#[derive(Default)]
pub struct Ledger {
    pub courant: Vec<(String, bool)>,
    pub sign_flip: Vec<(String, bool)>,
}

impl Ledger {
    pub fn observe(&mut self, label: &str, case: &Case) {
        self.courant.push((label.to_string(), case.record.courant_ok));
        if case.spectrum.len() < 2 {
            return;
        }
        let psi = &case.spectrum.eigenvectors[1];
        let neg: Vec<f64> = psi.iter().map(|v| -v).collect();
        let margin = case.record.nodal.as_ref().map_or(2.0 * case.grid.h(), |n| n.margin);
        let a = containment_report(&case.grid, psi, margin).expect("nonzero eigenvector");
        let b = containment_report(&case.grid, &neg, margin).expect("nonzero eigenvector");
        let same = a.verdict == b.verdict
            && a.component_count == b.component_count
            && a.min_boundary_distance == b.min_boundary_distance
            && a.flipped != b.flipped;
        self.sign_flip.push((label.to_string(), same));
    }

    pub fn observe_courant(&mut self, label: &str, ok: bool) {
        self.courant.push((label.to_string(), ok));
    }
}
