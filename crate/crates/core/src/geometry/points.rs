use crate::error::{invalid, Result};
use crate::vec3::{dist, norm, Vec3};

/// Tolerance under which two horizontal levels are the same plane.
pub const LEVEL_TOLERANCE: f64 = 1e-12;

/// Room centers on the unit sphere of R^3.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePointSet {
    centers: Vec<Vec3>,
}

impl SpherePointSet {
    pub const DIMENSION: usize = 3;

    pub fn new(centers: Vec<Vec3>) -> Result<Self> {
        if centers.is_empty() {
            return Err(invalid("a point set needs at least one center"));
        }
        for (i, c) in centers.iter().enumerate() {
            if c.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!("center {i} is not finite")));
            }
            let r = norm(c);
            if (r - 1.0).abs() > 1e-12 {
                return Err(invalid(format!("center {i} has norm {r}, expected 1")));
            }
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if dist(&centers[i], &centers[j]) <= 1e-12 {
                    return Err(invalid(format!("centers {i} and {j} coincide")));
                }
            }
        }
        Ok(Self { centers })
    }

    /// Normalizes every input vector before validating.
    pub fn from_directions(dirs: &[Vec3]) -> Result<Self> {
        let mut centers = Vec::with_capacity(dirs.len());
        for d in dirs {
            let r = norm(d);
            if r == 0.0 || !r.is_finite() {
                return Err(invalid("zero or non-finite direction"));
            }
            centers.push([d[0] / r, d[1] / r, d[2] / r]);
        }
        Self::new(centers)
    }

    /// The two poles (0, 0, ±1).
    pub fn poles() -> Self {
        Self { centers: vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]] }
    }

    /// The six points ±e_i.
    pub fn axes() -> Self {
        let mut centers = Vec::with_capacity(6);
        for a in 0..3 {
            for s in [1.0, -1.0] {
                let mut c = [0.0; 3];
                c[a] = s;
                centers.push(c);
            }
        }
        Self { centers }
    }

    pub fn dimension(&self) -> usize {
        Self::DIMENSION
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[Vec3] {
        &self.centers
    }

    /// Distinct last-coordinate values, sorted ascending.
    pub fn levels(&self) -> Vec<f64> {
        let mut z: Vec<f64> = self.centers.iter().map(|c| c[2]).collect();
        z.sort_by(f64::total_cmp);
        z.dedup_by(|a, b| (*a - *b).abs() <= LEVEL_TOLERANCE);
        z
    }

    /// Minimal chord distance from a unit direction to any center.
    pub fn nearest_distance(&self, theta: &Vec3) -> f64 {
        self.centers.iter().map(|c| dist(theta, c)).fold(f64::INFINITY, f64::min)
    }
}

/// Largest admissible room radius for a center set.
///
/// The bound is the minimum of half the smallest pairwise distance and a quarter
/// of the smaller of (smallest gap between distinct levels, smallest nonzero
/// |first coordinate|). Terms over empty sets are dropped; when every term drops
/// the cap is 0.5.
pub fn epsilon_upper_bound(points: &SpherePointSet) -> f64 {
    let c = points.centers();
    let mut bound = f64::INFINITY;

    let mut pair = f64::INFINITY;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            pair = pair.min(dist(&c[i], &c[j]));
        }
    }
    if pair.is_finite() {
        bound = bound.min(0.5 * pair);
    }

    let levels = points.levels();
    let level_gap = levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let first_coord = c
        .iter()
        .map(|p| p[0].abs())
        .filter(|&v| v != 0.0)
        .fold(f64::INFINITY, f64::min);
    let quarter = level_gap.min(first_coord);
    if quarter.is_finite() {
        bound = bound.min(0.25 * quarter);
    }

    if bound.is_finite() {
        bound
    } else {
        0.5
    }
}
