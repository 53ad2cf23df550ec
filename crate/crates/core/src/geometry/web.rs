use crate::error::{invalid, Result};
use crate::vec3::Vec3;

use super::points::SpherePointSet;

/// The union of the great circle {x_1 = 0} and one horizontal circle per
/// distinct center level, thickened by `half_width` on the unit sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SheetWeb {
    levels: Vec<f64>,
    half_width: f64,
}

impl SheetWeb {
    pub fn new(points: &SpherePointSet, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(invalid("sheet half-width must be positive"));
        }
        let web = Self { levels: points.levels(), half_width };
        if !web.is_connected() {
            return Err(invalid("sheet web is disconnected"));
        }
        Ok(web)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Every horizontal circle meets the vertical great circle, so the closed web
    /// is connected as long as every level lies on the sphere.
    pub fn is_connected(&self) -> bool {
        self.levels.iter().all(|c| c.abs() <= 1.0)
            && self.levels.windows(2).all(|w| w[0] < w[1])
    }

    /// Euclidean distance from `theta` to the closed web (half-width not subtracted).
    pub fn distance(&self, theta: &Vec3) -> f64 {
        let rho = theta[1].hypot(theta[2]);
        let mut d = theta[0].hypot(rho - 1.0);
        let q = theta[0].hypot(theta[1]);
        for &c in &self.levels {
            let s = (1.0 - c * c).max(0.0).sqrt();
            d = d.min((q - s).hypot(theta[2] - c));
        }
        d
    }

    /// Whether `theta` lies in the open thickened web.
    pub fn covers(&self, theta: &Vec3) -> bool {
        self.distance(theta) < self.half_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn great_circle_points_are_on_web() {
        let web = SheetWeb::new(&SpherePointSet::poles(), 0.1).unwrap();
        let t = std::f64::consts::FRAC_1_SQRT_2;
        assert!(web.distance(&[0.0, t, t]) < 1e-15);
        assert!((web.distance(&[1.0, 0.0, 0.0]) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn level_circle_distance() {
        let p = SpherePointSet::from_directions(&[[1.0, 0.0, 1.0]]).unwrap();
        let web = SheetWeb::new(&p, 0.1).unwrap();
        let t = std::f64::consts::FRAC_1_SQRT_2;
        // on the level circle z = 1/sqrt(2), away from x = 0
        assert!(web.distance(&[t, 0.0, t]) < 1e-15);
        assert_eq!(web.levels().len(), 1);
    }
}
