//! Reference Dirichlet eigenvalues of balls and spherical shells in R^3.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleMethod {
    ClosedForm,
    Bisection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    pub method: OracleMethod,
    /// Width of the certified bracket around `value` (0 for closed forms).
    pub bracket_width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallMode {
    Ground,
    FirstExcited,
}

/// First positive root of `tan x = x`, i.e. the first zero of the spherical
/// Bessel function of order one, bracketed to relative width `1e-13`.
pub fn first_tan_root() -> (f64, f64, f64) {
    let f = |x: f64| x.sin() - x * x.cos();
    let (mut lo, mut hi) = (PI / 2.0 + 0.1, 1.49 * PI);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > 1e-13 * lo {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), lo, hi)
}

pub fn ball_eigenvalue(radius: f64, mode: BallMode) -> Result<OracleValue> {
    if !(radius > 0.0) {
        return Err(invalid("ball radius must be positive"));
    }
    let r2 = radius * radius;
    Ok(match mode {
        BallMode::Ground => OracleValue {
            value: PI * PI / r2,
            method: OracleMethod::ClosedForm,
            bracket_width: 0.0,
        },
        BallMode::FirstExcited => {
            let (x, lo, hi) = first_tan_root();
            OracleValue {
                value: x * x / r2,
                method: OracleMethod::Bisection,
                bracket_width: (hi * hi - lo * lo) / r2,
            }
        }
    })
}

/// Ground eigenvalue of the shell `inner < |x| < outer`: the radial mode
/// `sin(k (r - inner)) / r` gives `(pi / (outer - inner))^2`.
pub fn shell_ground_eigenvalue(inner: f64, outer: f64) -> Result<OracleValue> {
    if !(inner > 0.0 && inner < outer) {
        return Err(invalid("shell radii must satisfy 0 < inner < outer"));
    }
    let t = outer - inner;
    Ok(OracleValue { value: PI * PI / (t * t), method: OracleMethod::ClosedForm, bracket_width: 0.0 })
}

/// Open interval of outer radii for which
/// `lambda_1(B_inner) < lambda_1(A_{inner,R}) < lambda_2(B_inner)`.
pub fn choose_r_window(inner: f64) -> Result<(f64, f64)> {
    if !(inner > 0.0) {
        return Err(invalid("inner radius must be positive"));
    }
    let (x, _, _) = first_tan_root();
    Ok((inner + PI * inner / x, 2.0 * inner))
}

pub fn in_r_window(inner: f64, outer: f64) -> bool {
    match choose_r_window(inner) {
        Ok((lo, hi)) => outer > lo && outer < hi,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ball_values() {
        let g = ball_eigenvalue(1.0, BallMode::Ground).unwrap();
        assert!(rel(g.value, 9.869604401) < 1e-9);
        let g2 = ball_eigenvalue(2.0, BallMode::Ground).unwrap();
        assert!(rel(g2.value, 2.467401100) < 1e-9);
        let e = ball_eigenvalue(1.0, BallMode::FirstExcited).unwrap();
        assert!(rel(e.value, 20.190728557) < 1e-9);
        assert!(e.bracket_width <= 1e-10 * e.value);
        let (x, _, _) = first_tan_root();
        assert!((x - 4.493409458).abs() < 1e-9);
    }

    #[test]
    fn shell_values() {
        assert!(rel(shell_ground_eigenvalue(1.0, 1.8).unwrap().value, 15.421256876) < 1e-9);
        assert!(rel(shell_ground_eigenvalue(1.0, 2.0).unwrap().value, 9.869604401) < 1e-9);
        let a = shell_ground_eigenvalue(2.0, 3.6).unwrap().value;
        let b = shell_ground_eigenvalue(1.0, 1.8).unwrap().value;
        assert!(rel(a, 0.25 * b) < 1e-14);
        assert!(shell_ground_eigenvalue(1.0, 1.0).is_err());
    }

    #[test]
    fn scaling_law() {
        for s in [2.0, 0.5] {
            for mode in [BallMode::Ground, BallMode::FirstExcited] {
                let a = ball_eigenvalue(1.0, mode).unwrap().value;
                let b = ball_eigenvalue(s, mode).unwrap().value;
                assert!(rel(b, a / (s * s)) < 1e-12);
            }
            let a = shell_ground_eigenvalue(1.0, 1.8).unwrap().value;
            let b = shell_ground_eigenvalue(s, 1.8 * s).unwrap().value;
            assert!(rel(b, a / (s * s)) < 1e-12);
        }
    }

    #[test]
    fn window_ordering() {
        let (lo, hi) = choose_r_window(1.0).unwrap();
        assert!((lo - 1.6991557).abs() < 1e-6);
        assert_eq!(hi, 2.0);
        let b1 = ball_eigenvalue(1.0, BallMode::Ground).unwrap().value;
        let b2 = ball_eigenvalue(1.0, BallMode::FirstExcited).unwrap().value;
        assert!(rel(shell_ground_eigenvalue(1.0, lo).unwrap().value, b2) < 1e-9);
        assert!(rel(shell_ground_eigenvalue(1.0, hi).unwrap().value, b1) < 1e-9);
        let a = shell_ground_eigenvalue(1.0, 1.8).unwrap().value;
        assert!(b1 < a && a < b2);
        assert!(in_r_window(1.0, 1.8));
        assert!(!in_r_window(1.0, 2.1));
    }
}
