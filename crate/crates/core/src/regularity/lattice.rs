use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest denominator accepted when recognizing a rational twist.
pub const MAX_TWIST_DENOMINATOR: i64 = 1000;
/// Relative tolerance of the rational recognition.
pub const TWIST_TOL: f64 = 1e-9;

/// Period lattice of the two Killing angles, generators in chart order
/// (`(psi, phi)` or `(tau, sigma)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodLattice {
    pub generators: [[f64; 2]; 2],
}

impl PeriodLattice {
    pub fn new(g1: [f64; 2], g2: [f64; 2]) -> Result<Self> {
        let l = PeriodLattice { generators: [g1, g2] };
        let scale = (g1[0].hypot(g1[1])) * (g2[0].hypot(g2[1]));
        if !(l.det().abs() > 1e-12 * scale) || !l.det().is_finite() {
            return Err(Error::InvalidParams("period lattice generators are dependent".into()));
        }
        Ok(l)
    }

    /// Lattice generated by `(delta_phi along phi, delta_psi along psi)` in the toric chart.
    pub fn rectangular(delta_phi: f64, delta_psi: f64) -> Result<Self> {
        if !(delta_phi > 0.0 && delta_psi > 0.0) {
            return Err(Error::InvalidParams(format!("periods must be positive, got ({delta_phi}, {delta_psi})")));
        }
        Self::new([delta_psi, 0.0], [0.0, delta_phi])
    }

    fn det(&self) -> f64 {
        let [a, b] = self.generators;
        a[0] * b[1] - a[1] * b[0]
    }

    /// Area of a fundamental cell.
    pub fn area(&self) -> f64 {
        self.det().abs()
    }

    /// Coordinates of `k` in the generator basis.
    pub fn coordinates(&self, k: [f64; 2]) -> [f64; 2] {
        let [a, b] = self.generators;
        let d = self.det();
        [(k[0] * b[1] - k[1] * b[0]) / d, (a[0] * k[1] - a[1] * k[0]) / d]
    }

    /// Smallest `T > 0` with `T k` in the lattice, or `None` for an irrational twist.
    pub fn closing_time(&self, k: [f64; 2]) -> Option<f64> {
        let w = self.coordinates(k);
        let n = w[0].hypot(w[1]);
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        if w[1].abs() <= 1e-12 * n {
            return Some(1.0 / w[0].abs());
        }
        if w[0].abs() <= 1e-12 * n {
            return Some(1.0 / w[1].abs());
        }
        let (big, small) = if w[0].abs() >= w[1].abs() { (w[0], w[1]) } else { (w[1], w[0]) };
        let rho = small / big;
        let (_, q) = rational_approx(rho, MAX_TWIST_DENOMINATOR, TWIST_TOL)?;
        Some(q as f64 / big.abs())
    }
}

/// Best rational `p/q` with `q <= max_den` and `|x - p/q| <= tol max(1, |x|)`, by continued fractions.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    let target = tol * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= target {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangular_closing_times() {
        let l = PeriodLattice::rectangular(2.0, 3.0).unwrap();
        assert_eq!(l.closing_time([0.0, 1.0]), Some(2.0));
        assert_eq!(l.closing_time([1.0, 0.0]), Some(3.0));
        let t = l.closing_time([1.0, 1.0]).unwrap();
        assert!((t - 6.0).abs() < 1e-12);
        assert!(l.closing_time([1.0, 2f64.sqrt()]).is_none());
        assert!((l.area() - 6.0).abs() < 1e-15);
    }

    #[test]
    fn rational_recognition() {
        assert_eq!(rational_approx(0.75, 1000, 1e-12), Some((3, 4)));
        assert_eq!(rational_approx(-1.5, 1000, 1e-12), Some((-3, 2)));
        assert!(rational_approx(std::f64::consts::PI, 1000, 1e-12).is_none());
    }

    #[test]
    fn invalid_lattices() {
        assert!(PeriodLattice::rectangular(0.0, 1.0).is_err());
        assert!(PeriodLattice::new([1.0, 1.0], [2.0, 2.0]).is_err());
    }
}
