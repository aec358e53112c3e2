use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for deciding that a parameter point lies on a boundary curve.
pub const REGION_TOL: f64 = 1e-10;

/// The four curves bounding the admissible `(mu, nu)` region of the C-metric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCurve {
    #[serde(rename = "nu=2sqrt(mu)")]
    TwoSqrtMu,
    #[serde(rename = "nu=mu-2sqrt(mu)")]
    MuMinusTwoSqrtMu,
    #[serde(rename = "nu=2mu")]
    TwoMu,
    #[serde(rename = "nu=-mu")]
    MinusMu,
}

impl BoundaryCurve {
    pub const ALL: [BoundaryCurve; 4] =
        [BoundaryCurve::TwoSqrtMu, BoundaryCurve::MuMinusTwoSqrtMu, BoundaryCurve::TwoMu, BoundaryCurve::MinusMu];

    pub fn nu_at(&self, mu: f64) -> f64 {
        match self {
            BoundaryCurve::TwoSqrtMu => 2.0 * mu.sqrt(),
            BoundaryCurve::MuMinusTwoSqrtMu => mu - 2.0 * mu.sqrt(),
            BoundaryCurve::TwoMu => 2.0 * mu,
            BoundaryCurve::MinusMu => -mu,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BoundaryCurve::TwoSqrtMu => "nu=2sqrt(mu)",
            BoundaryCurve::MuMinusTwoSqrtMu => "nu=mu-2sqrt(mu)",
            BoundaryCurve::TwoMu => "nu=2mu",
            BoundaryCurve::MinusMu => "nu=-mu",
        }
    }

    /// Sign of `nu - curve(mu)` required inside the region.
    fn inside_sign(&self) -> f64 {
        match self {
            BoundaryCurve::TwoSqrtMu | BoundaryCurve::TwoMu => -1.0,
            BoundaryCurve::MuMinusTwoSqrtMu | BoundaryCurve::MinusMu => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub inside: bool,
    pub boundary_curves_hit: Vec<BoundaryCurve>,
    /// Smallest vertical distance `|nu - curve(mu)|` over the four curves.
    pub distance_to_boundary: f64,
    pub nearest_curve: BoundaryCurve,
}

/// Classifies `(mu, nu)` against the four bounding curves.
pub fn cmetric_region(mu: f64, nu: f64) -> Result<RegionVerdict> {
    if !(mu >= 0.0) || !nu.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidParams(format!("region classification needs finite mu >= 0, got ({mu}, {nu})")));
    }
    let mut inside = true;
    let mut hits = Vec::new();
    let mut nearest = (f64::INFINITY, BoundaryCurve::TwoSqrtMu);
    for c in BoundaryCurve::ALL {
        let diff = nu - c.nu_at(mu);
        if diff.abs() <= REGION_TOL {
            hits.push(c);
        }
        if diff * c.inside_sign() <= REGION_TOL {
            inside = false;
        }
        if diff.abs() < nearest.0 {
            nearest = (diff.abs(), c);
        }
    }
    Ok(RegionVerdict { inside, boundary_curves_hit: hits, distance_to_boundary: nearest.0, nearest_curve: nearest.1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub mu: f64,
    pub nu: f64,
    pub verdict: RegionVerdict,
}

/// Classifies a `steps x steps` grid including both ends of each range.
pub fn region_grid(mu_range: (f64, f64), nu_range: (f64, f64), steps: usize) -> Result<Vec<RegionSample>> {
    let at = |r: (f64, f64), i: usize| {
        if steps <= 1 {
            r.0
        } else {
            r.0 + (r.1 - r.0) * i as f64 / (steps - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let (mu, nu) = (at(mu_range, i), at(nu_range, j));
            out.push(RegionSample { mu, nu, verdict: cmetric_region(mu, nu)? });
        }
    }
    Ok(out)
}

/// Double roots of `P` on `nu = 2 sqrt(mu)` and of `Q` on `nu = mu - 2 sqrt(mu)`:
/// `x = -1/sqrt(mu)` and `y = -1 + 1/sqrt(mu)`.
pub fn boundary_double_roots(mu: f64) -> (f64, f64) {
    let s = mu.sqrt();
    (-1.0 / s, -1.0 + 1.0 / s)
}

/// Whether the reflected root `p0 = -(p3 + p4)/2` lies strictly between `p3` and `p4`.
pub fn carter_double_root_constraints(p3: f64, p4: f64) -> Result<bool> {
    if !(p3 < p4) {
        return Err(Error::InvalidParams(format!("need p3 < p4, got ({p3}, {p4})")));
    }
    let p0 = -0.5 * (p3 + p4);
    Ok(p3 < p0 && p0 < p4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_examples() {
        let v = cmetric_region(16.0, 8.0).unwrap();
        assert!(!v.inside);
        assert_eq!(v.boundary_curves_hit, vec![BoundaryCurve::TwoSqrtMu, BoundaryCurve::MuMinusTwoSqrtMu]);
        let v = cmetric_region(0.0, 0.0).unwrap();
        assert!(!v.inside);
        assert_eq!(v.boundary_curves_hit.len(), 4);
        let v = cmetric_region(1.0, 0.5).unwrap();
        assert!(v.inside);
        assert!(v.boundary_curves_hit.is_empty());
        assert!(!cmetric_region(10.0, 9.0).unwrap().inside);
        assert!(cmetric_region(-1.0, 0.0).is_err());
    }

    #[test]
    fn carter_constraints() {
        assert!(carter_double_root_constraints(-1.0, 1.0).unwrap());
        assert!(!carter_double_root_constraints(-1.0, 4.0).unwrap());
        assert!(carter_double_root_constraints(-2.0, 1.0).unwrap());
        assert!(carter_double_root_constraints(1.0, -1.0).is_err());
    }

    #[test]
    fn grid_shape() {
        assert!(region_grid((0.0, 17.0), (-1.0, 13.0), 0).unwrap().is_empty());
        let g = region_grid((0.0, 17.0), (-1.0, 13.0), 5).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!((g[24].mu, g[24].nu), (17.0, 13.0));
    }
}
