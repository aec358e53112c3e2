use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::PeriodLattice;
use crate::domain::{axis_data, killing_at_root, other_range, point, polynomial, surface_gravity, Side};
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, bisect};
use crate::polyfam::{metric_at, Chart, FamilyParams};
use crate::rootlab::roots;

/// Relative tolerance on `angle = 2 pi` for a smooth axis.
pub const SMOOTH_TOL: f64 = 1e-9;

/// Cone-edge data along the axis where a simple root's circle collapses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeData {
    pub root: f64,
    pub which: Side,
    /// Coefficient of the rotation angle `theta` (`phi + a r^2 psi` or `psi + a r^2 phi`):
    /// the cone angle is this times the period of `theta`.
    pub angle_coefficient: f64,
    /// Period of `theta` making the axis smooth.
    pub required_period: f64,
    /// Period of `theta` induced by the lattice, if the collapsing circle closes.
    pub actual_period: Option<f64>,
    /// Collapsing Killing field in chart order.
    pub killing: [f64; 2],
    /// Closing time of the collapsing Killing field on the lattice.
    pub killing_period: Option<f64>,
    pub angle: Option<f64>,
    pub smooth: bool,
    pub irrational_twist: bool,
}

fn theta_stretch(params: &FamilyParams, r: f64) -> f64 {
    match params.chart() {
        Chart::Toric => {
            let a = params.rotation();
            1.0 + a * a * r.powi(4)
        }
        Chart::Carter => 1.0,
    }
}

fn root_multiplicity(params: &FamilyParams, side: Side, r: f64) -> Result<usize> {
    let f = polynomial(params, side)?;
    let rs = roots(&f)?;
    Ok(rs.multiplicity_at(r, 1e-6 * (1.0 + r.abs())))
}

/// Whether `1 - a^2 r^2 t^2` vanishes for `t` in the closed interval `[lo, hi]`.
fn rotation_factor_vanishes(a: f64, r: f64, lo: f64, hi: f64) -> bool {
    if a == 0.0 || r == 0.0 {
        return false;
    }
    let target = 1.0 / (a * r).abs();
    let (min_abs, max_abs) = if lo <= 0.0 && hi >= 0.0 {
        (0.0, lo.abs().max(hi.abs()))
    } else {
        (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()))
    };
    min_abs <= target + 1e-12 && target <= max_abs + 1e-12
}

/// Fails with `DegenerateLocus` when `1 - a^2 x^2 y^2` vanishes somewhere along the axis.
pub fn axis_meets_degenerate_locus(params: &FamilyParams, root: f64, which: Side) -> Result<()> {
    if params.chart() == Chart::Toric {
        let (lo, hi) = other_range(params, which, root)?;
        if rotation_factor_vanishes(params.rotation(), root, lo, hi) {
            return Err(Error::DegenerateLocus(format!(
                "1 - a^2 x^2 y^2 vanishes along the axis at {root} for the other coordinate in [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Cone angle along the axis of the simple root `root` of the quartic `which`.
pub fn cone_angle(params: &FamilyParams, root: f64, which: Side, lattice: &PeriodLattice) -> Result<ConeData> {
    if root_multiplicity(params, which, root)? != 1 {
        return Err(Error::NotSimpleRoot(root));
    }
    axis_meets_degenerate_locus(params, root, which)?;
    let kappa = surface_gravity(params, which, root)?;
    let stretch = theta_stretch(params, root);
    let angle_coefficient = kappa / stretch;
    let killing = killing_at_root(params, which, root);
    let killing_period = lattice.closing_time(killing);
    let angle = killing_period.map(|t| kappa * t);
    let smooth = angle.is_some_and(|a| (a - 2.0 * PI).abs() <= SMOOTH_TOL * 2.0 * PI);
    Ok(ConeData {
        root,
        which,
        angle_coefficient,
        required_period: 2.0 * PI / angle_coefficient,
        actual_period: killing_period.map(|t| t * stretch),
        killing,
        killing_period,
        angle,
        smooth,
        irrational_twist: killing_period.is_none(),
    })
}

/// Lattice generated by the regular periods of the two collapsing fields at `x1` and `y2`.
pub fn auto_periods(params: &FamilyParams, interval: (f64, f64)) -> Result<PeriodLattice> {
    let (x1, y2) = interval;
    let k1 = killing_at_root(params, Side::P, x1);
    let k2 = killing_at_root(params, Side::Q, y2);
    let t1 = 2.0 * PI / surface_gravity(params, Side::P, x1)?;
    let t2 = 2.0 * PI / surface_gravity(params, Side::Q, y2)?;
    if !(t1.is_finite() && t2.is_finite()) {
        return Err(Error::NotSimpleRoot(if t1.is_finite() { y2 } else { x1 }));
    }
    PeriodLattice::new(k1.map(|c| c * t1), k2.map(|c| c * t2))
}

/// Whether both axes of the rectangle `x1 <= x < y <= y2` are smooth for the lattice.
pub fn smoothness_check(params: &FamilyParams, interval: (f64, f64), lattice: &PeriodLattice) -> Result<bool> {
    if params.chart() != Chart::Toric {
        return Err(Error::UnsupportedFamily(format!("smoothness check needs a toric family, got {}", params.name())));
    }
    let (x1, y2) = interval;
    let violated = |s: &str| Err(Error::PreconditionViolated(s.to_string()));
    if !(x1 < y2) {
        return violated("x1 < y2");
    }
    let (p, q) = params.polynomials()?;
    let rp = roots(&p)?;
    let rq = roots(&q)?;
    let tol = 1e-9 * (1.0 + x1.abs().max(y2.abs()));
    let inside = |t: f64| t > x1 + tol && t < y2 - tol;
    let mid = 0.5 * (x1 + y2);
    if rp.real_roots_sorted.iter().any(|&t| inside(t)) || !(p.eval(mid) > 0.0) {
        return violated("P > 0 on (x1, y2)");
    }
    if rq.real_roots_sorted.iter().any(|&t| inside(t)) || !(q.eval(mid) < 0.0) {
        return violated("Q < 0 on (x1, y2)");
    }
    if rp.multiplicity_at(x1, 1e-6 * (1.0 + x1.abs())) != 1 {
        return violated("x1 is a simple root of P");
    }
    if rq.multiplicity_at(y2, 1e-6 * (1.0 + y2.abs())) != 1 {
        return violated("y2 is a simple root of Q");
    }
    if rotation_factor_vanishes(params.rotation(), x1.abs().max(y2.abs()), x1, y2)
        || rotation_factor_vanishes(params.rotation(), x1.abs().min(y2.abs()), x1, y2)
    {
        return violated("1 - a^2 x^2 y^2 != 0 on [x1, y2]^2");
    }
    let a = cone_angle(params, x1, Side::P, lattice)?;
    let b = cone_angle(params, y2, Side::Q, lattice)?;
    Ok(a.smooth && b.smooth)
}

/// Direction (`+1` or `-1`) in which the admissible domain lies from `root` at fixed `other`.
pub fn inward_direction(params: &FamilyParams, side: Side, root: f64, other: f64) -> Result<f64> {
    let gap = match params.chart() {
        Chart::Toric => (other - root).abs(),
        Chart::Carter => (other.abs() - root.abs()).abs(),
    };
    let h = (1e-3 * (1.0 + root.abs())).min(0.25 * gap);
    for s in [1.0, -1.0] {
        if metric_at(params, point(side, root + s * h, other)).is_ok() {
            return Ok(s);
        }
    }
    Err(Error::OutsideDomain(format!("no admissible side of the root {root} at {other}")))
}

/// Proper distance from the axis at `root` to the coordinate value `root + dir u^2`.
fn axis_distance(params: &FamilyParams, side: Side, root: f64, other: f64, dir: f64, u: f64) -> f64 {
    let f = |t: f64| {
        let t = t.max(1e-7);
        axis_data(params, side, root, 1, dir * t * t, other).map_or(f64::NAN, |(g, _)| g.sqrt() * 2.0 * t)
    };
    adaptive_simpson(&f, 0.0, u, 1e-11 * u, 16)
}

/// Ratio of the circumference of the collapsing circle at proper distance `r` from the axis
/// to `2 pi r`, when the collapsing Killing field closes after `killing_period`.
///
/// Tends to `angle / (2 pi)` as `r -> 0`.
pub fn circle_ratio(params: &FamilyParams, side: Side, root: f64, other: f64, killing_period: f64, r: f64) -> Result<f64> {
    let dir = inward_direction(params, side, root, other)?;
    let (lo, hi) = match params.chart() {
        Chart::Toric | Chart::Carter => other_range(params, side, root)?,
    };
    let span = if other > lo && other < hi { (other - root).abs().min(hi - lo) } else { hi - lo };
    let umax = (0.5 * span).sqrt();
    let u = bisect(&|u: f64| axis_distance(params, side, root, other, dir, u) - r, 0.0, umax, 1e-15)
        .ok_or_else(|| Error::PreconditionViolated(format!("distance {r} not reached within the admissible range")))?;
    let (_, norm) = axis_data(params, side, root, 1, dir * u * u, other)?;
    Ok(killing_period * norm.sqrt() / (2.0 * PI * r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cmetric_coefficients() {
        let (mu, nu) = (1.0, 0.5);
        let f = FamilyParams::cmetric(mu, nu);
        let l = PeriodLattice::rectangular(4.0 * PI / (1.0 - nu + mu), 4.0 * PI / (1.0 + nu)).unwrap();
        let a = cone_angle(&f, -1.0, Side::P, &l).unwrap();
        assert!((a.angle_coefficient - (1.0 - nu + mu) / 2.0).abs() < 1e-14);
        assert!(a.smooth);
        let b = cone_angle(&f, 0.0, Side::Q, &l).unwrap();
        assert!((b.angle_coefficient - (1.0 + nu) / 2.0).abs() < 1e-14);
        assert!(b.smooth);
        assert!(smoothness_check(&f, (-1.0, 0.0), &l).unwrap());
        let doubled = PeriodLattice::rectangular(8.0 * PI / (1.0 - nu + mu), 4.0 * PI / (1.0 + nu)).unwrap();
        assert!(!smoothness_check(&f, (-1.0, 0.0), &doubled).unwrap());
        let c = cone_angle(&f, -1.0, Side::P, &doubled).unwrap();
        assert!((c.angle.unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_hopf_periods() {
        let f = FamilyParams::cmetric(0.0, 0.0);
        let l = PeriodLattice::rectangular(4.0 * PI, 4.0 * PI).unwrap();
        assert!(cone_angle(&f, -1.0, Side::P, &l).unwrap().smooth);
        assert!(cone_angle(&f, 0.0, Side::Q, &l).unwrap().smooth);
    }

    #[test]
    fn preconditions() {
        let n = FamilyParams::naked(-1.0, 0.0, 0.0, 1.0);
        let l = PeriodLattice::rectangular(1.0, 1.0).unwrap();
        assert!(matches!(smoothness_check(&n, (-1.0, 1.0), &l), Err(Error::PreconditionViolated(_))));
        let c = FamilyParams::cmetric(16.0, 8.0);
        assert!(matches!(cone_angle(&c, -0.25, Side::P, &l), Err(Error::NotSimpleRoot(_))));
        assert!(matches!(cone_angle(&n, -1.0, Side::P, &l), Err(Error::DegenerateLocus(_))));
    }

    #[test]
    fn auto_periods_are_smooth() {
        let f = FamilyParams::cmetric(1.0, 0.5);
        let l = auto_periods(&f, (-1.0, 0.0)).unwrap();
        assert!(smoothness_check(&f, (-1.0, 0.0), &l).unwrap());
    }

    #[test]
    fn small_circles_see_the_cone_angle() {
        let f = FamilyParams::cmetric(1.0, 0.5);
        let beta = 0.5;
        let t = beta * 2.0 * PI / 0.75;
        let ratio = circle_ratio(&f, Side::P, -1.0, -0.5, t, 1e-4).unwrap();
        assert!((ratio - beta).abs() < 1e-3 * beta);
    }
}
