//! Cone angles along the axes, smooth periods, and the small-circle check of a cone angle.

use std::f64::consts::PI;

use einstein_lab::domain::Side;
use einstein_lab::regularity::{auto_periods, circle_ratio, cone_angle, smoothness_check, PeriodLattice};
use einstein_lab::{FamilyParams, Result};

fn main() -> Result<()> {
    let (mu, nu) = (1.0, 0.5);
    let params = FamilyParams::cmetric(mu, nu);
    let rect = (-1.0, 0.0);
    let smooth = PeriodLattice::rectangular(4.0 * PI / (1.0 - nu + mu), 4.0 * PI / (1.0 + nu))?;
    println!("smooth periods pass: {}", smoothness_check(&params, rect, &smooth)?);
    println!("auto periods equal them: {:?}", auto_periods(&params, rect)?);

    let beta = 0.5;
    let c = cone_angle(&params, -1.0, Side::P, &smooth)?;
    let period = beta * c.required_period;
    let lattice = PeriodLattice::rectangular(period, 4.0 * PI / (1.0 + nu))?;
    let cone = cone_angle(&params, -1.0, Side::P, &lattice)?;
    println!("prescribed angle 2 pi * {beta}: computed {:.6}", cone.angle.unwrap_or(f64::NAN) / (2.0 * PI));
    let t = cone.killing_period.unwrap_or(f64::NAN);
    for r in [1e-2, 1e-3, 1e-4] {
        println!("  circumference / (2 pi r) at r = {r:e}: {:.6}", circle_ratio(&params, Side::P, -1.0, -0.5, t, r)?);
    }
    Ok(())
}
