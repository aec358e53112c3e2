//! The conformal boundary metric and the classification of its ends.

use einstein_lab::conformal::{boundary_curvature_residual, boundary_interval, classify_boundary_end, CirclePeriod};
use einstein_lab::{FamilyParams, Result};

fn main() -> Result<()> {
    let (k, res) = boundary_curvature_residual(&FamilyParams::cmetric(0.0, 0.0), -0.5)?;
    println!("hyperbolic space: boundary sectional curvature {k:.12}, residual {res:.1e}");
    for params in [
        FamilyParams::naked(-1.0, 0.0, 0.0, 1.0),
        FamilyParams::naked(-0.5, 0.0, 0.0, 3.0),
        FamilyParams::naked(-0.5, -0.1, -0.01, 3.0),
        FamilyParams::cmetric(16.0, 8.0),
    ] {
        let iv = boundary_interval(&params)?;
        println!("{params:?}: interval [{:.4}, {:.4}], {} region(s)", iv.start, iv.end, iv.regions);
        let mut ends = vec![iv.start];
        ends.extend(&iv.cusps);
        ends.push(iv.end);
        for e in ends {
            let r = classify_boundary_end(&params, e, CirclePeriod::Auto)?;
            println!(
                "  {e:+.4}: {:?}, exponent {:.4} (model {}), angle {:?}",
                r.kind, r.fitted_exponent, r.model_exponent, r.angle
            );
        }
    }
    Ok(())
}
