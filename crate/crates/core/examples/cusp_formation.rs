//! A thin neck pinching as a pair of roots collides, and the cusp left behind.

use einstein_lab::regularity::{cusp_model, neck_profile, NeckPath};
use einstein_lab::{FamilyParams, Result};

fn main() -> Result<()> {
    let path = NeckPath::CmetricUpper { mu: 12.0 };
    for n in neck_profile(&path, &[0.02, 0.01, 0.005, 0.0025])? {
        println!("eps {:<7} neck circumference {:.6} at x = {:.6}", n.eps, n.min_circumference, n.location);
    }
    let params = FamilyParams::cmetric(16.0, 8.0);
    for root in [-0.25, -0.75] {
        let r = cusp_model(&params, root)?;
        println!("cusp at {root} ({:?}): coefficient {:?}", r.side, r.coefficient);
        for f in &r.fits {
            println!("  length slope {:.4} vs predicted {:.4}", f.fitted_slope, f.predicted_slope);
        }
        println!("  circumference exponent {:?}", r.circumference_exponent);
    }
    Ok(())
}
