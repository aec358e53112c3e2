//! L2 norm of the Weyl tensor by adaptive cubature.

use std::f64::consts::PI;

use einstein_lab::volume::{weyl_l2, weyl_l2_with, L2Domain, QuadratureOptions};
use einstein_lab::{FamilyParams, Result};

fn main() -> Result<()> {
    let t = 4.0 * PI / 9.0;
    let tri = L2Domain::Triangle { x1: -1.0, y2: 0.0 };
    for tol in [1e-4, 1e-5] {
        let r = weyl_l2(&FamilyParams::cmetric(16.0, 8.0), tri, (t, t), tol)?;
        println!("C-metric (16, 8), tol {tol:e}: {:.10} +- {:.1e} over {} cells", r.value, r.error_estimate, r.cells);
    }
    println!("hyperbolic space: {}", weyl_l2(&FamilyParams::cmetric(0.0, 0.0), tri, (t, t), 1e-8)?.value);
    let opts = QuadratureOptions { abs_tol: 0.0, rel_tol: 1e-6, ..Default::default() };
    for a2 in [0.1, 0.01, 0.001] {
        let f = FamilyParams::naked(-0.5, a2, 0.0, 3.0);
        let r = weyl_l2_with(&f, L2Domain::Triangle { x1: -0.5, y2: 1.0 - a2 }, (1.0, 1.0), &opts)?;
        println!("naked(-0.5, {a2}, 0, 3), unit periods: {:.6}", r.value);
    }
    Ok(())
}
