//! Curvature of each family at a few points: Einstein residual, curvature norms and Weyl spectra.

use einstein_lab::curvature::{closed_form_riem_norm_sq, curvature_at, einstein_residual_of};
use einstein_lab::{metric_at, FamilyParams, Result};

fn main() -> Result<()> {
    let cases = [
        (FamilyParams::cmetric(16.0, 8.0), (-0.5, -0.2)),
        (FamilyParams::pd(1, 0.0, 1.0, 0.0, 1.0), (-0.6, -0.1)),
        (FamilyParams::naked(-0.5, 0.0, 0.0, 3.0), (-0.2, 0.4)),
        (FamilyParams::carter(0.7, 0.4, -0.3, -0.5), (0.1, 1.5)),
    ];
    for (params, pt) in cases {
        let c = curvature_at(&metric_at(&params, pt)?)?;
        println!("{} at {pt:?}", params.name());
        println!("  |Ric + 3g|      = {:.3e}", einstein_residual_of(&c, -3.0));
        println!("  |Rm|^2          = {:.12}", c.riem_norm_sq);
        if let Some(cf) = closed_form_riem_norm_sq(&params, pt)? {
            println!("  closed form     = {cf:.12}");
        }
        println!("  |W|^2           = {:.12}", c.weyl_norm_sq);
        println!("  W+ eigenvalues  = {:?}", c.weyl_sd_eigs);
        println!("  W- eigenvalues  = {:?}", c.weyl_asd_eigs);
    }
    Ok(())
}
