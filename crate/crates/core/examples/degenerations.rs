//! Paths in the naked family degenerating to a naked singularity at infinity.

use einstein_lab::conformal::{degeneration_path, DegenerationPath};
use einstein_lab::Result;

fn main() -> Result<()> {
    let (alpha1, alpha4) = (-0.5, 3.0);
    let paths = [
        (DegenerationPath::SmoothToNaked { alpha1, alpha4 }, vec![0.1, 0.01, 0.001, 0.0]),
        (DegenerationPath::ConeToNaked { alpha1, alpha4 }, vec![-0.1, -0.01, -0.001, -1e-4]),
        (DegenerationPath::CuspToNaked { alpha1, alpha4 }, vec![0.1, 0.01, 0.001]),
    ];
    for (path, values) in paths {
        println!("{path:?}");
        for s in degeneration_path(&path, &values)? {
            let bulk = s.bulk.map(|b| format!(", bulk {:?}", b.kind)).unwrap_or_default();
            println!("  {:>8}: end {:.6} {:?} angle {:?}{bulk}", s.value, s.right_end, s.boundary.kind, s.boundary.angle);
        }
    }
    Ok(())
}
