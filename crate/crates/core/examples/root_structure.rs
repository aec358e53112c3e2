//! Root structure of the quartics and the admissible C-metric parameter region.

use einstein_lab::rootlab::{boundary_double_roots, cmetric_region, region_grid, roots};
use einstein_lab::{FamilyParams, Result};

fn main() -> Result<()> {
    for params in [FamilyParams::cmetric(16.0, 8.0), FamilyParams::naked(-1.0, 0.0, 0.0, 1.0)] {
        let (p, q) = params.polynomials()?;
        println!("{}: P = {p}", params.name());
        println!("  roots {:?}", roots(&p)?.real_roots());
        println!("{}: Q = {q}", params.name());
        println!("  roots {:?}", roots(&q)?.real_roots());
    }
    println!("double roots on the boundary curves at mu = 16: {:?}", boundary_double_roots(16.0));
    for (mu, nu) in [(1.0, 0.5), (16.0, 8.0), (10.0, 9.0), (0.0, 0.0)] {
        let v = cmetric_region(mu, nu)?;
        println!("({mu}, {nu}): inside {}, on {:?}", v.inside, v.boundary_curves_hit);
    }
    let grid = region_grid((0.0, 17.0), (-1.0, 13.0), 60)?;
    let inside = grid.iter().filter(|s| s.verdict.inside).count();
    println!("{inside} of {} grid points are admissible", grid.len());
    Ok(())
}
