use serde::{Deserialize, Serialize};

use super::{inward_direction, BulkEndKind, BulkEndReport};
use crate::domain::{axis_data, generic_others, polynomial, Side};
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, linear_fit};
use crate::polyfam::{Chart, FamilyParams};
use crate::rootlab::roots;

/// Offsets from the double root used in the length and circumference fits, relative to the
/// distance to the nearest obstruction when that is below one.
pub const CUSP_DELTAS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Relative tolerance of the logarithmic length slope.
pub const SLOPE_TOL: f64 = 0.05;

/// Fit of the proper length from `root + delta` against `-log(delta)` at a fixed other coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthFit {
    pub other: f64,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub rel_error: f64,
}

fn double_root_side(params: &FamilyParams, r: f64) -> Result<Side> {
    let tol = 1e-6 * (1.0 + r.abs());
    for side in [Side::P, Side::Q] {
        if roots(&polynomial(params, side)?)?.multiplicity_at(r, tol) == 2 {
            return Ok(side);
        }
    }
    Err(Error::NotDoubleRoot(r))
}

/// Distance from `r` to the nearest obstruction in direction `dir` at fixed `other`.
fn reach(params: &FamilyParams, side: Side, r: f64, other: f64, dir: f64) -> Result<f64> {
    let mut barriers: Vec<f64> = roots(&polynomial(params, side)?)?.real_roots_sorted;
    match params.chart() {
        Chart::Toric => {
            barriers.push(other);
            let a = params.rotation();
            if a * other != 0.0 {
                barriers.extend([1.0 / (a * other), -1.0 / (a * other)]);
            }
        }
        Chart::Carter => barriers.extend([other, -other]),
    }
    let tol = 1e-9 * (1.0 + r.abs());
    Ok(barriers
        .into_iter()
        .map(|b| (b - r) * dir)
        .filter(|&d| d > tol)
        .fold(1.0, f64::min))
}

fn proper_length(params: &FamilyParams, side: Side, r: f64, other: f64, dir: f64, delta: f64, end: f64) -> f64 {
    let f = |t: f64| {
        let s = t.exp();
        axis_data(params, side, r, 2, dir * s, other).map_or(f64::NAN, |(g, _)| g.sqrt() * s)
    };
    adaptive_simpson(&f, delta.ln(), end.ln(), 1e-11, 64)
}

/// Cusp model at a double root of `P` or `Q`.
///
/// Reports the coefficient `F''/(2(1 + a^2 r^4)^2)` of the model (`F''/2` in the Carter chart), fits
/// the logarithmic growth of the proper length towards the root at three generic values of the
/// other coordinate, and fits the power law of the collapsing circle.
pub fn cusp_model(params: &FamilyParams, double_root: f64) -> Result<BulkEndReport> {
    let r = double_root;
    let side = double_root_side(params, r)?;
    let f = polynomial(params, side)?;
    let f2 = f.eval_derivative(2, r);
    if f2 == 0.0 {
        return Err(Error::NotDoubleRoot(r));
    }
    let coefficient = match params.chart() {
        Chart::Toric => {
            let a = params.rotation();
            f2 / (2.0 * (1.0 + a * a * r.powi(4)).powi(2))
        }
        Chart::Carter => f2 / 2.0,
    };
    let mut fits = Vec::new();
    for other in generic_others(params, side, r)? {
        let dir = inward_direction(params, side, r, other)?;
        let scale = reach(params, side, r, other, dir)?;
        let end = 0.5 * scale;
        let deltas = CUSP_DELTAS.map(|d| d * scale);
        let xs = deltas.map(|d| -d.ln());
        let ls = deltas.map(|d| proper_length(params, side, r, other, dir, d, end));
        let (fitted_slope, _) = linear_fit(&xs, &ls);
        let predicted_slope = match params.chart() {
            Chart::Toric => {
                let a = params.rotation();
                let d = 1.0 - a * a * r * r * other * other;
                (2.0 * d / f2.abs()).sqrt() / (r - other).abs()
            }
            Chart::Carter => (2.0 * (r * r - other * other).abs() / f2.abs()).sqrt(),
        };
        let rel_error = (fitted_slope - predicted_slope).abs() / predicted_slope;
        fits.push(LengthFit { other, fitted_slope, predicted_slope, rel_error });
    }
    let other = fits[1].other;
    let dir = inward_direction(params, side, r, other)?;
    let deltas = CUSP_DELTAS.map(|d| d * reach(params, side, r, other, dir).unwrap_or(1.0));
    let mut logs = Vec::new();
    for &d in &deltas {
        logs.push(axis_data(params, side, r, 2, dir * d, other)?.1.sqrt().ln());
    }
    let lds = deltas.map(f64::ln);
    let (exponent, _) = linear_fit(&lds, &logs);
    Ok(BulkEndReport {
        kind: BulkEndKind::Cusp,
        location: r,
        side,
        angle: None,
        coefficient: Some(coefficient),
        model_parameters: vec![f2, coefficient],
        fits,
        circumference_exponent: Some(exponent),
        note: String::new(),
    })
}
