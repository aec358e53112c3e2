//! Bulk regularity: cone angles at simple roots, cusps at double roots, and the thin necks
//! that precede cusp formation.

mod cone;
mod cusp;
mod lattice;
mod neck;

use serde::{Deserialize, Serialize};

pub use cone::{auto_periods, axis_meets_degenerate_locus, circle_ratio, cone_angle, inward_direction, smoothness_check, ConeData, SMOOTH_TOL};
pub use cusp::{cusp_model, LengthFit, CUSP_DELTAS, SLOPE_TOL};
pub use lattice::{rational_approx, PeriodLattice, MAX_TWIST_DENOMINATOR, TWIST_TOL};
pub use neck::{circumference_at, neck_profile, NeckPath, NeckSample};

use crate::domain::{polynomial, Side};
use crate::error::{Error, Result};
use crate::polyfam::FamilyParams;
use crate::rootlab::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BulkEndKind {
    Cone,
    Cusp,
    SmoothAxis,
    BoundaryEnd,
}

/// Classification of one end of the admissible rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BulkEndReport {
    pub kind: BulkEndKind,
    pub location: f64,
    pub side: Side,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub model_parameters: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub fits: Vec<LengthFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circumference_exponent: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

impl BulkEndReport {
    fn bare(kind: BulkEndKind, location: f64, side: Side) -> Self {
        BulkEndReport {
            kind,
            location,
            side,
            angle: None,
            coefficient: None,
            model_parameters: Vec::new(),
            fits: Vec::new(),
            circumference_exponent: None,
            note: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub ends: Vec<BulkEndReport>,
    pub smooth: bool,
}

/// Classifies the end of the rectangle at a real root of the quartic `side`.
///
/// Simple roots give a cone or a smooth axis (needs `lattice`), double roots a cusp; higher
/// multiplicities and axes meeting `1 - a^2 x^2 y^2 = 0` are reported as boundary ends.
pub fn classify_bulk_end(
    params: &FamilyParams,
    root: f64,
    side: Side,
    lattice: Option<&PeriodLattice>,
) -> Result<BulkEndReport> {
    let f = polynomial(params, side)?;
    let m = roots(&f)?.multiplicity_at(root, 1e-6 * (1.0 + root.abs()));
    if m == 0 {
        return Err(Error::PreconditionViolated(format!("{root} is not a root of {side:?}")));
    }
    match m {
        1 => {
            let Some(l) = lattice else {
                if let Err(Error::DegenerateLocus(msg)) = axis_meets_degenerate_locus(params, root, side) {
                    let mut r = BulkEndReport::bare(BulkEndKind::BoundaryEnd, root, side);
                    r.note = msg;
                    return Ok(r);
                }
                let kappa = crate::domain::surface_gravity(params, side, root)?;
                let mut r = BulkEndReport::bare(BulkEndKind::Cone, root, side);
                r.coefficient = Some(kappa);
                r.note = "no period lattice given".into();
                return Ok(r);
            };
            match cone_angle(params, root, side, l) {
                Ok(c) => {
                    let kind = if c.smooth { BulkEndKind::SmoothAxis } else { BulkEndKind::Cone };
                    let mut r = BulkEndReport::bare(kind, root, side);
                    r.angle = c.angle;
                    r.coefficient = Some(c.angle_coefficient);
                    if c.irrational_twist {
                        r.note = "irrational twist".into();
                    }
                    Ok(r)
                }
                Err(Error::DegenerateLocus(msg)) => {
                    let mut r = BulkEndReport::bare(BulkEndKind::BoundaryEnd, root, side);
                    r.note = msg;
                    Ok(r)
                }
                Err(e) => Err(e),
            }
        }
        2 => cusp_model(params, root),
        _ => {
            let mut r = BulkEndReport::bare(BulkEndKind::BoundaryEnd, root, side);
            r.note = format!("root of multiplicity {m}");
            Ok(r)
        }
    }
}

/// Classifies both ends `x1` (root of `P`) and `y2` (root of `Q`) of a rectangle.
pub fn regularity_report(params: &FamilyParams, interval: (f64, f64), lattice: Option<&PeriodLattice>) -> Result<RegularityReport> {
    let ends = vec![
        classify_bulk_end(params, interval.0, Side::P, lattice)?,
        classify_bulk_end(params, interval.1, Side::Q, lattice)?,
    ];
    let smooth = ends.iter().all(|e| e.kind == BulkEndKind::SmoothAxis);
    Ok(RegularityReport { ends, smooth })
}
