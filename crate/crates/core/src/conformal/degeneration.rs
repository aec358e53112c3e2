use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify_boundary_end, BoundaryEndReport, CirclePeriod};
use crate::error::{Error, Result};
use crate::polyfam::FamilyParams;
use crate::regularity::{cusp_model, BulkEndReport};
use crate::rootlab::roots;

/// One-parameter paths in the naked family ending at the naked singularity `alpha2 = alpha3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum DegenerationPath {
    /// `alpha2 = 0`, `alpha3 = value >= 0`: a complex pair near 1 closes onto it.
    SmoothToNaked { alpha1: f64, alpha4: f64 },
    /// `alpha2 = 0`, `alpha3 = value <= 0`: a simple root `1 - sqrt(-alpha3)` approaches 1.
    ConeToNaked { alpha1: f64, alpha4: f64 },
    /// `alpha2 = -sqrt(-alpha3)`, `alpha3 = value <= 0`: 1 stays a simple root of both quartics.
    ConeToNakedAtInfinity { alpha1: f64, alpha4: f64 },
    /// `alpha3 = 0`, `alpha2 = value >= 0`: a double root at `1 - alpha2` approaches 1.
    CuspToNaked { alpha1: f64, alpha4: f64 },
}

impl DegenerationPath {
    pub fn params(&self, value: f64) -> Result<FamilyParams> {
        let sign_err = |need: &str| Err(Error::InvalidParams(format!("path value {value} must be {need}")));
        match *self {
            DegenerationPath::SmoothToNaked { alpha1, alpha4 } => {
                if value < 0.0 {
                    return sign_err(">= 0");
                }
                Ok(FamilyParams::naked(alpha1, 0.0, value, alpha4))
            }
            DegenerationPath::ConeToNaked { alpha1, alpha4 } => {
                if value > 0.0 {
                    return sign_err("<= 0");
                }
                Ok(FamilyParams::naked(alpha1, 0.0, value, alpha4))
            }
            DegenerationPath::ConeToNakedAtInfinity { alpha1, alpha4 } => {
                if value > 0.0 {
                    return sign_err("<= 0");
                }
                Ok(FamilyParams::naked(alpha1, -(-value).sqrt(), value, alpha4))
            }
            DegenerationPath::CuspToNaked { alpha1, alpha4 } => {
                if value < 0.0 {
                    return sign_err(">= 0");
                }
                Ok(FamilyParams::naked(alpha1, value, 0.0, alpha4))
            }
        }
    }

    fn alpha1(&self) -> f64 {
        match *self {
            DegenerationPath::SmoothToNaked { alpha1, .. }
            | DegenerationPath::ConeToNaked { alpha1, .. }
            | DegenerationPath::ConeToNakedAtInfinity { alpha1, .. }
            | DegenerationPath::CuspToNaked { alpha1, .. } => alpha1,
        }
    }

    /// Period convention at the right end of the interval.
    ///
    /// On the cone path the collapsing circle keeps the regular period `4 pi / |P'(alpha1)|` of
    /// the left axis, so the angle measures how far the right end is from smooth.
    pub fn period(&self, params: &FamilyParams) -> Result<CirclePeriod> {
        match self {
            DegenerationPath::ConeToNaked { .. } => {
                let (p, _) = params.polynomials()?;
                Ok(CirclePeriod::Fixed(4.0 * PI / p.eval_derivative(1, self.alpha1()).abs()))
            }
            _ => Ok(CirclePeriod::Auto),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerationSample {
    pub value: f64,
    pub params: FamilyParams,
    pub right_end: f64,
    pub boundary: BoundaryEndReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bulk: Option<BulkEndReport>,
}

/// Smallest real root of `P` or `Q` to the right of `alpha1`.
pub fn right_end(params: &FamilyParams, alpha1: f64) -> Result<f64> {
    let (p, q) = params.polynomials()?;
    let tol = 1e-6 * (1.0 + alpha1.abs());
    let mut rs = roots(&p)?.real_roots_sorted;
    rs.extend(roots(&q)?.real_roots_sorted);
    rs.into_iter()
        .filter(|&t| t > alpha1 + tol)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::OutsideDomain(format!("no root to the right of {alpha1}")))
}

fn sample(path: &DegenerationPath, value: f64) -> Result<DegenerationSample> {
    let params = path.params(value)?;
    let end = right_end(&params, path.alpha1())?;
    let boundary = classify_boundary_end(&params, end, path.period(&params)?)?;
    let bulk = match path {
        DegenerationPath::CuspToNaked { .. } if value > 0.0 => Some(cusp_model(&params, end)?),
        _ => None,
    };
    Ok(DegenerationSample { value, params, right_end: end, boundary, bulk })
}

/// Classifies the right end along the path at each value, in input order.
pub fn degeneration_path(path: &DegenerationPath, values: &[f64]) -> Result<Vec<DegenerationSample>> {
    values.par_iter().map(|&v| sample(path, v)).collect()
}
