use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{killing_at_root, point, Side};
use crate::error::{Error, Result};
use crate::numeric::golden_section;
use crate::polyfam::{metric_at, FamilyParams};
use crate::rootlab::roots;

/// One-parameter path on which a conjugate pair of roots of `P` at `center +- i eps`
/// collides as `eps -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum NeckPath {
    /// C-metric with `nu = 2 sqrt(mu) sqrt(1 - mu eps^2)`, approaching `nu = 2 sqrt(mu)` from inside.
    CmetricUpper { mu: f64 },
    /// Carter family with prescribed roots, pair at `-(p3 + p4)/2 +- i eps`.
    CarterRoots { p3: f64, p4: f64 },
    /// Naked family with `alpha3 = eps^2`, pair at `1 - alpha2 +- i eps`.
    Naked { alpha1: f64, alpha2: f64, alpha4: f64 },
}

impl NeckPath {
    pub fn params(&self, eps: f64) -> Result<FamilyParams> {
        match *self {
            NeckPath::CmetricUpper { mu } => {
                let s = 1.0 - mu * eps * eps;
                if !(mu > 0.0 && s > 0.0) {
                    return Err(Error::InvalidParams(format!("eps = {eps} too large for mu = {mu}")));
                }
                Ok(FamilyParams::cmetric(mu, 2.0 * mu.sqrt() * s.sqrt()))
            }
            NeckPath::CarterRoots { p3, p4 } => Ok(FamilyParams::carter_roots(p3, p4, eps)),
            NeckPath::Naked { alpha1, alpha2, alpha4 } => Ok(FamilyParams::naked(alpha1, alpha2, eps * eps, alpha4)),
        }
    }

    /// Real part of the colliding pair.
    pub fn center(&self, eps: f64) -> Result<f64> {
        match *self {
            NeckPath::CmetricUpper { mu } => {
                let s = 1.0 - mu * eps * eps;
                Ok(-(s.max(0.0).sqrt()) / mu.sqrt())
            }
            NeckPath::CarterRoots { p3, p4 } => Ok(-0.5 * (p3 + p4)),
            NeckPath::Naked { alpha2, .. } => Ok(1.0 - alpha2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckSample {
    pub eps: f64,
    pub center: f64,
    pub other: f64,
    /// Location of the thinnest circle.
    pub location: f64,
    pub min_circumference: f64,
    /// Circumference at `center - eps` and `center + eps`.
    pub offset_circumference: [f64; 2],
}

/// Circumference `2 pi |K|` of the orbit of the Killing field `K` collapsing at `center`.
pub fn circumference_at(params: &FamilyParams, center: f64, x: f64, other: f64) -> Result<f64> {
    let k = killing_at_root(params, Side::P, center);
    let m = metric_at(params, point(Side::P, x, other))?;
    Ok(2.0 * PI * m.killing_norm_sq(k).max(0.0).sqrt())
}

/// Generic value of the other coordinate next to the neck.
fn generic_other(params: &FamilyParams, path: &NeckPath, center: f64) -> Result<f64> {
    let (_, q) = params.polynomials()?;
    let qr = roots(&q)?.real_roots_sorted;
    match path {
        NeckPath::CarterRoots { .. } => Ok(qr.last().copied().unwrap_or(center.abs()).max(center.abs()) + 1.0),
        _ => {
            let tol = 1e-9 * (1.0 + center.abs());
            let next = qr.into_iter().find(|&t| t > center + tol).unwrap_or(center + 1.0);
            Ok(0.5 * (center + next))
        }
    }
}

fn sample(path: &NeckPath, eps: f64) -> Result<NeckSample> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParams(format!("eps must be positive, got {eps}")));
    }
    let params = path.params(eps)?;
    let center = path.center(eps)?;
    let other = generic_other(&params, path, center)?;
    let w = (10.0 * eps).min(0.25 * (other - center).abs());
    let f = |x: f64| circumference_at(&params, center, x, other).unwrap_or(f64::INFINITY);
    let (location, min_circumference) = golden_section(&f, center - w, center + w, 1e-12 * (1.0 + center.abs()));
    if !min_circumference.is_finite() {
        return Err(Error::OutsideDomain(format!("neck at {center} leaves the admissible domain")));
    }
    let offset_circumference = [
        circumference_at(&params, center, center - eps, other)?,
        circumference_at(&params, center, center + eps, other)?,
    ];
    Ok(NeckSample { eps, center, other, location, min_circumference, offset_circumference })
}

/// Thinnest collapsing circle near the colliding pair for each `eps`, in input order.
pub fn neck_profile(path: &NeckPath, eps_list: &[f64]) -> Result<Vec<NeckSample>> {
    eps_list.par_iter().map(|&e| sample(path, e)).collect()
}
