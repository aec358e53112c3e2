//! The conformal boundary 3-metric at `{x = y}` and the classification of its ends.

mod classify;
mod degeneration;

pub use classify::{classify_boundary_end, classify_boundary_end_in, BoundaryEndKind, BoundaryEndReport, CirclePeriod, FIT_WINDOW};
pub use degeneration::{degeneration_path, DegenerationPath, DegenerationSample};

use serde::{Deserialize, Serialize};

use crate::curvature::{tensors, Tensors};
use crate::error::{Error, Result};
use crate::jet2::{Jet2, Var};
use crate::polyfam::{Chart, FamilyParams, Quartic};
use crate::rootlab::roots;
use crate::DOMAIN_FLOOR;

/// Active jet slots of the boundary coordinates `(psi, phi, x)` or `(tau, sigma, p)`.
pub const ACTIVE_3D: [Option<Var>; 3] = [None, None, Some(Var::X)];

/// Boundary metric with exact first and second `x`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMetricEval {
    pub g3: [[Jet2; 3]; 3],
    pub chart: Chart,
    pub point: f64,
}

impl BoundaryMetricEval {
    pub fn values(&self) -> [[f64; 3]; 3] {
        self.g3.map(|r| r.map(|j| j.value))
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        let m = nalgebra::Matrix3::from_fn(|i, j| self.g3[i][j].value);
        let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        [e[0], e[1], e[2]]
    }

    pub fn killing_norm_sq(&self, k: [f64; 2]) -> f64 {
        let g = self.values();
        g[0][0] * k[0] * k[0] + 2.0 * g[0][1] * k[0] * k[1] + g[1][1] * k[1] * k[1]
    }

    /// Curvature of the boundary metric.
    pub fn tensors(&self) -> Result<Tensors<3>> {
        tensors(&self.g3, &ACTIVE_3D)
    }
}

fn guard(v: f64, what: &str) -> Result<()> {
    if v.abs() < DOMAIN_FLOOR {
        Err(Error::DegenerateLocus(format!("{what} = {v:e}")))
    } else {
        Ok(())
    }
}

/// Evaluates the boundary metric at `x`.
///
/// Toric chart, coordinates `(psi, phi, x)`:
/// `(1 - a^2 x^4)(1/P - 1/Q) dx^2 - Q/(1 - a^2 x^4) (dpsi - a x^2 dphi)^2 + P/(1 - a^2 x^4) (dphi - a x^2 dpsi)^2`.
/// Carter chart, coordinates `(tau, sigma, p)`: `-dp^2/P - P dsigma^2 + (dtau + p^2 dsigma)^2`.
pub fn boundary_metric_at(params: &FamilyParams, x: f64) -> Result<BoundaryMetricEval> {
    if !x.is_finite() {
        return Err(Error::OutsideDomain(format!("non-finite point {x}")));
    }
    let (pp, qq) = params.polynomials()?;
    let t = Jet2::x(x);
    let p = pp.eval_jet(t);
    let mut g = [[Jet2::ZERO; 3]; 3];
    match params.chart() {
        Chart::Toric => {
            let a = params.rotation();
            let q = qq.eval_jet(t);
            let t2 = t * t;
            let d = 1.0 - (t2 * t2) * (a * a);
            guard(p.value, "P(x)")?;
            guard(q.value, "Q(x)")?;
            guard(d.value, "1 - a^2 x^4")?;
            let pd = p.checked_div(d)?;
            let qd = q.checked_div(d)?;
            let at2 = t2 * a;
            g[0][0] = -qd + pd * at2 * at2;
            g[1][1] = -qd * at2 * at2 + pd;
            g[0][1] = (qd - pd) * at2;
            g[1][0] = g[0][1];
            g[2][2] = d * (p.recip()? - q.recip()?);
        }
        Chart::Carter => {
            guard(p.value, "P(p)")?;
            let t2 = t * t;
            g[0][0] = Jet2::ONE;
            g[0][1] = t2;
            g[1][0] = t2;
            g[1][1] = t2 * t2 - p;
            g[2][2] = -p.recip()?;
        }
    }
    let ev = BoundaryMetricEval { g3: g, chart: params.chart(), point: x };
    if !(ev.eigenvalues()[0] > 0.0) {
        return Err(Error::OutsideDomain(format!("boundary metric not positive definite at {x}")));
    }
    Ok(ev)
}

/// Polynomials governing the boundary: `(P, Q)` in the toric chart, `(P, P)` in the Carter chart.
pub(crate) fn boundary_polynomials(params: &FamilyParams) -> Result<(Quartic, Quartic)> {
    let (p, q) = params.polynomials()?;
    Ok(match params.chart() {
        Chart::Toric => (p, q),
        Chart::Carter => (p, p),
    })
}

/// Admissible boundary interval and number of regions it is cut into by separating cusps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryInterval {
    pub start: f64,
    pub end: f64,
    /// Interior double roots where the boundary pinches into a separating cusp.
    pub cusps: Vec<f64>,
    pub regions: usize,
}

/// Longest admissible boundary interval, merged across interior double roots.
pub fn boundary_interval(params: &FamilyParams) -> Result<BoundaryInterval> {
    let (p, q) = boundary_polynomials(params)?;
    let rp = roots(&p)?;
    let rq = roots(&q)?;
    let mut breaks: Vec<(f64, usize)> = rp.real_roots();
    if params.chart() == Chart::Toric {
        breaks.extend(rq.real_roots());
        if params.rotation() != 0.0 {
            let r = 1.0 / params.rotation().abs().sqrt();
            breaks.extend([(-r, 1), (r, 1)]);
        }
    }
    breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (t, m) in breaks {
        match merged.last_mut() {
            Some(last) if (t - last.0).abs() <= 1e-9 * (1.0 + t.abs()) => last.1 += m,
            _ => merged.push((t, m)),
        }
    }
    let ok = |a: f64, b: f64| boundary_metric_at(params, 0.5 * (a + b)).is_ok();
    let mut best: Option<BoundaryInterval> = None;
    let mut i = 0;
    while i + 1 < merged.len() {
        if !ok(merged[i].0, merged[i + 1].0) {
            i += 1;
            continue;
        }
        let start = merged[i].0;
        let mut j = i + 1;
        let mut cusps = Vec::new();
        while j + 1 < merged.len() && merged[j].1 % 2 == 0 && ok(merged[j].0, merged[j + 1].0) {
            cusps.push(merged[j].0);
            j += 1;
        }
        let cand = BoundaryInterval { start, end: merged[j].0, regions: cusps.len() + 1, cusps };
        if best.as_ref().map_or(true, |b| cand.end - cand.start > b.end - b.start) {
            best = Some(cand);
        }
        i = j;
    }
    best.ok_or_else(|| Error::OutsideDomain(format!("no admissible boundary interval for {}", params.name())))
}

/// Sectional curvature and constant-curvature residual of the boundary metric at `x`.
pub fn boundary_curvature_residual(params: &FamilyParams, x: f64) -> Result<(f64, f64)> {
    Ok(boundary_metric_at(params, x)?.tensors()?.constant_curvature_residual())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_boundary_is_round() {
        let f = FamilyParams::cmetric(0.0, 0.0);
        for x in [-0.9, -0.5, -0.1] {
            let (k, res) = boundary_curvature_residual(&f, x).unwrap();
            assert!((k - 0.25).abs() < 1e-9);
            assert!(res < 1e-9);
        }
    }

    #[test]
    fn positive_definite_and_finite() {
        let f = FamilyParams::pd(1, 0.0, 1.0, 0.0, 1.0);
        let iv = boundary_interval(&f).unwrap();
        let m = boundary_metric_at(&f, 0.5 * (iv.start + iv.end)).unwrap();
        assert!(m.eigenvalues()[0] > 0.0);
        let n = boundary_metric_at(&FamilyParams::naked(-1.0, 0.0, 0.0, 1.0), 0.0).unwrap();
        assert!(n.values().iter().flatten().all(|v| v.is_finite()));
    }

    #[test]
    fn degenerate_points() {
        let f = FamilyParams::cmetric(1.0, 0.5);
        assert!(matches!(boundary_metric_at(&f, -1.0), Err(Error::DegenerateLocus(_))));
        assert!(matches!(boundary_metric_at(&f, 0.0), Err(Error::DegenerateLocus(_))));
        let n = FamilyParams::naked(-0.5, 0.0, 0.0, 3.0);
        assert!(matches!(boundary_metric_at(&n, 1.0), Err(Error::DegenerateLocus(_))));
    }

    #[test]
    fn intervals() {
        let iv = boundary_interval(&FamilyParams::cmetric(16.0, 8.0)).unwrap();
        assert!((iv.start + 1.0).abs() < 1e-9 && iv.end.abs() < 1e-9);
        assert_eq!(iv.regions, 3);
        let iv = boundary_interval(&FamilyParams::naked(-1.0, 0.0, 0.0, 1.0)).unwrap();
        assert!((iv.start + 1.0).abs() < 1e-6 && (iv.end - 1.0).abs() < 1e-6);
        let iv = boundary_interval(&FamilyParams::cmetric(1.0, 0.5)).unwrap();
        assert_eq!((iv.start, iv.end, iv.regions), (-1.0, 0.0, 1));
    }
}
