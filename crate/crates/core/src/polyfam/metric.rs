use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::FamilyParams;
use crate::error::{Error, Result};
use crate::jet2::Jet2;
use crate::DOMAIN_FLOOR;

/// Coordinate chart of a four-dimensional family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// Coordinates `(psi, phi, x, y)`.
    Toric,
    /// Coordinates `(tau, sigma, p, q)`.
    Carter,
}

impl Chart {
    pub fn labels(&self) -> [&'static str; 4] {
        match self {
            Chart::Toric => ["psi", "phi", "x", "y"],
            Chart::Carter => ["tau", "sigma", "p", "q"],
        }
    }
}

/// Metric components as jets in the two non-Killing coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEval {
    pub g: [[Jet2; 4]; 4],
    pub chart: Chart,
    pub point: (f64, f64),
}

impl MetricEval {
    pub fn new(g: [[Jet2; 4]; 4], chart: Chart, point: (f64, f64)) -> Self {
        MetricEval { g, chart, point }
    }

    pub fn values(&self) -> [[f64; 4]; 4] {
        self.g.map(|row| row.map(|j| j.value))
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let v = self.values();
        Matrix4::from_fn(|i, j| v[i][j])
    }

    pub fn determinant(&self) -> f64 {
        self.matrix().determinant()
    }

    /// Eigenvalues of the value part, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut e: Vec<f64> = SymmetricEigen::new(self.matrix()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        [e[0], e[1], e[2], e[3]]
    }

    /// Norm squared of a Killing field with components `k` in the first two coordinates.
    pub fn killing_norm_sq(&self, k: [f64; 2]) -> f64 {
        let g = self.values();
        g[0][0] * k[0] * k[0] + 2.0 * g[0][1] * k[0] * k[1] + g[1][1] * k[1] * k[1]
    }
}

fn guard(v: f64, what: &str) -> Result<()> {
    if v.abs() < DOMAIN_FLOOR {
        Err(Error::DegenerateLocus(format!("{what} = {v:e}")))
    } else {
        Ok(())
    }
}

fn sym(g: &mut [[Jet2; 4]; 4], i: usize, j: usize, v: Jet2) {
    g[i][j] = v;
    g[j][i] = v;
}

/// Evaluates the metric and its first and second derivatives at `point`.
pub fn metric_at(params: &FamilyParams, point: (f64, f64)) -> Result<MetricEval> {
    let (pp, qq) = params.polynomials()?;
    let (xv, yv) = point;
    if !(xv.is_finite() && yv.is_finite()) {
        return Err(Error::OutsideDomain(format!("non-finite point ({xv}, {yv})")));
    }
    let x = Jet2::x(xv);
    let y = Jet2::y(yv);
    let p = pp.eval_jet(x);
    let q = qq.eval_jet(y);
    let mut g = [[Jet2::ZERO; 4]; 4];
    match params.chart() {
        Chart::Toric => {
            let a = params.rotation();
            guard(xv - yv, "x - y")?;
            let dv = 1.0 - a * a * xv * xv * yv * yv;
            guard(dv, "1 - a^2 x^2 y^2")?;
            guard(p.value, "P(x)")?;
            guard(q.value, "Q(y)")?;
            if xv > yv {
                return Err(Error::OutsideDomain(format!("x = {xv} > y = {yv}")));
            }
            if p.value < 0.0 || q.value > 0.0 || dv < 0.0 {
                return Err(Error::OutsideDomain(format!(
                    "signs P = {:e}, Q = {:e}, 1 - a^2 x^2 y^2 = {dv:e} at ({xv}, {yv})",
                    p.value, q.value
                )));
            }
            let x2 = x * x;
            let y2 = y * y;
            let d = 1.0 - (x2 * y2) * (a * a);
            let omega = (x - y).powi(2).recip()?;
            let od = omega.checked_div(d)?;
            sym(&mut g, 0, 0, od * (-q + p * (y2 * y2) * (a * a)));
            sym(&mut g, 1, 1, od * (-q * (x2 * x2) * (a * a) + p));
            sym(&mut g, 0, 1, od * (x2 * q - y2 * p) * a);
            sym(&mut g, 2, 2, (omega * d).checked_div(p)?);
            sym(&mut g, 3, 3, -(omega * d).checked_div(q)?);
        }
        Chart::Carter => {
            let s = xv * xv - yv * yv;
            guard(s, "p^2 - q^2")?;
            guard(p.value, "P(p)")?;
            guard(q.value, "Q(q)")?;
            if p.value > 0.0 || q.value < 0.0 || s > 0.0 {
                return Err(Error::OutsideDomain(format!(
                    "signs P = {:e}, Q = {:e}, p^2 - q^2 = {s:e} at ({xv}, {yv})",
                    p.value, q.value
                )));
            }
            let x2 = x * x;
            let y2 = y * y;
            let pq = x2 - y2;
            let am = p.checked_div(pq)?;
            let bm = -q.checked_div(pq)?;
            sym(&mut g, 0, 0, am + bm);
            sym(&mut g, 0, 1, am * y2 + bm * x2);
            sym(&mut g, 1, 1, am * (y2 * y2) + bm * (x2 * x2));
            sym(&mut g, 2, 2, pq.checked_div(p)?);
            sym(&mut g, 3, 3, -pq.checked_div(q)?);
        }
    }
    Ok(MetricEval { g, chart: params.chart(), point })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cmetric_sample_is_riemannian() {
        let m = metric_at(&FamilyParams::cmetric(1.0, 0.5), (-0.5, -0.25)).unwrap();
        assert!(m.eigenvalues()[0] > 0.0);
        let g = m.values();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g[i][j], g[j][i]);
            }
        }
    }

    #[test]
    fn naked_limit_sample_is_riemannian() {
        let m = metric_at(&FamilyParams::naked(-1.0, 0.0, 0.0, 1.0), (-0.5, 0.5)).unwrap();
        assert!(m.eigenvalues()[0] > 0.0);
    }

    #[test]
    fn volume_element_identity() {
        let m = metric_at(&FamilyParams::pd(1, 0.0, 1.0, 0.0, 1.0), (-0.6, -0.2)).unwrap();
        let (x, y): (f64, f64) = (-0.6, -0.2);
        let r = m.determinant() * (x - y).powi(8) / (x * x * y * y - 1.0).powi(2);
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        let f = FamilyParams::cmetric(1.0, 0.5);
        assert!(matches!(metric_at(&f, (-0.2, -0.5)), Err(Error::OutsideDomain(_))));
        assert!(matches!(metric_at(&f, (-0.3, -0.3)), Err(Error::DegenerateLocus(_))));
        assert!(matches!(metric_at(&f, (-1.0, -0.3)), Err(Error::DegenerateLocus(_))));
        assert!(matches!(metric_at(&f, (-0.5, 0.3)), Err(Error::OutsideDomain(_))));
        let n = FamilyParams::naked(-1.0, 0.0, 0.0, 1.0);
        assert!(matches!(metric_at(&n, (-0.5, 1.0)), Err(Error::DegenerateLocus(_))));
    }

    #[test]
    fn carter_sample_is_riemannian() {
        let m = metric_at(&FamilyParams::carter(0.7, 0.4, -0.3, -0.5), (0.1, 1.5)).unwrap();
        assert!(m.eigenvalues()[0] > 0.0);
        assert_eq!(m.chart.labels()[2], "p");
    }
}
