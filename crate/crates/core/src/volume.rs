//! L2 norm of the Weyl tensor by adaptive tensor-product Gauss-Kronrod cubature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{closed_form_weyl_norm_sq, curvature_at};
use crate::error::{Error, Result};
use crate::polyfam::{metric_at, Chart, FamilyParams};

/// Positive Kronrod nodes on `[-1, 1]`; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Fifteen Kronrod nodes and weights, with the seven-point Gauss weight of each node (0 if not a Gauss node).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let g = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], g);
        out[14 - i] = (XGK[i], WGK[i], g);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

/// Integration domain in the `(x, y)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum L2Domain {
    /// `{x1 <= x < y <= y2}`.
    Triangle { x1: f64, y2: f64 },
    Rectangle { x: (f64, f64), y: (f64, f64) },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_cells: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { abs_tol: 1e-8, rel_tol: 0.0, max_cells: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells: usize,
}

/// `|W|^2 sqrt(det g)` at `(x, y)`.
pub fn weyl_density(params: &FamilyParams, point: (f64, f64)) -> Result<f64> {
    let (x, y) = point;
    if let Some(w) = closed_form_weyl_norm_sq(params, point)? {
        let a = params.rotation();
        let d = 1.0 - a * a * x * x * y * y;
        return Ok(w * d.abs() / (x - y).powi(4));
    }
    let m = metric_at(params, point)?;
    let c = curvature_at(&m)?;
    let vol = match params.chart() {
        Chart::Carter => (x * x - y * y).abs(),
        Chart::Toric => m.determinant().abs().sqrt(),
    };
    Ok(c.weyl_norm_sq * vol)
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    u: (f64, f64),
    v: (f64, f64),
    value: f64,
    error: f64,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then(o.u.0.total_cmp(&self.u.0))
            .then(o.v.0.total_cmp(&self.v.0))
    }
}

/// Integrand on the unit-square parametrization of the domain, including the Jacobian.
struct Mapped<'a> {
    params: &'a FamilyParams,
    domain: L2Domain,
}

impl Mapped<'_> {
    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        match self.domain {
            L2Domain::Triangle { x1, y2 } => ((x1, y2), (0.0, 1.0)),
            L2Domain::Rectangle { x, y } => (x, y),
        }
    }

    fn eval(&self, u: f64, v: f64) -> Result<f64> {
        match self.domain {
            L2Domain::Triangle { y2, .. } => {
                let w = y2 - u;
                weyl_density(self.params, (u, u + v * w)).map(|f| f * w)
            }
            L2Domain::Rectangle { .. } => weyl_density(self.params, (u, v)),
        }
    }

    fn cell(&self, u: (f64, f64), v: (f64, f64)) -> Result<Cell> {
        let r = rule();
        let (cu, hu) = (0.5 * (u.0 + u.1), 0.5 * (u.1 - u.0));
        let (cv, hv) = (0.5 * (v.0 + v.1), 0.5 * (v.1 - v.0));
        let (mut k, mut g) = (0.0, 0.0);
        for &(ti, wki, wgi) in &r {
            let (mut rk, mut rg) = (0.0, 0.0);
            for &(tj, wkj, wgj) in &r {
                let f = self.eval(cu + hu * ti, cv + hv * tj)?;
                rk += wkj * f;
                rg += wgj * f;
            }
            k += wki * rk;
            g += wgi * rg;
        }
        let area = hu * hv;
        Ok(Cell { u, v, value: k * area, error: ((k - g) * area).abs() })
    }
}

fn split(c: &Cell) -> [((f64, f64), (f64, f64)); 4] {
    let mu = 0.5 * (c.u.0 + c.u.1);
    let mv = 0.5 * (c.v.0 + c.v.1);
    [((c.u.0, mu), (c.v.0, mv)), ((c.u.0, mu), (mv, c.v.1)), ((mu, c.u.1), (c.v.0, mv)), ((mu, c.u.1), (mv, c.v.1))]
}

fn deterministic_sum(cells: &[Cell]) -> (f64, f64) {
    let mut sorted: Vec<&Cell> = cells.iter().collect();
    sorted.sort_by(|a, b| a.u.0.total_cmp(&b.u.0).then(a.v.0.total_cmp(&b.v.0)));
    sorted.iter().fold((0.0, 0.0), |(v, e), c| (v + c.value, e + c.error))
}

/// `Delta phi * Delta psi * integral of |W|^2 sqrt(det g)` over `domain` with default options and
/// absolute tolerance `tol`.
pub fn weyl_l2(params: &FamilyParams, domain: L2Domain, periods: (f64, f64), tol: f64) -> Result<QuadratureResult> {
    weyl_l2_with(params, domain, periods, &QuadratureOptions { abs_tol: tol, ..Default::default() })
}

/// Adaptive cubature of the L2 Weyl norm; refines the cells with the largest error estimates
/// until the total estimate meets `max(abs_tol, rel_tol |value|)`.
pub fn weyl_l2_with(
    params: &FamilyParams,
    domain: L2Domain,
    periods: (f64, f64),
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::InvalidParams("quadrature tolerance must be positive".into()));
    }
    let map = Mapped { params, domain };
    let (ub, vb) = map.bounds();
    if !(ub.0 < ub.1 && vb.0 < vb.1) {
        return Err(Error::InvalidParams(format!("empty integration domain {domain:?}")));
    }
    let scale = periods.0 * periods.1;
    let mut heap = BinaryHeap::new();
    heap.push(map.cell(ub, vb)?);
    let mut done: Vec<Cell> = Vec::new();
    loop {
        let mut all: Vec<Cell> = done.clone();
        all.extend(heap.iter().copied());
        let (value, error) = deterministic_sum(&all);
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        let cells = all.len();
        if error * scale.abs() <= target {
            return Ok(QuadratureResult { value: value * scale, error_estimate: error * scale.abs(), cells });
        }
        if cells + 3 > opts.max_cells {
            return Err(Error::NonConvergence(format!(
                "error estimate {:e} above {target:e} after {cells} cells",
                error * scale.abs()
            )));
        }
        let batch = (heap.len() / 4).clamp(1, 64).min((opts.max_cells - cells) / 3);
        let worst: Vec<Cell> = (0..batch.max(1)).filter_map(|_| heap.pop()).collect();
        let children: Vec<Result<Cell>> = worst
            .par_iter()
            .flat_map_iter(|c| split(c).into_iter().map(|(u, v)| map.cell(u, v)))
            .collect();
        for c in children {
            let c = c?;
            if c.error == 0.0 {
                done.push(c);
            } else {
                heap.push(c);
            }
        }
    }
}

/// Same integral on a uniform `n x n` grid of fifteen-point cells.
pub fn weyl_l2_uniform(params: &FamilyParams, domain: L2Domain, periods: (f64, f64), n: usize) -> Result<f64> {
    let map = Mapped { params, domain };
    let (ub, vb) = map.bounds();
    let cells: Vec<Result<Cell>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let at = |b: (f64, f64), i: usize| b.0 + (b.1 - b.0) * i as f64 / n as f64;
            map.cell((at(ub, i), at(ub, i + 1)), (at(vb, j), at(vb, j + 1)))
        })
        .collect();
    let cells: Vec<Cell> = cells.into_iter().collect::<Result<_>>()?;
    Ok(deterministic_sum(&cells).0 * periods.0 * periods.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_integrates_polynomials() {
        let r = rule();
        let k: f64 = r.iter().map(|(t, w, _)| w * t.powi(10)).sum();
        let g: f64 = r.iter().map(|(t, _, w)| w * t.powi(6)).sum();
        assert!((k - 2.0 / 11.0).abs() < 1e-14);
        assert!((g - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_space_has_no_weyl() {
        let r = weyl_l2(&FamilyParams::cmetric(0.0, 0.0), L2Domain::Triangle { x1: -1.0, y2: 0.0 }, (4.0 * PI, 4.0 * PI), 1e-10)
            .unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn cmetric_16_8_value() {
        let t = 4.0 * PI / 9.0;
        let r = weyl_l2(&FamilyParams::cmetric(16.0, 8.0), L2Domain::Triangle { x1: -1.0, y2: 0.0 }, (t, t), 1e-4).unwrap();
        // 12 mu^2 (x - y)^2 over the unit triangle
        assert!((r.value - 256.0 * t * t).abs() < 1e-8);
        assert!(r.error_estimate < 1e-4);
    }

    #[test]
    fn carter_pipeline_agrees_with_uniform_grid() {
        let f = FamilyParams::carter(0.7, 0.4, -0.3, -0.5);
        let d = L2Domain::Rectangle { x: (-0.2, 0.2), y: (1.4, 1.6) };
        let r = weyl_l2(&f, d, (1.0, 1.0), 1e-9).unwrap();
        let u = weyl_l2_uniform(&f, d, (1.0, 1.0), 4).unwrap();
        assert!((r.value - u).abs() <= 2.0 * r.error_estimate + 1e-12);
        assert!(r.value > 0.0);
    }

    #[test]
    fn budget_exhaustion() {
        let f = FamilyParams::pd(1, 0.0, 1.0, 0.0, 1.0);
        let opts = QuadratureOptions { abs_tol: 1e-30, rel_tol: 0.0, max_cells: 20 };
        let e = weyl_l2_with(&f, L2Domain::Triangle { x1: -0.9, y2: -0.1 }, (1.0, 1.0), &opts);
        assert!(matches!(e, Err(Error::NonConvergence(_))));
    }
}
