use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::boundary_polynomials;
use crate::domain::{taylor_at_root, Side};
use crate::error::{Error, Result};
use crate::numeric::{linear_fit, logspace};
use crate::polyfam::{Chart, FamilyParams, Quartic};
use crate::regularity::SMOOTH_TOL;
use crate::rootlab::roots;

/// Default window of offsets `|x - endpoint|` used in the fits.
pub const FIT_WINDOW: (f64, f64) = (1e-5, 1e-2);
const FIT_SAMPLES: usize = 40;

/// Period of the collapsing circle at a boundary end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CirclePeriod {
    /// Period making the adjacent bulk axis smooth: `4 pi / |F'|` for the collapsing Killing field.
    Auto,
    /// Closing time of the collapsing Killing field.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryEndKind {
    Smooth,
    Cone,
    Naked,
    Cusp,
    SeparatingCusp,
}

/// Asymptotics of the boundary metric at one end of its interval.
///
/// The metric is written `c1 dx^2 + c2 theta1^2 + c3 theta2^2` where `theta2` is dual to the
/// collapsing circle; `constants` are the fitted `(C1, C2, C3)` of the model and
/// `formula_constants` their closed forms, both in absolute value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEndReport {
    pub endpoint: f64,
    pub kind: BoundaryEndKind,
    /// Multiplicities of the endpoint as a root of `P` and `Q`.
    pub multiplicities: [usize; 2],
    pub fitted_exponent: f64,
    pub model_exponent: f64,
    pub constants: [f64; 3],
    pub formula_constants: [f64; 3],
    pub rel_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_angle: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Model {
    Cone11,
    Naked,
    Cusp,
    Simple,
    Separating,
}

/// Local data at the endpoint: polynomials, multiplicities, which quartic carries the higher
/// multiplicity (`f`) and the other one (`g`).
struct EndData {
    chart: Chart,
    a: f64,
    e: f64,
    p: Quartic,
    q: Quartic,
    mp: usize,
    mq: usize,
    model: Model,
    side: Side,
}

impl EndData {
    fn f(&self) -> &Quartic {
        match self.side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }

    fn g(&self) -> &Quartic {
        match self.side {
            Side::P => &self.q,
            Side::Q => &self.p,
        }
    }

    fn d_b(&self) -> f64 {
        1.0 - self.a * self.a * self.e.powi(4)
    }

    /// `(c1, c2, c3)` at `x = e + s`, with the vanishing quartics expanded about the endpoint.
    fn coefficients(&self, s: f64) -> (f64, f64, f64) {
        let x = self.e + s;
        let pv = taylor_at_root(&self.p, self.e, self.mp, s);
        let qv = taylor_at_root(&self.q, self.e, self.mq, s);
        match self.chart {
            Chart::Carter => {
                let e2 = self.e * self.e;
                let norm = (e2 - x * x).powi(2) - pv;
                (-1.0 / pv, -pv / norm, norm)
            }
            Chart::Toric if self.model == Model::Cone11 || self.model == Model::Naked || self.model == Model::Cusp => {
                // Frame dphi - dpsi, dphi + dpsi; uses P - Q = 1 - x^4.
                let t = (1.0 - x) * (1.0 + x);
                let u = 1.0 + x * x;
                (t * u * (1.0 / pv - 1.0 / qv), u * u / 4.0, -pv * qv / (u * u))
            }
            Chart::Toric => {
                let a = self.a;
                let e2 = self.e * self.e;
                let x2 = x * x;
                let d = 1.0 - a * a * x2 * x2;
                let norm = match self.side {
                    Side::P => (-qv * a * a * (e2 - x2).powi(2) + pv * (1.0 - a * a * x2 * e2).powi(2)) / d,
                    Side::Q => (-qv * (1.0 - a * a * x2 * e2).powi(2) + pv * a * a * (e2 - x2).powi(2)) / d,
                };
                (d * (1.0 / pv - 1.0 / qv), -pv * qv / norm, norm)
            }
        }
    }

    fn formula_constants(&self) -> [f64; 3] {
        let e = self.e;
        let fd = |n: usize| self.f().eval_derivative(n, e).abs();
        let gd = |n: usize| self.g().eval_derivative(n, e).abs();
        match self.model {
            Model::Cone11 => {
                let (p1, q1) = (self.p.eval_derivative(1, e), self.q.eval_derivative(1, e));
                [4.0 * (1.0 / p1 - 1.0 / q1).abs(), (p1 - q1).abs() / 4.0, (p1 * q1 / (p1 - q1)).abs()]
            }
            Model::Naked => [8.0 / fd(2), gd(1) / 4.0, fd(2) / 2.0],
            Model::Cusp => [24.0 / fd(3), gd(1) / 4.0, fd(3) / 6.0],
            Model::Simple => match self.chart {
                Chart::Carter => [1.0 / fd(1), 1.0, fd(1)],
                Chart::Toric => {
                    let d = self.d_b();
                    [d / fd(1), gd(0) / d, fd(1) * d]
                }
            },
            Model::Separating => match self.chart {
                Chart::Carter => {
                    let c3 = fd(2) / 2.0 + 4.0 * e * e;
                    [2.0 / fd(2), fd(2) / (2.0 * c3), c3]
                }
                Chart::Toric => {
                    let d = self.d_b();
                    let c3 = (4.0 * self.a * self.a * e * e * gd(0) + fd(2) * d * d / 2.0) / d;
                    [2.0 * d / fd(2), fd(2) * gd(0) / (2.0 * c3), c3]
                }
            },
        }
    }
}

fn multiplicity(f: &Quartic, e: f64) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(roots(f)?.multiplicity_at(e, 1e-6 * (1.0 + e.abs())))
}

fn end_data(params: &FamilyParams, e: f64) -> Result<EndData> {
    let (p, q) = boundary_polynomials(params)?;
    let chart = params.chart();
    let a = params.rotation();
    let mp = multiplicity(&p, e)?;
    let mq = if chart == Chart::Carter { 0 } else { multiplicity(&q, e)? };
    let unrecognized = || Error::UnrecognizedMultiplicityPattern { endpoint: e, p: mp, q: mq };
    let at_unit = chart == Chart::Toric && a == 1.0 && (e.abs() - 1.0).abs() <= 1e-9;
    let (model, side) = if at_unit {
        match (mp, mq) {
            (1, 1) => (Model::Cone11, Side::Q),
            (2, 1) => (Model::Naked, Side::P),
            (1, 2) => (Model::Naked, Side::Q),
            (3, 1) => (Model::Cusp, Side::P),
            (1, 3) => (Model::Cusp, Side::Q),
            _ => return Err(unrecognized()),
        }
    } else {
        let (m, side) = match (mp, mq) {
            (0, 0) => return Err(Error::PreconditionViolated(format!("{e} is not a root of P or Q"))),
            (m, 0) => (m, Side::P),
            (0, m) => (m, Side::Q),
            _ => return Err(unrecognized()),
        };
        match m {
            1 => (Model::Simple, side),
            2 => (Model::Separating, side),
            _ => return Err(unrecognized()),
        }
    };
    Ok(EndData { chart, a, e, p, q, mp, mq, model, side })
}

/// Square of the distance from the endpoint to the nearest other breakpoint, capped at one.
fn local_scale(params: &FamilyParams, d: &EndData) -> Result<f64> {
    let mut pts = roots(&d.p)?.real_roots_sorted;
    if d.chart == Chart::Toric {
        pts.extend(roots(&d.q)?.real_roots_sorted);
        if d.a != 0.0 {
            let r = 1.0 / params.rotation().abs().sqrt();
            pts.extend([-r, r]);
        }
    }
    let tol = 1e-6 * (1.0 + d.e.abs());
    let gap = pts.into_iter().map(|t| (t - d.e).abs()).filter(|&t| t > tol).fold(1.0, f64::min);
    Ok(gap * gap)
}

fn geometric_mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x.ln(), n + 1));
    (s / n as f64).exp()
}

/// Classifies the boundary end at `endpoint` with the default fit window.
pub fn classify_boundary_end(params: &FamilyParams, endpoint: f64, period: CirclePeriod) -> Result<BoundaryEndReport> {
    classify_boundary_end_in(params, endpoint, period, FIT_WINDOW)
}

/// Classifies the boundary end at `endpoint`, fitting over offsets in `window` (scaled down by the
/// squared distance to the nearest other breakpoint when that is below one).
pub fn classify_boundary_end_in(
    params: &FamilyParams,
    endpoint: f64,
    period: CirclePeriod,
    window: (f64, f64),
) -> Result<BoundaryEndReport> {
    if !(window.0 > 0.0 && window.0 < window.1) {
        return Err(Error::InvalidParams(format!("invalid fit window {window:?}")));
    }
    let d = end_data(params, endpoint)?;
    let scale = local_scale(params, &d)?;
    let deltas = logspace(window.0 * scale, window.1 * scale, FIT_SAMPLES);
    let positive = |s: f64| {
        let (c1, c2, c3) = d.coefficients(s);
        c1 > 0.0 && c2 > 0.0 && c3 > 0.0 && c1.is_finite() && c2.is_finite()
    };
    let dir = [1.0, -1.0]
        .into_iter()
        .find(|&s| positive(s * deltas[0]) && positive(s * deltas[FIT_SAMPLES - 1]))
        .ok_or_else(|| Error::OutsideDomain(format!("no admissible side of the boundary end {endpoint}")))?;
    let cs: Vec<(f64, f64, f64)> = deltas.iter().map(|&t| d.coefficients(dir * t)).collect();
    let log_c3: Vec<f64> = cs.iter().map(|c| c.2.ln()).collect();
    let (p1, q1) = (d.p.eval_derivative(1, endpoint), d.q.eval_derivative(1, endpoint));

    let (var, model_exponent, e1, e3): (Vec<f64>, f64, i32, i32) = match d.model {
        Model::Cone11 => (deltas.iter().map(|t| t.ln()).collect(), 2.0, 0, 2),
        Model::Naked => (deltas.iter().map(|t| (2.0 * t.sqrt()).ln()).collect(), 6.0, 1, 3),
        Model::Cusp => (deltas.iter().map(|t| -t.ln()).collect(), -4.0, 2, 4),
        Model::Simple => (deltas.iter().map(|t| t.sqrt().ln()).collect(), 2.0, 1, 1),
        Model::Separating => (deltas.iter().map(|t| t.ln()).collect(), 2.0, 2, 2),
    };
    let (fitted_exponent, _) = linear_fit(&var, &log_c3);
    let constants = [
        geometric_mean(deltas.iter().zip(&cs).map(|(t, c)| c.0 * t.powi(e1))),
        geometric_mean(cs.iter().map(|c| c.1)),
        geometric_mean(deltas.iter().zip(&cs).map(|(t, c)| c.2 / t.powi(e3))),
    ];
    let formula_constants = d.formula_constants();
    let mut rel_error = (0..3)
        .map(|i| (constants[i] - formula_constants[i]).abs() / formula_constants[i])
        .fold(0.0, f64::max);

    let killing_period = |slope: f64| match period {
        CirclePeriod::Auto => 4.0 * PI / slope,
        CirclePeriod::Fixed(t) => t,
    };
    let (angle, formula_angle) = match d.model {
        Model::Cone11 => {
            // The collapsing field d_phi + d_psi advances phi + psi by 2 per unit time.
            let period_v = 2.0 * killing_period(q1.abs());
            let fitted = (constants[2] / constants[0]).sqrt() * period_v;
            (Some(fitted), Some((p1 * q1).abs() / (2.0 * (p1 - q1).abs()) * period_v))
        }
        Model::Simple => {
            let slope = d.f().eval_derivative(1, endpoint).abs();
            let t = killing_period(slope);
            (Some((constants[2] / constants[0]).sqrt() / 2.0 * t), Some(slope / 2.0 * t))
        }
        _ => (None, None),
    };
    if let (Some(a), Some(f)) = (angle, formula_angle) {
        rel_error = rel_error.max((a - f).abs() / f);
    }
    let kind = match d.model {
        Model::Cone11 | Model::Simple => {
            let f = formula_angle.unwrap_or(0.0);
            if (f - 2.0 * PI).abs() <= SMOOTH_TOL * 2.0 * PI {
                BoundaryEndKind::Smooth
            } else {
                BoundaryEndKind::Cone
            }
        }
        Model::Naked => BoundaryEndKind::Naked,
        Model::Cusp => BoundaryEndKind::Cusp,
        Model::Separating => BoundaryEndKind::SeparatingCusp,
    };
    Ok(BoundaryEndReport {
        endpoint,
        kind,
        multiplicities: [d.mp, d.mq],
        fitted_exponent,
        model_exponent,
        constants,
        formula_constants,
        rel_error,
        angle,
        formula_angle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn two_cusp_ends() {
        let f = FamilyParams::naked(-1.0, 0.0, 0.0, 1.0);
        for e in [1.0, -1.0] {
            let r = classify_boundary_end(&f, e, CirclePeriod::Auto).unwrap();
            assert_eq!(r.kind, BoundaryEndKind::Cusp);
            assert!(close(r.fitted_exponent, -4.0, 0.05), "{r:?}");
            assert!(r.rel_error < 0.05, "{r:?}");
        }
    }

    #[test]
    fn naked_end() {
        let f = FamilyParams::naked(-0.5, 0.0, 0.0, 3.0);
        let r = classify_boundary_end(&f, 1.0, CirclePeriod::Auto).unwrap();
        assert_eq!(r.kind, BoundaryEndKind::Naked);
        assert_eq!(r.multiplicities, [2, 1]);
        assert!(close(r.fitted_exponent, 6.0, 0.05), "{r:?}");
        assert!(r.rel_error < 0.05, "{r:?}");
    }

    #[test]
    fn cone_end_at_one() {
        let a3: f64 = -0.01;
        let f = FamilyParams::naked(-0.5, -(-a3).sqrt(), a3, 3.0);
        let r = classify_boundary_end(&f, 1.0, CirclePeriod::Auto).unwrap();
        assert_eq!(r.kind, BoundaryEndKind::Cone);
        assert_eq!(r.multiplicities, [1, 1]);
        assert!(close(r.fitted_exponent, 2.0, 0.05));
        let (a, fa) = (r.angle.unwrap(), r.formula_angle.unwrap());
        assert!((a - fa).abs() < 0.01 * fa, "{r:?}");
    }

    #[test]
    fn simple_roots_are_smooth_with_auto_periods() {
        let f = FamilyParams::cmetric(1.0, 0.5);
        for e in [-1.0, 0.0] {
            let r = classify_boundary_end(&f, e, CirclePeriod::Auto).unwrap();
            assert_eq!(r.kind, BoundaryEndKind::Smooth);
            assert!(close(r.fitted_exponent, 2.0, 0.05));
            assert!(r.rel_error < 0.05, "{r:?}");
        }
        let r = classify_boundary_end(&f, -1.0, CirclePeriod::Fixed(1.0)).unwrap();
        assert_eq!(r.kind, BoundaryEndKind::Cone);
        assert!((r.angle.unwrap() - 0.75).abs() < 0.01);
    }

    #[test]
    fn separating_cusps() {
        let f = FamilyParams::cmetric(16.0, 8.0);
        for e in [-0.25, -0.75] {
            let r = classify_boundary_end(&f, e, CirclePeriod::Auto).unwrap();
            assert_eq!(r.kind, BoundaryEndKind::SeparatingCusp);
            assert!(r.rel_error < 0.05, "{r:?}");
        }
        let n = FamilyParams::naked(-1.0, 0.08, 0.0, 1.0);
        let r = classify_boundary_end(&n, 0.92, CirclePeriod::Auto).unwrap();
        assert_eq!(r.kind, BoundaryEndKind::SeparatingCusp);
        assert!(r.rel_error < 0.05, "{r:?}");
    }

    #[test]
    fn errors() {
        let f = FamilyParams::cmetric(1.0, 0.5);
        assert!(matches!(classify_boundary_end(&f, -0.5, CirclePeriod::Auto), Err(Error::PreconditionViolated(_))));
        let quad = FamilyParams::pd(1, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            classify_boundary_end(&quad, 0.0, CirclePeriod::Auto),
            Err(Error::UnrecognizedMultiplicityPattern { .. })
        ));
    }

    #[test]
    fn window_shift_stability() {
        let f = FamilyParams::naked(-1.0, 0.0, 0.0, 1.0);
        let a = classify_boundary_end_in(&f, 1.0, CirclePeriod::Auto, (1e-5, 1e-2)).unwrap();
        let b = classify_boundary_end_in(&f, 1.0, CirclePeriod::Auto, (5e-6, 5e-3)).unwrap();
        assert!((a.fitted_exponent - b.fitted_exponent).abs() < 0.01);
    }
}
