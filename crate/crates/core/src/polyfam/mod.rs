//! Parameter families, their quartic pairs, and metric evaluators.

mod metric;
mod quartic;

pub use metric::{metric_at, Chart, MetricEval};
pub use quartic::Quartic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DOMAIN_FLOOR;

/// Parameters of the rotating family with quartics `P`, `Q` tied by `Q = P + a^2 t^4 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdParams {
    pub a: u8,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CMetricParams {
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarterParams {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarterRootsParams {
    pub p3: f64,
    pub p4: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NakedParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
}

/// Tagged union of all supported parameter sets.
///
/// Serializes as `{"family": "...", "params": {...}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum FamilyParams {
    Pd(PdParams),
    #[serde(rename = "cmetric")]
    CMetric(CMetricParams),
    CarterPlebanski(CarterParams),
    CarterRoots(CarterRootsParams),
    Naked(NakedParams),
}

impl FamilyParams {
    pub fn pd(a: u8, b: f64, c: f64, d: f64, e: f64) -> Self {
        FamilyParams::Pd(PdParams { a, b, c, d, e })
    }

    pub fn cmetric(mu: f64, nu: f64) -> Self {
        FamilyParams::CMetric(CMetricParams { mu, nu })
    }

    pub fn carter(e: f64, m: f64, n: f64, alpha: f64) -> Self {
        FamilyParams::CarterPlebanski(CarterParams { e, m, n, alpha })
    }

    pub fn carter_roots(p3: f64, p4: f64, eps: f64) -> Self {
        FamilyParams::CarterRoots(CarterRootsParams { p3, p4, eps })
    }

    pub fn naked(alpha1: f64, alpha2: f64, alpha3: f64, alpha4: f64) -> Self {
        FamilyParams::Naked(NakedParams { alpha1, alpha2, alpha3, alpha4 })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyParams::Pd(_) => "pd",
            FamilyParams::CMetric(_) => "cmetric",
            FamilyParams::CarterPlebanski(_) => "carter_plebanski",
            FamilyParams::CarterRoots(_) => "carter_roots",
            FamilyParams::Naked(_) => "naked",
        }
    }

    pub fn chart(&self) -> Chart {
        match self {
            FamilyParams::CarterPlebanski(_) | FamilyParams::CarterRoots(_) => Chart::Carter,
            _ => Chart::Toric,
        }
    }

    /// Rotation parameter `a` of the toric families; zero for the Carter chart.
    pub fn rotation(&self) -> f64 {
        match self {
            FamilyParams::Pd(p) => f64::from(p.a),
            FamilyParams::Naked(_) => 1.0,
            _ => 0.0,
        }
    }

    /// Coefficients `(a, b, c, d, e)` when the family is a member of the rotating family.
    pub fn pd_coefficients(&self) -> Result<Option<PdParams>> {
        Ok(match *self {
            FamilyParams::Pd(p) => Some(p),
            FamilyParams::CMetric(CMetricParams { mu, nu }) => {
                Some(PdParams { a: 0, b: 0.0, c: mu, d: mu + nu, e: 1.0 + nu })
            }
            FamilyParams::Naked(n) => {
                let p = naked_p(&n)?;
                let c = p.coeffs;
                Some(PdParams { a: 1, b: c[4], c: c[3], d: c[2], e: c[1] })
            }
            _ => None,
        })
    }

    /// `(k+, k-) = ((c + e)/2, (c - e)/2)` for the toric families.
    pub fn k_plus_minus(&self) -> Result<Option<(f64, f64)>> {
        Ok(self.pd_coefficients()?.map(|p| (0.5 * (p.c + p.e), 0.5 * (p.c - p.e))))
    }

    /// The quartic pair `(P, Q)` of the family.
    pub fn polynomials(&self) -> Result<(Quartic, Quartic)> {
        match self {
            FamilyParams::Pd(p) => pd_polynomials(p),
            FamilyParams::CMetric(p) => Ok(cmetric_polynomials(p)),
            FamilyParams::Naked(p) => naked_polynomials(p),
            FamilyParams::CarterPlebanski(p) => Ok(carter_polynomials(p)),
            FamilyParams::CarterRoots(p) => Ok(carter_roots_polynomials(p)),
        }
    }

    /// Checks parameter validity without evaluating anything else.
    pub fn validate(&self) -> Result<()> {
        let finite = match self {
            FamilyParams::Pd(p) => [p.b, p.c, p.d, p.e].iter().all(|v| v.is_finite()),
            FamilyParams::CMetric(p) => p.mu.is_finite() && p.nu.is_finite(),
            FamilyParams::CarterPlebanski(p) => [p.e, p.m, p.n, p.alpha].iter().all(|v| v.is_finite()),
            FamilyParams::CarterRoots(p) => [p.p3, p.p4, p.eps].iter().all(|v| v.is_finite()),
            FamilyParams::Naked(p) => [p.alpha1, p.alpha2, p.alpha3, p.alpha4].iter().all(|v| v.is_finite()),
        };
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        self.polynomials().map(|_| ())
    }
}

/// `P = b x^4 + c x^3 + d x^2 + e x + b + 1` and `Q = P + a^2 y^4 - 1`.
///
/// For `a = 1` this is `Q = (b+1) y^4 + c y^3 + d y^2 + e y + b`. For `a = 0` the pair is
/// Einstein only when `b = 0`, which is then required.
pub fn pd_polynomials(p: &PdParams) -> Result<(Quartic, Quartic)> {
    if p.a > 1 {
        return Err(Error::InvalidParams(format!("rotation a must be 0 or 1, got {}", p.a)));
    }
    if p.a == 0 && p.b != 0.0 {
        return Err(Error::InvalidParams(
            "the non-rotating family (a = 0) requires b = 0".into(),
        ));
    }
    let a2 = f64::from(p.a);
    let pp = Quartic::new([p.b + 1.0, p.e, p.d, p.c, p.b]);
    let qq = Quartic::new([p.b, p.e, p.d, p.c, p.b + a2]);
    Ok((pp, qq))
}

/// `P = (1 + x)(1 + nu x + mu x^2)`, `Q = y (1 + nu + (mu + nu) y + mu y^2)`.
pub fn cmetric_polynomials(p: &CMetricParams) -> (Quartic, Quartic) {
    let (mu, nu) = (p.mu, p.nu);
    let pp = Quartic::from_slice(&[1.0, 1.0 + nu, nu + mu, mu]);
    let qq = Quartic::from_slice(&[0.0, 1.0 + nu, nu + mu, mu]);
    (pp, qq)
}

/// Normalization denominator of the naked family.
pub fn naked_denominator(p: &NakedParams) -> f64 {
    let (a1, a2, a3, a4) = (p.alpha1, p.alpha2, p.alpha3, p.alpha4);
    -1.0 + a1 * a2 * a2 * a4 + a1 * a4 - 2.0 * a1 * a2 * a4 + a1 * a3 * a4
}

fn naked_p(p: &NakedParams) -> Result<Quartic> {
    let den = naked_denominator(p);
    if den.abs() < DOMAIN_FLOOR {
        return Err(Error::DegenerateNormalization(den));
    }
    let q = Quartic::linear_factor(p.alpha1)
        * Quartic::quadratic_factor(1.0 - p.alpha2, p.alpha3)
        * Quartic::linear_factor(p.alpha4);
    Ok(q.scale(1.0 / den))
}

/// `P = C (x - a1)((x - 1 + a2)^2 + a3)(x - a4)` and `Q = P + y^4 - 1`.
pub fn naked_polynomials(p: &NakedParams) -> Result<(Quartic, Quartic)> {
    let pp = naked_p(p)?;
    let qq = pp + Quartic::from_slice(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
    Ok((pp, qq))
}

/// `P = p^4 + E^2 p^2 - 2 N p + alpha`, `Q = q^4 + E^2 q^2 - 2 M q + alpha`.
pub fn carter_polynomials(p: &CarterParams) -> (Quartic, Quartic) {
    let e2 = p.e * p.e;
    let pp = Quartic::new([p.alpha, -2.0 * p.n, e2, 0.0, 1.0]);
    let qq = Quartic::new([p.alpha, -2.0 * p.m, e2, 0.0, 1.0]);
    (pp, qq)
}

/// `P = Q = (p - p3)(p - p4)((p - p0)^2 + eps^2)` with `p0 = -(p3 + p4)/2`.
pub fn carter_roots_polynomials(p: &CarterRootsParams) -> (Quartic, Quartic) {
    let p0 = -0.5 * (p.p3 + p.p4);
    let pp = Quartic::linear_factor(p.p3)
        * Quartic::linear_factor(p.p4)
        * Quartic::quadratic_factor(p0, p.eps * p.eps);
    (pp, pp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn pd_examples() {
        let (p, q) = FamilyParams::pd(1, 0.0, 0.0, 0.0, 0.0).polynomials().unwrap();
        assert_eq!(p, Quartic::constant(1.0));
        assert_eq!(q, Quartic::from_slice(&[0.0, 0.0, 0.0, 0.0, 1.0]));
        let (p, q) = FamilyParams::pd(1, 1.0, 0.0, 0.0, 0.0).polynomials().unwrap();
        assert_eq!(p, Quartic::from_slice(&[2.0, 0.0, 0.0, 0.0, 1.0]));
        assert_eq!(q, Quartic::from_slice(&[1.0, 0.0, 0.0, 0.0, 2.0]));
        let (p, q) = FamilyParams::pd(1, 0.3, -1.2, 0.7, 2.5).polynomials().unwrap();
        for t in [-2.0, 0.0, 3.0] {
            assert!(close(q.eval(t) - p.eval(t), t.powi(4) - 1.0, 1e-12));
        }
    }

    #[test]
    fn pd_without_rotation_requires_vanishing_quartic_term() {
        assert!(matches!(
            FamilyParams::pd(0, 1.0, 0.0, 0.0, 0.0).polynomials(),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(FamilyParams::pd(2, 0.0, 0.0, 0.0, 0.0).polynomials(), Err(Error::InvalidParams(_))));
        let (p, q) = FamilyParams::pd(0, 0.0, 2.0, 3.0, 1.5).polynomials().unwrap();
        assert_eq!(q, p - Quartic::constant(1.0));
    }

    #[test]
    fn cmetric_examples() {
        let (p, q) = FamilyParams::cmetric(0.0, 0.0).polynomials().unwrap();
        assert_eq!(p, Quartic::from_slice(&[1.0, 1.0]));
        assert_eq!(q, Quartic::from_slice(&[0.0, 1.0]));
        let (p, q) = FamilyParams::cmetric(16.0, 8.0).polynomials().unwrap();
        for r in [-1.0, -0.25] {
            assert!(p.eval(r).abs() < 1e-14);
        }
        assert!(p.eval_derivative(1, -0.25).abs() < 1e-13);
        for r in [0.0, -0.75] {
            assert!(q.eval(r).abs() < 1e-14);
        }
        assert!(q.eval_derivative(1, -0.75).abs() < 1e-13);
        let mu: f64 = 12.0;
        let (p, _) = FamilyParams::cmetric(mu, 2.0 * mu.sqrt()).polynomials().unwrap();
        let r = -mu.sqrt() / 12.0;
        assert!((r + 0.2887).abs() < 1e-4);
        assert!(p.eval(r).abs() < 1e-13 && p.eval_derivative(1, r).abs() < 1e-12);
    }

    #[test]
    fn cmetric_is_the_non_rotating_member() {
        let cm = FamilyParams::cmetric(2.0, 0.7);
        let pd = FamilyParams::Pd(cm.pd_coefficients().unwrap().unwrap());
        assert_eq!(cm.polynomials().unwrap(), pd.polynomials().unwrap());
    }

    #[test]
    fn naked_examples() {
        let (p, q) = FamilyParams::naked(-1.0, 0.0, 0.0, 1.0).polynomials().unwrap();
        for t in [-1.7, -0.3, 0.0, 0.4, 2.2] {
            assert!(close(p.eval(t), -0.5 * (t - 1.0).powi(3) * (t + 1.0), 1e-14));
            assert!(close(q.eval(t), 0.5 * (t - 1.0) * (t + 1.0).powi(3), 1e-14));
        }
        let (p, q) = FamilyParams::naked(-0.4, 0.0, 0.0, 2.5).polynomials().unwrap();
        assert!(p.eval(1.0).abs() < 1e-15 && p.eval_derivative(1, 1.0).abs() < 1e-14);
        assert!(p.eval_derivative(2, 1.0).abs() > 1e-3);
        assert!(q.eval(1.0).abs() < 1e-15 && q.eval_derivative(1, 1.0).abs() > 1e-3);
    }

    #[test]
    fn naked_left_root_slope() {
        for (a1, a4) in [(-0.4, 2.5), (-0.9, 1.3), (0.2, 3.0), (-0.1, 7.0)] {
            let (p, _) = FamilyParams::naked(a1, 0.0, 0.0, a4).polynomials().unwrap();
            let expected = (a1 - 1.0) * (a1 - 1.0) * (a1 - a4) / (a1 * a4 - 1.0);
            assert!(close(p.eval_derivative(1, a1), expected, 1e-10));
        }
    }

    #[test]
    fn naked_normalization_guard() {
        let r = FamilyParams::naked(1.0, 0.0, 0.0, 1.0).polynomials();
        assert!(matches!(r, Err(Error::DegenerateNormalization(_))));
    }

    #[test]
    fn carter_examples() {
        let (p, q) = FamilyParams::carter_roots(-1.0, 1.0, 0.0).polynomials().unwrap();
        assert_eq!(p, q);
        for t in [-2.0, -0.5, 0.3, 1.7] {
            assert!(close(p.eval(t), t * t * (t - 1.0) * (t + 1.0), 1e-14));
        }
        let (p, _) = FamilyParams::carter_roots(-0.7, 1.9, 0.0).polynomials().unwrap();
        assert!(p.coeffs[3].abs() < 1e-15);
        let (p, _) = FamilyParams::carter(0.0, 0.0, 0.0, 0.0).polynomials().unwrap();
        assert_eq!(p, Quartic::from_slice(&[0.0, 0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn json_round_trip() {
        let all = [
            FamilyParams::pd(1, 0.1, 0.2, 0.3, 0.4),
            FamilyParams::cmetric(16.0, 8.0),
            FamilyParams::carter(0.7, 0.4, -0.3, -0.5),
            FamilyParams::carter_roots(-1.0, 2.0, 0.1),
            FamilyParams::naked(-1.0, 0.0, 0.0, 1.0),
        ];
        for f in all {
            let s = serde_json::to_string(&f).unwrap();
            let back: FamilyParams = serde_json::from_str(&s).unwrap();
            assert_eq!(back, f);
        }
        let f: FamilyParams =
            serde_json::from_str(r#"{"family":"cmetric","params":{"mu":1.0,"nu":0.5}}"#).unwrap();
        assert_eq!(f, FamilyParams::cmetric(1.0, 0.5));
        let f: FamilyParams =
            serde_json::from_str(r#"{"family":"carter_plebanski","params":{"E":1,"M":2,"N":3,"alpha":4}}"#).unwrap();
        assert_eq!(f, FamilyParams::carter(1.0, 2.0, 3.0, 4.0));
    }
}
