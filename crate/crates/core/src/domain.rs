//! Admissible-domain helpers shared by the regularity, boundary and sampling code.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyfam::{metric_at, Chart, FamilyParams, Quartic};
use crate::rootlab::roots;

/// Which quartic a root belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub fn other(&self) -> Side {
        match self {
            Side::P => Side::Q,
            Side::Q => Side::P,
        }
    }
}

pub fn polynomial(params: &FamilyParams, side: Side) -> Result<Quartic> {
    let (p, q) = params.polynomials()?;
    Ok(match side {
        Side::P => p,
        Side::Q => q,
    })
}

/// Point `(x, y)` with `coord` in the slot of `side` and `other` in the remaining slot.
pub fn point(side: Side, coord: f64, other: f64) -> (f64, f64) {
    match side {
        Side::P => (coord, other),
        Side::Q => (other, coord),
    }
}

/// Killing field, in chart order of the first two coordinates, whose orbits collapse at a
/// root `r` of the quartic of `side`.
///
/// Toric chart `(psi, phi)`: `d_phi + a r^2 d_psi` at roots of `P`, `d_psi + a r^2 d_phi` at
/// roots of `Q`. Carter chart `(tau, sigma)`: `r^2 d_tau - d_sigma` for either quartic.
pub fn killing_at_root(params: &FamilyParams, side: Side, r: f64) -> [f64; 2] {
    match params.chart() {
        Chart::Toric => {
            let a = params.rotation();
            match side {
                Side::P => [a * r * r, 1.0],
                Side::Q => [1.0, a * r * r],
            }
        }
        Chart::Carter => [r * r, -1.0],
    }
}

/// Rate `|F'(r)|/2` at which the collapsing circle opens up, per unit Killing time.
pub fn surface_gravity(params: &FamilyParams, side: Side, r: f64) -> Result<f64> {
    Ok(0.5 * polynomial(params, side)?.eval_derivative(1, r).abs())
}

fn real_roots(q: &Quartic) -> Result<Vec<f64>> {
    Ok(roots(q)?.real_roots_sorted)
}

/// `F(r + s)` from the Taylor expansion at a root `r` of multiplicity `mult`, dropping the
/// vanishing low-order terms.
pub fn taylor_at_root(f: &Quartic, r: f64, mult: usize, s: f64) -> f64 {
    let mut fact = 1.0;
    let mut acc = 0.0;
    for k in 0..=4 {
        if k > 0 {
            fact *= k as f64;
        }
        if k >= mult {
            acc += f.eval_derivative(k, r) * s.powi(k as i32) / fact;
        }
    }
    acc
}

/// Metric coefficient of the coordinate of `side` and squared norm of the collapsing Killing
/// field at `root + s`, with the quartic of `side` expanded about its root of multiplicity `mult`.
pub fn axis_data(params: &FamilyParams, side: Side, root: f64, mult: usize, s: f64, other: f64) -> Result<(f64, f64)> {
    let (pp, qq) = params.polynomials()?;
    let c = root + s;
    let (x, y) = point(side, c, other);
    let (p, q) = match side {
        Side::P => (taylor_at_root(&pp, root, mult, s), qq.eval(y)),
        Side::Q => (pp.eval(x), taylor_at_root(&qq, root, mult, s)),
    };
    let r2 = root * root;
    let (g_cc, norm) = match params.chart() {
        Chart::Toric => {
            let a = params.rotation();
            let omega = 1.0 / ((x - y) * (x - y));
            let d = 1.0 - a * a * x * x * y * y;
            match side {
                Side::P => (
                    omega * d / p,
                    omega / d * (-q * a * a * (x * x - r2).powi(2) + p * (1.0 - a * a * r2 * y * y).powi(2)),
                ),
                Side::Q => (
                    -omega * d / q,
                    omega / d * (-q * (1.0 - a * a * r2 * x * x).powi(2) + p * a * a * (y * y - r2).powi(2)),
                ),
            }
        }
        Chart::Carter => {
            let pq = x * x - y * y;
            let (am, bm) = (p / pq, -q / pq);
            let norm = am * (r2 - y * y).powi(2) + bm * (r2 - x * x).powi(2);
            match side {
                Side::P => (pq / p, norm),
                Side::Q => (-pq / q, norm),
            }
        }
    };
    if !(g_cc > 0.0 && g_cc.is_finite() && norm >= 0.0) {
        return Err(Error::OutsideDomain(format!("({x}, {y}) is not admissible")));
    }
    Ok((g_cc, norm))
}

/// Range of the complementary coordinate along a root `r` of `side`.
pub fn other_range(params: &FamilyParams, side: Side, r: f64) -> Result<(f64, f64)> {
    let (p, q) = params.polynomials()?;
    let tol = 1e-9 * (1.0 + r.abs());
    match params.chart() {
        Chart::Toric => match side {
            Side::P => {
                let end = real_roots(&q)?.into_iter().find(|&t| t > r + tol).unwrap_or(r + 1.0);
                Ok((r, end))
            }
            Side::Q => {
                let start = real_roots(&p)?.into_iter().rev().find(|&t| t < r - tol).unwrap_or(r - 1.0);
                Ok((start, r))
            }
        },
        Chart::Carter => match side {
            Side::P => {
                let qr = real_roots(&q)?;
                let start = qr.last().copied().unwrap_or(0.0).max(r.abs());
                Ok((start, start + 2.0))
            }
            Side::Q => {
                let pr = real_roots(&p)?;
                let mid = |w: &[f64]| p.eval(0.5 * (w[0] + w[1])) < 0.0;
                let w = pr
                    .windows(2)
                    .find(|w| mid(w) && w[1].abs() < r.abs())
                    .ok_or_else(|| Error::OutsideDomain("no interval with P < 0 below the root".into()))?;
                Ok((w[0], w[1]))
            }
        },
    }
}

/// Three generic values of the complementary coordinate at 25/50/75% of its range.
pub fn generic_others(params: &FamilyParams, side: Side, r: f64) -> Result<[f64; 3]> {
    let (lo, hi) = other_range(params, side, r)?;
    Ok([0.25, 0.5, 0.75].map(|t| lo + t * (hi - lo)))
}

/// Rejection-samples an admissible point well away from all degenerate loci.
pub fn sample_admissible_point<R: Rng>(params: &FamilyParams, rng: &mut R) -> Result<(f64, f64)> {
    let (p, q) = params.polynomials()?;
    let mut rr = real_roots(&p)?;
    rr.extend(real_roots(&q)?);
    let lo = rr.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rr.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() { (lo - 1.0, hi + 1.0) } else { (-2.0, 2.0) };
    let a = params.rotation();
    let margin = 1e-3;
    let singular_margin = 0.05;
    for _ in 0..200_000 {
        let x = rng.gen_range(lo..hi);
        let y = rng.gen_range(lo..hi);
        let (px, qy) = (p.eval(x), q.eval(y));
        let far = px.abs() > margin * p.magnitude_at(x)
            && qy.abs() > margin * q.magnitude_at(y)
            && (x - y).abs() > margin
            && (1.0 - a * a * x * x * y * y).abs() > margin
            && (a == 0.0 || ((1.0 + a * x * y).abs() > singular_margin && (1.0 - a * x * y).abs() > singular_margin))
            && (params.chart() == Chart::Toric || ((x - y).abs() > 0.1 && (x + y).abs() > 0.1));
        if far && metric_at(params, (x, y)).is_ok() {
            return Ok((x, y));
        }
    }
    Err(Error::OutsideDomain(format!("no admissible point found for {}", params.name())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ranges() {
        let f = FamilyParams::cmetric(16.0, 8.0);
        assert_eq!(other_range(&f, Side::P, -0.25).unwrap(), (-0.25, 0.0));
        let (lo, hi) = other_range(&f, Side::Q, -0.75).unwrap();
        assert!((lo + 1.0).abs() < 1e-12 && hi == -0.75);
        let ys = generic_others(&f, Side::P, -1.0).unwrap();
        assert!(ys.iter().all(|&y| y > -1.0 && y < -0.75));
    }

    #[test]
    fn sampling_is_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for f in [
            FamilyParams::cmetric(1.0, 0.5),
            FamilyParams::pd(1, 0.0, 1.0, 0.0, 1.0),
            FamilyParams::carter(0.7, 0.4, -0.3, -0.5),
            FamilyParams::naked(-0.5, 0.0, 0.0, 3.0),
        ] {
            for _ in 0..20 {
                let pt = sample_admissible_point(&f, &mut rng).unwrap();
                assert!(metric_at(&f, pt).unwrap().eigenvalues()[0] > 0.0);
            }
        }
    }

    #[test]
    fn killing_fields() {
        let f = FamilyParams::naked(-0.5, 0.0, 0.0, 3.0);
        assert_eq!(killing_at_root(&f, Side::P, -0.5), [0.25, 1.0]);
        assert_eq!(killing_at_root(&f, Side::Q, 1.0), [1.0, 1.0]);
        let c = FamilyParams::cmetric(1.0, 0.5);
        assert_eq!(killing_at_root(&c, Side::P, -1.0), [0.0, 1.0]);
        assert!((surface_gravity(&c, Side::P, -1.0).unwrap() - 0.75).abs() < 1e-14);
    }
}
