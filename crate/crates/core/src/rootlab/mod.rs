//! Quartic root solving with certified multiplicities, and parameter-region geometry.

mod region;

pub use region::{
    boundary_double_roots, carter_double_root_constraints, cmetric_region, region_grid, BoundaryCurve, RegionSample,
    RegionVerdict, REGION_TOL,
};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyfam::Quartic;

type C64 = Complex<f64>;

/// Relative tolerance of the multiplicity certificate.
pub const CERT_TOL: f64 = 1e-7;
/// Conjugate pairs (or close real pairs) with half-gap below this, relative to the root
/// scale, are flagged as near-double roots.
pub const NEAR_DOUBLE_GAP: f64 = 1e-3;

/// Largest diameter, relative to the root scale, of a cluster of `m` computed roots that
/// may be merged into one root of multiplicity `m`.
fn cluster_radius(m: usize) -> f64 {
    match m {
        0 | 1 => 0.0,
        2 => 1e-6,
        3 => 1e-4,
        _ => 5e-3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl Root {
    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// Two distinct roots closer than [`NEAR_DOUBLE_GAP`]: either a conjugate pair
/// `center +- i half_gap` or a real pair `center +- half_gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearDouble {
    pub center: f64,
    pub half_gap: f64,
    pub complex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootStructure {
    /// Distinct roots; complex ones appear with both members of their conjugate pair.
    pub roots: Vec<Root>,
    /// Distinct real roots, ascending.
    pub real_roots_sorted: Vec<f64>,
    pub degree: usize,
    pub near_double: Vec<NearDouble>,
}

impl RootStructure {
    /// Multiplicity of the real root within `tol` of `t`, or 0.
    pub fn multiplicity_at(&self, t: f64, tol: f64) -> usize {
        self.roots
            .iter()
            .filter(|r| r.is_real() && (r.re - t).abs() <= tol)
            .map(|r| r.multiplicity)
            .max()
            .unwrap_or(0)
    }

    /// Real roots with their multiplicities, ascending.
    pub fn real_roots(&self) -> Vec<(f64, usize)> {
        let mut v: Vec<_> = self.roots.iter().filter(|r| r.is_real()).map(|r| (r.re, r.multiplicity)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }

    /// Complex roots with positive imaginary part.
    pub fn upper_complex(&self) -> Vec<Root> {
        let mut v: Vec<_> = self.roots.iter().filter(|r| r.im > 0.0).copied().collect();
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v
    }
}

fn deriv_scale(q: &Quartic, k: usize, z: C64) -> f64 {
    q.nth_derivative(k).magnitude_at(z.norm()).max(f64::MIN_POSITIVE)
}

/// True when `z` is a root of multiplicity exactly `m` within the relative certificate tolerance.
pub fn certify(q: &Quartic, z: C64, m: usize) -> bool {
    let vanish = (0..m).all(|k| q.nth_derivative(k).eval_complex(z).norm() <= CERT_TOL * deriv_scale(q, k, z));
    let top = q.nth_derivative(m).eval_complex(z).norm() > CERT_TOL * deriv_scale(q, m, z);
    vanish && top
}

fn newton(q: &Quartic, mut z: C64, steps: usize) -> C64 {
    let dq = q.derivative();
    for _ in 0..steps {
        let f = q.eval_complex(z);
        let df = dq.eval_complex(z);
        if df.norm() == 0.0 {
            break;
        }
        let cand = z - f / df;
        if q.eval_complex(cand).norm() <= f.norm() && cand.re.is_finite() && cand.im.is_finite() {
            z = cand;
        } else {
            break;
        }
    }
    z
}

fn companion_eigenvalues(q: &Quartic, n: usize) -> Vec<C64> {
    let c = &q.coeffs;
    let lead = c[n];
    match n {
        0 => vec![],
        1 => vec![C64::new(-c[0] / lead, 0.0)],
        _ => {
            let m = DMatrix::from_fn(n, n, |i, j| {
                if j == n - 1 {
                    -c[i] / lead
                } else if i == j + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            schur_eigenvalues(m)
        }
    }
}

/// Eigenvalues read off the real Schur form, one 1x1 or 2x2 diagonal block at a time.
fn schur_eigenvalues(m: DMatrix<f64>) -> Vec<C64> {
    let n = m.nrows();
    let t = m.schur().unpack().1;
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mean = 0.5 * (a + d);
            let disc = 0.25 * (a - d) * (a - d) + b * c;
            let r = disc.abs().sqrt();
            if disc >= 0.0 {
                out.extend([C64::new(mean + r, 0.0), C64::new(mean - r, 0.0)]);
            } else {
                out.extend([C64::new(mean, r), C64::new(mean, -r)]);
            }
            i += 2;
        } else {
            out.push(C64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for i in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn diameter(zs: &[C64]) -> f64 {
    let mut d: f64 = 0.0;
    for a in zs {
        for b in zs {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Refines the centroid of a cluster of `m` computed roots as a simple root of `q^(m-1)`.
fn refine_cluster(q: &Quartic, zs: &[C64], scale: f64) -> C64 {
    let m = zs.len();
    let mut c = zs.iter().sum::<C64>() / m as f64;
    if m % 2 == 1 || c.im.abs() <= cluster_radius(m) * scale {
        c.im = 0.0;
    }
    let dq = q.nth_derivative(m - 1);
    let refined = newton(&dq, c, 4);
    if (refined - c).norm() <= cluster_radius(m.max(2)) * scale {
        refined
    } else {
        c
    }
}

/// All roots of `q` with certified multiplicities.
pub fn roots(q: &Quartic) -> Result<RootStructure> {
    let maxc = q.max_abs_coeff();
    if maxc == 0.0 || !maxc.is_finite() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = q.coeffs;
    for v in c.iter_mut() {
        if v.abs() <= 1e-15 * maxc {
            *v = 0.0;
        }
    }
    let q = Quartic::new(c);
    let degree = q.degree().ok_or(Error::ZeroPolynomial)?;
    let zeros = c.iter().position(|&v| v != 0.0).unwrap_or(0);
    let mut reduced = [0.0; 5];
    reduced[..5 - zeros].copy_from_slice(&c[zeros..]);
    let reduced = Quartic::new(reduced);
    let n = degree - zeros;

    let raw: Vec<C64> = companion_eigenvalues(&reduced, n).into_iter().map(|z| newton(&reduced, z, 2)).collect();
    let scale = raw.iter().fold(1.0_f64, |m, z| m.max(z.norm()));

    let mut best: Option<(usize, f64, Vec<(C64, usize)>)> = None;
    for part in set_partitions(raw.len()) {
        let mut blocks = Vec::with_capacity(part.len());
        let mut total = 0.0;
        let mut ok = true;
        for b in &part {
            let zs: Vec<C64> = b.iter().map(|&i| raw[i]).collect();
            if zs.len() == 1 {
                blocks.push((zs[0], 1));
                continue;
            }
            let d = diameter(&zs);
            if d > cluster_radius(zs.len()) * scale {
                ok = false;
                break;
            }
            let z = refine_cluster(&reduced, &zs, scale);
            if !certify(&reduced, z, zs.len()) {
                ok = false;
                break;
            }
            total += d;
            blocks.push((z, zs.len()));
        }
        if !ok {
            continue;
        }
        let better = match &best {
            None => true,
            Some((nb, tb, _)) => part.len() < *nb || (part.len() == *nb && total < *tb),
        };
        if better {
            best = Some((part.len(), total, blocks));
        }
    }
    let mut blocks = best.map(|b| b.2).unwrap_or_default();

    // Snap nearly-real simple roots and symmetrize conjugate pairs.
    let real_tol = 1e-12 * scale;
    for (z, _) in blocks.iter_mut() {
        if z.im.abs() <= real_tol {
            z.im = 0.0;
        }
    }
    let mut used = vec![false; blocks.len()];
    for i in 0..blocks.len() {
        if used[i] || blocks[i].0.im <= 0.0 {
            continue;
        }
        let zi = blocks[i].0;
        let partner = (0..blocks.len())
            .filter(|&j| !used[j] && j != i && blocks[j].0.im < 0.0 && blocks[j].1 == blocks[i].1)
            .min_by(|&a, &b| (blocks[a].0 - zi.conj()).norm().total_cmp(&(blocks[b].0 - zi.conj()).norm()));
        if let Some(j) = partner {
            let zj = blocks[j].0;
            let re = 0.5 * (zi.re + zj.re);
            let im = 0.5 * (zi.im - zj.im);
            blocks[i].0 = C64::new(re, im);
            blocks[j].0 = C64::new(re, -im);
            used[i] = true;
            used[j] = true;
        }
    }

    let mut out: Vec<Root> = blocks.iter().map(|(z, m)| Root { re: z.re, im: z.im, multiplicity: *m }).collect();
    if zeros > 0 {
        out.push(Root { re: 0.0, im: 0.0, multiplicity: zeros });
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut real_roots_sorted: Vec<f64> = out.iter().filter(|r| r.is_real()).map(|r| r.re).collect();
    real_roots_sorted.sort_by(f64::total_cmp);

    let mut near_double = Vec::new();
    for r in out.iter().filter(|r| r.im > 0.0 && r.multiplicity == 1) {
        if r.im <= NEAR_DOUBLE_GAP * scale {
            near_double.push(NearDouble { center: r.re, half_gap: r.im, complex: true });
        }
    }
    let simple_reals: Vec<f64> =
        out.iter().filter(|r| r.is_real() && r.multiplicity == 1).map(|r| r.re).collect();
    for w in simple_reals.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        if half <= NEAR_DOUBLE_GAP * scale {
            near_double.push(NearDouble { center: 0.5 * (w[0] + w[1]), half_gap: half, complex: false });
        }
    }

    Ok(RootStructure { roots: out, real_roots_sorted, degree, near_double })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfam::FamilyParams;

    fn real_set(rs: &RootStructure) -> Vec<(f64, usize)> {
        rs.real_roots()
    }

    #[test]
    fn cmetric_double_roots() {
        let (p, q) = FamilyParams::cmetric(16.0, 8.0).polynomials().unwrap();
        let rp = real_set(&roots(&p).unwrap());
        assert_eq!(rp.len(), 2);
        assert!((rp[0].0 + 1.0).abs() < 1e-12 && rp[0].1 == 1);
        assert!((rp[1].0 + 0.25).abs() < 1e-8 && rp[1].1 == 2);
        let rq = real_set(&roots(&q).unwrap());
        assert!((rq[0].0 + 0.75).abs() < 1e-8 && rq[0].1 == 2);
        assert!(rq[1].0 == 0.0 && rq[1].1 == 1);
    }

    #[test]
    fn close_double_roots_have_finite_parts() {
        let (a, b) = (-1.7979063315205612, -0.08475571759727077);
        let mut q = Quartic::constant(0.43115223535551156);
        for r in [a, a, b, b] {
            q = q.checked_mul(&Quartic::linear_factor(r)).unwrap();
        }
        let got = roots(&q).unwrap().real_roots();
        assert_eq!(got.len(), 2, "{got:?}");
        assert!(got.iter().all(|&(_, m)| m == 2));
        assert!((got[0].0 - a).abs() < 1e-8 && (got[1].0 - b).abs() < 1e-8);
    }

    #[test]
    fn triple_root() {
        let (p, q) = FamilyParams::naked(-1.0, 0.0, 0.0, 1.0).polynomials().unwrap();
        let rp = real_set(&roots(&p).unwrap());
        assert_eq!(rp.len(), 2);
        assert!((rp[0].0 + 1.0).abs() < 1e-10 && rp[0].1 == 1);
        assert!((rp[1].0 - 1.0).abs() < 1e-10 && rp[1].1 == 3);
        let rq = real_set(&roots(&q).unwrap());
        assert!((rq[0].0 + 1.0).abs() < 1e-10 && rq[0].1 == 3);
        assert!((rq[1].0 - 1.0).abs() < 1e-10 && rq[1].1 == 1);
    }

    #[test]
    fn degenerate_degrees() {
        assert_eq!(roots(&Quartic::ZERO), Err(Error::ZeroPolynomial));
        let r = roots(&Quartic::constant(3.0)).unwrap();
        assert_eq!(r.degree, 0);
        assert!(r.roots.is_empty());
        let r = roots(&Quartic::from_slice(&[1.0, 1.0])).unwrap();
        assert_eq!(r.degree, 1);
        assert_eq!(r.real_roots_sorted, vec![-1.0]);
        let r = roots(&Quartic::from_slice(&[0.0, 0.0, 0.0, 0.0, 2.0])).unwrap();
        assert_eq!(r.roots, vec![Root { re: 0.0, im: 0.0, multiplicity: 4 }]);
    }

    #[test]
    fn near_double_flag() {
        let q = Quartic::linear_factor(-1.0) * Quartic::quadratic_factor(0.3, 1e-8) * Quartic::linear_factor(2.0);
        let r = roots(&q).unwrap();
        assert_eq!(r.roots.len(), 4);
        assert_eq!(r.near_double.len(), 1);
        assert!((r.near_double[0].half_gap - 1e-4).abs() < 1e-9);
        assert!(r.near_double[0].complex);
    }

    #[test]
    fn complex_quadruple() {
        let f = Quartic::quadratic_factor(0.5, 1.0);
        let r = roots(&(f * f)).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots.iter().all(|z| z.multiplicity == 2 && (z.im.abs() - 1.0).abs() < 1e-8));
    }
}
