//! Christoffel symbols, Riemann, Ricci, Weyl and its selfdual/anti-selfdual split.

mod tensors;

pub use tensors::{det_inverse, delta, gram_schmidt, sum_sq, tensors, to_frame2, to_frame4, Tensors, T2, T3, T4};

use nalgebra::{Matrix3, SymmetricEigen};
use serde::Serialize;

use crate::error::Result;
use crate::jet2::Var;
use crate::polyfam::{FamilyParams, MetricEval};

/// Active jet slots of the four coordinates: the first two are Killing directions.
pub const ACTIVE_4D: [Option<Var>; 4] = [None, None, Some(Var::X), Some(Var::Y)];

/// Curvature of a four-dimensional metric.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    pub christoffel: T3<4>,
    /// All indices down, coordinate basis.
    pub riemann: T4<4>,
    pub ricci: T2<4>,
    pub scalar: f64,
    /// All indices down, coordinate basis.
    pub weyl: T4<4>,
    pub weyl_sd_eigs: [f64; 3],
    pub weyl_asd_eigs: [f64; 3],
    pub riem_norm_sq: f64,
    pub weyl_norm_sq: f64,
    pub g: T2<4>,
    pub g_inv: T2<4>,
    pub frame: T2<4>,
    pub riemann_frame: T4<4>,
    pub ricci_frame: T2<4>,
    pub weyl_frame: T4<4>,
}

/// Weyl curvature operator on selfdual and anti-selfdual 2-forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylBlocks {
    pub sd: [[f64; 3]; 3],
    pub asd: [[f64; 3]; 3],
}

/// Weyl part of a covariant curvature tensor in dimension 4.
fn weyl_from(r: &T4<4>, ric: &T2<4>, scalar: f64, g: &T2<4>) -> T4<4> {
    let mut w = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let ric_part = g[a][c] * ric[b][d] - g[a][d] * ric[b][c] - g[b][c] * ric[a][d] + g[b][d] * ric[a][c];
                    let g_part = g[a][c] * g[b][d] - g[a][d] * g[b][c];
                    w[a][b][c][d] = r[a][b][c][d] - 0.5 * ric_part + scalar / 6.0 * g_part;
                }
            }
        }
    }
    w
}

fn identity4() -> T2<4> {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Orthonormal bases of the `+1` and `-1` eigenspaces of the Hodge star, as
/// `(i, j, k, l, sign)`: the form `(e_ij + sign * e_kl) / sqrt 2` with the frame orientation
/// `e_0 ^ e_1 ^ e_2 ^ e_3`.
const HODGE_PAIRS: [(usize, usize, usize, usize, f64); 3] = [(0, 1, 2, 3, 1.0), (0, 2, 3, 1, 1.0), (0, 3, 1, 2, 1.0)];

fn two_form(idx: usize, sign: f64) -> [[f64; 4]; 4] {
    let (i, j, k, l, s) = HODGE_PAIRS[idx];
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let mut w = [[0.0; 4]; 4];
    w[i][j] = c;
    w[j][i] = -c;
    w[k][l] = sign * s * c;
    w[l][k] = -sign * s * c;
    w
}

/// Weyl operator matrix `<omega_A, W omega_B>` with `W(omega)_ij = W_ijkl omega_kl / 2`
/// and `<alpha, beta> = alpha_ij beta_ij / 2`.
fn block(w: &T4<4>, sign: f64) -> [[f64; 3]; 3] {
    let forms: Vec<_> = (0..3).map(|i| two_form(i, sign)).collect();
    let mut m = [[0.0; 3]; 3];
    for (a, fa) in forms.iter().enumerate() {
        for (b, fb) in forms.iter().enumerate() {
            let mut s = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            s += fa[i][j] * w[i][j][k][l] * fb[k][l];
                        }
                    }
                }
            }
            m[a][b] = 0.25 * s;
        }
    }
    m
}

/// Eigenvalues of a symmetric 3x3 matrix, ascending.
pub fn sym3_eigenvalues(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let mat = Matrix3::from_fn(|i, j| 0.5 * (m[i][j] + m[j][i]));
    let mut e: Vec<f64> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    [e[0], e[1], e[2]]
}

/// Splits ascending eigenvalues into `(simple, repeated pair)`: the simple one is the
/// eigenvalue farther from its neighbour.
pub fn type_d_split(e: [f64; 3]) -> (f64, [f64; 2]) {
    if (e[1] - e[0]).abs() <= (e[2] - e[1]).abs() {
        (e[2], [e[0], e[1]])
    } else {
        (e[0], [e[1], e[2]])
    }
}

/// Computes the full curvature data of a four-dimensional metric evaluation.
pub fn curvature_at(m: &MetricEval) -> Result<CurvatureData> {
    let t = tensors(&m.g, &ACTIVE_4D)?;
    let weyl = weyl_from(&t.riemann, &t.ricci, t.scalar, &t.g);
    let weyl_frame = weyl_from(&t.riemann_frame, &t.ricci_frame, t.scalar, &identity4());
    let sd = block(&weyl_frame, 1.0);
    let asd = block(&weyl_frame, -1.0);
    Ok(CurvatureData {
        christoffel: t.christoffel,
        riemann: t.riemann,
        ricci: t.ricci,
        scalar: t.scalar,
        weyl,
        weyl_sd_eigs: sym3_eigenvalues(&sd),
        weyl_asd_eigs: sym3_eigenvalues(&asd),
        riem_norm_sq: sum_sq(&t.riemann_frame),
        weyl_norm_sq: sum_sq(&weyl_frame),
        g: t.g,
        g_inv: t.g_inv,
        frame: t.frame,
        riemann_frame: t.riemann_frame,
        ricci_frame: t.ricci_frame,
        weyl_frame,
    })
}

/// Weyl operator restricted to the selfdual and anti-selfdual 2-forms.
pub fn weyl_split(c: &CurvatureData) -> WeylBlocks {
    WeylBlocks { sd: block(&c.weyl_frame, 1.0), asd: block(&c.weyl_frame, -1.0) }
}

/// Largest frame component of `Ric - lambda g`.
pub fn einstein_residual_of(c: &CurvatureData, lambda: f64) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            r = r.max((c.ricci_frame[i][j] - lambda * delta(i, j)).abs());
        }
    }
    r
}

/// Largest frame component of `Ric - lambda g` at the evaluated point.
pub fn einstein_residual(m: &MetricEval, lambda: f64) -> Result<f64> {
    Ok(einstein_residual_of(&curvature_at(m)?, lambda))
}

/// Closed-form `|Rm|^2` for the toric families, when known.
///
/// Rotating family: `24 + 24 (x-y)^6 (k+^2/(1+xy)^6 + k-^2/(1-xy)^6)`;
/// non-rotating: `24 + 12 c^2 (x-y)^6` where `c` is the cubic coefficient of `P`.
pub fn closed_form_riem_norm_sq(params: &FamilyParams, point: (f64, f64)) -> Result<Option<f64>> {
    closed_form_weyl_norm_sq(params, point).map(|w| w.map(|w| w + 24.0))
}

/// Closed-form `|W|^2` for the toric families, when known.
pub fn closed_form_weyl_norm_sq(params: &FamilyParams, point: (f64, f64)) -> Result<Option<f64>> {
    let (x, y) = point;
    let Some(pd) = params.pd_coefficients()? else {
        return Ok(None);
    };
    let s6 = (x - y).powi(6);
    Ok(Some(if pd.a == 0 {
        12.0 * pd.c * pd.c * s6
    } else {
        let kp = 0.5 * (pd.c + pd.e);
        let km = 0.5 * (pd.c - pd.e);
        24.0 * s6 * (kp * kp / (1.0 + x * y).powi(6) + km * km / (1.0 - x * y).powi(6))
    }))
}
