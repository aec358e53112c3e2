use crate::error::{Error, Result};
use crate::jet2::{Jet2, Var};

pub type T2<const N: usize> = [[f64; N]; N];
pub type T3<const N: usize> = [[[f64; N]; N]; N];
pub type T4<const N: usize> = [[[[f64; N]; N]; N]; N];

/// Determinant threshold below which the metric is rejected as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// Levi-Civita curvature of an `N`-dimensional metric whose components depend on at most two
/// coordinates. `active[c]` names the jet slot carrying derivatives along coordinate `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensors<const N: usize> {
    pub g: T2<N>,
    pub g_inv: T2<N>,
    /// `christoffel[k][i][j]` is the connection coefficient with upper index `k`.
    pub christoffel: T3<N>,
    /// All indices down, coordinate basis.
    pub riemann: T4<N>,
    pub ricci: T2<N>,
    pub scalar: f64,
    /// `frame[a][i]` is the `a`-th coordinate component of the `i`-th orthonormal vector.
    pub frame: T2<N>,
    pub riemann_frame: T4<N>,
    pub ricci_frame: T2<N>,
}

/// Determinant and inverse by Gauss-Jordan elimination with partial pivoting.
pub fn det_inverse<const N: usize>(m: &T2<N>) -> (f64, Option<T2<N>>) {
    let mut a = *m;
    let mut inv = [[0.0; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        if a[piv][col] == 0.0 {
            return (0.0, None);
        }
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for k in 0..N {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for r in 0..N {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for k in 0..N {
                        a[r][k] -= f * a[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    (det, Some(inv))
}

/// Orthonormal frame from Gram-Schmidt on the coordinate vectors in index order.
pub fn gram_schmidt<const N: usize>(g: &T2<N>) -> Result<T2<N>> {
    let inner = |u: &[f64; N], v: &[f64; N]| -> f64 {
        let mut s = 0.0;
        for a in 0..N {
            for b in 0..N {
                s += g[a][b] * u[a] * v[b];
            }
        }
        s
    };
    let mut vecs: Vec<[f64; N]> = Vec::with_capacity(N);
    for i in 0..N {
        let mut v = [0.0; N];
        v[i] = 1.0;
        for e in &vecs {
            let c = inner(&v, e);
            for a in 0..N {
                v[a] -= c * e[a];
            }
        }
        let n2 = inner(&v, &v);
        if !(n2 > 0.0) {
            return Err(Error::OutsideDomain(format!("metric not positive definite (norm^2 {n2:e})")));
        }
        let n = n2.sqrt();
        vecs.push(v.map(|c| c / n));
    }
    let mut frame = [[0.0; N]; N];
    for (i, e) in vecs.iter().enumerate() {
        for a in 0..N {
            frame[a][i] = e[a];
        }
    }
    Ok(frame)
}

/// Transforms a covariant 2-tensor to frame components.
pub fn to_frame2<const N: usize>(t: &T2<N>, e: &T2<N>) -> T2<N> {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut s = 0.0;
            for a in 0..N {
                for b in 0..N {
                    s += e[a][i] * e[b][j] * t[a][b];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// Transforms a covariant 4-tensor to frame components, one index at a time.
pub fn to_frame4<const N: usize>(t: &T4<N>, e: &T2<N>) -> T4<N> {
    let mut a1 = [[[[0.0; N]; N]; N]; N];
    for i in 0..N {
        for b in 0..N {
            for c in 0..N {
                for d in 0..N {
                    a1[i][b][c][d] = (0..N).map(|a| e[a][i] * t[a][b][c][d]).sum();
                }
            }
        }
    }
    let mut a2 = [[[[0.0; N]; N]; N]; N];
    for i in 0..N {
        for j in 0..N {
            for c in 0..N {
                for d in 0..N {
                    a2[i][j][c][d] = (0..N).map(|b| e[b][j] * a1[i][b][c][d]).sum();
                }
            }
        }
    }
    let mut a3 = [[[[0.0; N]; N]; N]; N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                for d in 0..N {
                    a3[i][j][k][d] = (0..N).map(|c| e[c][k] * a2[i][j][c][d]).sum();
                }
            }
        }
    }
    let mut out = [[[[0.0; N]; N]; N]; N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                for l in 0..N {
                    out[i][j][k][l] = (0..N).map(|d| e[d][l] * a3[i][j][k][d]).sum();
                }
            }
        }
    }
    out
}

/// Full curvature pipeline from exact first and second metric derivatives.
pub fn tensors<const N: usize>(gj: &[[Jet2; N]; N], active: &[Option<Var>; N]) -> Result<Tensors<N>> {
    let g: T2<N> = gj.map(|row| row.map(|j| j.value));
    let (det, inv) = det_inverse(&g);
    let g_inv = match inv {
        Some(inv) if det.abs() >= SINGULAR_DET && det.is_finite() => inv,
        _ => return Err(Error::SingularMetric(det)),
    };
    let d1 = |c: usize, a: usize, b: usize| active[c].map_or(0.0, |v| gj[a][b].d(v));
    let d2 = |c: usize, d: usize, a: usize, b: usize| match (active[c], active[d]) {
        (Some(u), Some(v)) => gj[a][b].dd(u, v),
        _ => 0.0,
    };

    // Connection coefficients of the first kind, then raised.
    let mut first = [[[0.0; N]; N]; N];
    for c in 0..N {
        for a in 0..N {
            for b in 0..N {
                first[c][a][b] = 0.5 * (d1(a, c, b) + d1(b, c, a) - d1(c, a, b));
            }
        }
    }
    let mut christoffel = [[[0.0; N]; N]; N];
    for k in 0..N {
        for a in 0..N {
            for b in 0..N {
                christoffel[k][a][b] = (0..N).map(|c| g_inv[k][c] * first[c][a][b]).sum();
            }
        }
    }

    let mut riemann = [[[[0.0; N]; N]; N]; N];
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                for d in 0..N {
                    let second = 0.5 * (d2(b, c, a, d) + d2(a, d, b, c) - d2(a, c, b, d) - d2(b, d, a, c));
                    let mut quad = 0.0;
                    for e in 0..N {
                        // g_ef G^f_ad = first[e][a][d]
                        quad += christoffel[e][b][c] * first[e][a][d] - christoffel[e][b][d] * first[e][a][c];
                    }
                    riemann[a][b][c][d] = second + quad;
                }
            }
        }
    }

    let mut ricci = [[0.0; N]; N];
    for b in 0..N {
        for d in 0..N {
            let mut s = 0.0;
            for a in 0..N {
                for c in 0..N {
                    s += g_inv[a][c] * riemann[a][b][c][d];
                }
            }
            ricci[b][d] = s;
        }
    }
    let mut scalar = 0.0;
    for b in 0..N {
        for d in 0..N {
            scalar += g_inv[b][d] * ricci[b][d];
        }
    }

    let frame = gram_schmidt(&g)?;
    let riemann_frame = to_frame4(&riemann, &frame);
    let ricci_frame = to_frame2(&ricci, &frame);
    Ok(Tensors { g, g_inv, christoffel, riemann, ricci, scalar, frame, riemann_frame, ricci_frame })
}

impl<const N: usize> Tensors<N> {
    /// Sum of squares of the frame components of the Riemann tensor.
    pub fn riemann_norm_sq(&self) -> f64 {
        sum_sq(&self.riemann_frame)
    }

    /// Sectional curvature and the largest deviation of the frame Riemann tensor from
    /// the constant-curvature form with that sectional curvature.
    pub fn constant_curvature_residual(&self) -> (f64, f64) {
        let n = N as f64;
        let k = self.scalar / (n * (n - 1.0));
        let mut res: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                for l in 0..N {
                    for m in 0..N {
                        let model = k * (delta(i, l) * delta(j, m) - delta(i, m) * delta(j, l));
                        res = res.max((self.riemann_frame[i][j][l][m] - model).abs());
                    }
                }
            }
        }
        (k, res)
    }
}

pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub fn sum_sq<const N: usize>(t: &T4<N>) -> f64 {
    t.iter().flatten().flatten().flatten().map(|v| v * v).sum()
}
