use einstein_lab::conformal::{boundary_interval, boundary_metric_at, classify_boundary_end, CirclePeriod};
use einstein_lab::curvature::{
    closed_form_riem_norm_sq, curvature_at, einstein_residual_of, tensors, type_d_split, ACTIVE_4D,
};
use einstein_lab::domain::{sample_admissible_point, Side};
use einstein_lab::regularity::{auto_periods, circle_ratio, cone_angle, smoothness_check, PeriodLattice};
use einstein_lab::rootlab::{carter_double_root_constraints, cmetric_region, roots};
use einstein_lab::volume::{weyl_density, weyl_l2, weyl_l2_uniform, L2Domain};
use einstein_lab::{metric_at, FamilyParams, Jet2, Quartic};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cmetric_inside() -> impl Strategy<Value = FamilyParams> {
    (0.05f64..20.0, 0.02f64..0.98).prop_filter_map("empty slice", |(mu, t)| {
        let s = mu.sqrt();
        let lo = (mu - 2.0 * s).max(-mu);
        let hi = (2.0 * s).min(2.0 * mu);
        (lo < hi).then(|| FamilyParams::cmetric(mu, lo + t * (hi - lo)))
    })
}

fn any_family() -> impl Strategy<Value = FamilyParams> {
    prop_oneof![
        cmetric_inside(),
        (-0.5f64..0.5, 0.2f64..2.0, -1.0f64..1.0, 0.2f64..2.0).prop_map(|(b, c, d, e)| FamilyParams::pd(1, b, c, d, e)),
        (-0.9f64..-0.2, -0.3f64..0.3, -0.05f64..0.2, 2.0f64..4.0)
            .prop_map(|(a1, a2, a3, a4)| FamilyParams::naked(a1, a2, a3, a4)),
        (0.3f64..1.0, 0.1f64..0.8, -0.5f64..0.5, -1.0f64..-0.1).prop_map(|(e, m, n, al)| FamilyParams::carter(e, m, n, al)),
    ]
}

fn sample(params: &FamilyParams, seed: u64) -> Option<(f64, f64)> {
    params.validate().ok()?;
    sample_admissible_point(params, &mut ChaCha8Rng::seed_from_u64(seed)).ok()
}

fn rational(x: Jet2, y: Jet2, k: [f64; 4]) -> Jet2 {
    let num = (x * y).scale(k[0]) + x.powi(3).scale(k[1]) - Jet2::constant(k[2]);
    let den = Jet2::constant(2.0) + (x - y.scale(k[3])).powi(2);
    num.checked_div(den).expect("denominator is at least 2") * (Jet2::constant(1.5) + x * x).sqrt()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jets_match_central_differences(x in -1.5f64..1.5, y in -1.5f64..1.5, k in prop::array::uniform4(-2.0f64..2.0)) {
        let j = rational(Jet2::x(x), Jet2::y(y), k);
        let f = |a: f64, b: f64| rational(Jet2::constant(a), Jet2::constant(b), k).value;
        let h = 1e-5;
        let fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
        let fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
        let gx = |a: f64, b: f64| rational(Jet2::x(a), Jet2::y(b), k).dx;
        let fxy = (gx(x, y + h) - gx(x, y - h)) / (2.0 * h);
        let fxx = (gx(x + h, y) - gx(x - h, y)) / (2.0 * h);
        prop_assert!(rel(j.dx, fx) < 1e-5 && rel(j.dy, fy) < 1e-5);
        prop_assert!(rel(j.dxy, fxy) < 1e-5 && rel(j.dxx, fxx) < 1e-5);
    }

    #[test]
    fn jet_arithmetic_commutes_and_associates(v in prop::array::uniform6(-3.0f64..3.0)) {
        let a = Jet2 { value: v[0], dx: v[1], dy: v[2], dxx: v[3], dxy: v[4], dyy: v[5] };
        let b = Jet2 { value: v[5], dx: v[4], dy: v[3], dxx: v[2], dxy: v[1], dyy: v[0] };
        let c = Jet2::x(v[2]) * Jet2::y(v[3]);
        let close = |p: Jet2, q: Jet2| {
            [p.value - q.value, p.dx - q.dx, p.dy - q.dy, p.dxx - q.dxx, p.dxy - q.dxy, p.dyy - q.dyy]
                .iter()
                .all(|d| d.abs() <= 1e-12 * 100.0)
        };
        prop_assert!(close(a + b, b + a) && close(a * b, b * a));
        prop_assert!(close((a + b) + c, a + (b + c)));
        prop_assert!(close((a * b) * c, a * (b * c)));
    }

    #[test]
    fn quartic_roots_are_recovered(
        base in prop::array::uniform4(-2.0f64..2.0),
        pattern in 0usize..5,
        lead in prop_oneof![-3.0f64..-0.3, 0.3f64..3.0],
    ) {
        let mut rs = base.to_vec();
        rs.sort_by(f64::total_cmp);
        prop_assume!(rs.windows(2).all(|w| w[1] - w[0] > 0.2));
        let groups: Vec<(f64, usize)> = match pattern {
            0 => rs.iter().map(|&r| (r, 1)).collect(),
            1 => vec![(rs[0], 2), (rs[1], 1), (rs[2], 1)],
            2 => vec![(rs[0], 2), (rs[2], 2)],
            3 => vec![(rs[1], 3), (rs[3], 1)],
            _ => vec![(rs[0], 1), (rs[2], 3)],
        };
        let mut q = Quartic::constant(lead);
        for &(r, m) in &groups {
            for _ in 0..m {
                q = q.checked_mul(&Quartic::linear_factor(r)).expect("degree stays at most four");
            }
        }
        let got = roots(&q).unwrap().real_roots();
        prop_assert_eq!(got.len(), groups.len());
        for ((r, m), (gr, gm)) in groups.iter().zip(&got) {
            prop_assert_eq!(m, gm);
            prop_assert!((r - gr).abs() < 1e-8, "{} vs {}", r, gr);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn metric_is_riemannian_and_einstein(params in any_family(), seed in 0u64..1000) {
        let Some(pt) = sample(&params, seed) else { return Err(TestCaseError::reject("no admissible point")) };
        let m = metric_at(&params, pt).unwrap();
        let g = m.values();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(g[i][j], g[j][i]);
            }
        }
        prop_assert!(m.eigenvalues()[0] > 0.0);
        let c = curvature_at(&m).unwrap();
        prop_assert!(einstein_residual_of(&c, -3.0) < 1e-8 * (c.riem_norm_sq / 24.0).sqrt().max(1.0));
        prop_assert!((c.riem_norm_sq - c.weyl_norm_sq - 24.0).abs() < 1e-7 * (c.riem_norm_sq / 24.0).max(1.0));
        if let Some(cf) = closed_form_riem_norm_sq(&params, pt).unwrap() {
            prop_assert!((c.riem_norm_sq - cf).abs() / cf < 1e-7);
        }
        for e in [c.weyl_sd_eigs, c.weyl_asd_eigs] {
            let (_, pair) = type_d_split(e);
            let scale = e.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            prop_assert!((pair[0] - pair[1]).abs() <= 1e-8 * scale.max(1e-4));
        }
    }

    #[test]
    fn rotating_volume_element(b in -0.5f64..0.5, c in 0.2f64..2.0, d in -1.0f64..1.0, e in 0.2f64..2.0, seed in 0u64..1000) {
        let params = FamilyParams::pd(1, b, c, d, e);
        let Some((x, y)) = sample(&params, seed) else { return Err(TestCaseError::reject("no admissible point")) };
        let det = metric_at(&params, (x, y)).unwrap().determinant();
        let ratio = det * (x - y).powi(8) / (x * x * y * y - 1.0).powi(2);
        prop_assert!((ratio - 1.0).abs() < 1e-8);
    }

    #[test]
    fn metric_depends_continuously_on_parameters(mu in 0.5f64..10.0, t in 0.1f64..0.9, seed in 0u64..1000) {
        let s = mu.sqrt();
        let (lo, hi) = ((mu - 2.0 * s).max(-mu), (2.0 * s).min(2.0 * mu));
        prop_assume!(lo < hi);
        let nu = lo + t * (hi - lo);
        let base = FamilyParams::cmetric(mu, nu);
        let Some(pt) = sample(&base, seed) else { return Err(TestCaseError::reject("no admissible point")) };
        let g0 = metric_at(&base, pt).unwrap().values();
        let diff = |d: f64| {
            let g = metric_at(&FamilyParams::cmetric(mu + d, nu), pt).unwrap().values();
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).fold(0.0f64, |m, (i, j)| m.max((g[i][j] - g0[i][j]).abs()))
        };
        let (d1, d2) = (diff(1e-6), diff(2e-6));
        if d1 > 1e-12 {
            prop_assert!((d2 / d1 - 2.0).abs() < 0.05);
        }
    }

    #[test]
    fn inside_region_has_one_complex_pair_each(params in cmetric_inside()) {
        let FamilyParams::CMetric(c) = params else { unreachable!() };
        prop_assume!(cmetric_region(c.mu, c.nu).unwrap().inside);
        let (p, q) = params.polynomials().unwrap();
        prop_assert_eq!(roots(&p).unwrap().upper_complex().len(), 1);
        prop_assert_eq!(roots(&q).unwrap().upper_complex().len(), 1);
    }

    #[test]
    fn boundary_metric_is_positive_definite(params in any_family(), t in 0.05f64..0.95) {
        prop_assume!(params.validate().is_ok());
        let Ok(iv) = boundary_interval(&params) else { return Err(TestCaseError::reject("no boundary interval")) };
        let x = iv.start + t * (iv.end - iv.start);
        prop_assume!(iv.cusps.iter().all(|c| (c - x).abs() > 1e-6));
        let m = boundary_metric_at(&params, x).unwrap();
        prop_assert!(m.eigenvalues()[0] > 0.0);
    }

    #[test]
    fn weyl_integrand_is_nonnegative(params in any_family(), seed in 0u64..1000) {
        let Some(pt) = sample(&params, seed) else { return Err(TestCaseError::reject("no admissible point")) };
        prop_assert!(weyl_density(&params, pt).unwrap() >= 0.0);
    }
}

#[test]
fn carter_constraints_match_direct_check() {
    let n = 200;
    for i in 0..n {
        for j in 0..n {
            let p3 = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
            let p4 = -3.0 + 6.0 * j as f64 / (n - 1) as f64;
            let direct = p3 < -(p3 + p4) / 2.0 && -(p3 + p4) / 2.0 < p4;
            match carter_double_root_constraints(p3, p4) {
                Ok(v) => assert_eq!(v, direct, "({p3}, {p4})"),
                Err(_) => assert!(p3 >= p4),
            }
        }
    }
}

#[test]
fn jet_riemann_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let families = [
        FamilyParams::cmetric(2.0, 1.0),
        FamilyParams::pd(1, 0.1, 1.0, 0.2, 0.8),
        FamilyParams::naked(-0.5, 0.1, 0.05, 3.0),
        FamilyParams::carter(0.7, 0.4, -0.3, -0.5),
    ];
    for k in 0..20 {
        let params = &families[k % 4];
        let (p, q) = params.polynomials().unwrap();
        let (x, y) = loop {
            let (x, y) = sample_admissible_point(params, &mut rng).unwrap();
            let clear = |t: f64, f: &Quartic| f.eval(t).abs() > 0.05 * f.magnitude_at(t);
            if clear(x, &p) && clear(y, &q) && (x - y).abs() > 0.05 && (x * x - y * y).abs() > 0.05 {
                break (x, y);
            }
        };
        let h = 1e-4;
        let g = |a: f64, b: f64| metric_at(params, (a, b)).unwrap().values();
        let mut gj = [[Jet2::ZERO; 4]; 4];
        let (c, xp, xm, yp, ym) = (g(x, y), g(x + h, y), g(x - h, y), g(x, y + h), g(x, y - h));
        let (pp, pm, mp, mm) = (g(x + h, y + h), g(x + h, y - h), g(x - h, y + h), g(x - h, y - h));
        for i in 0..4 {
            for j in 0..4 {
                gj[i][j] = Jet2 {
                    value: c[i][j],
                    dx: (xp[i][j] - xm[i][j]) / (2.0 * h),
                    dy: (yp[i][j] - ym[i][j]) / (2.0 * h),
                    dxx: (xp[i][j] - 2.0 * c[i][j] + xm[i][j]) / (h * h),
                    dxy: (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * h * h),
                    dyy: (yp[i][j] - 2.0 * c[i][j] + ym[i][j]) / (h * h),
                };
            }
        }
        let fd = tensors(&gj, &ACTIVE_4D).unwrap().riemann_norm_sq();
        let jet = curvature_at(&metric_at(params, (x, y)).unwrap()).unwrap().riem_norm_sq;
        assert!((fd - jet).abs() / jet < 1e-4, "{params:?} at ({x}, {y}): {fd} vs {jet}");
    }
}

#[test]
fn rotating_simple_eigenvalue_scaling() {
    let params = FamilyParams::pd(1, 0.1, 1.2, 0.3, 0.7);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for _ in 0..10 {
        let (x, y) = sample_admissible_point(&params, &mut rng).unwrap();
        let c = curvature_at(&metric_at(&params, (x, y)).unwrap()).unwrap();
        let s = (x - y).powi(3);
        let a = type_d_split(c.weyl_sd_eigs).0 * (1.0 + x * y).powi(3) / s;
        let b = type_d_split(c.weyl_asd_eigs).0 * (1.0 - x * y).powi(3) / s;
        plus.push(a);
        minus.push(b);
    }
    let spread = |v: &[f64]| {
        let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        v.iter().fold(0.0f64, |a, x| a.max((x.abs() - v[0].abs()).abs())) / m
    };
    let (sp, sm) = (spread(&plus), spread(&minus));
    assert!(sp < 1e-7 && sm < 1e-7, "{plus:?} {minus:?}");
}

#[test]
fn small_circles_see_prescribed_angles() {
    let params = FamilyParams::cmetric(1.0, 0.5);
    let smooth = auto_periods(&params, (-1.0, 0.0)).unwrap();
    assert!(smoothness_check(&params, (-1.0, 0.0), &smooth).unwrap());
    for (side, root, other) in [(Side::P, -1.0, -0.5), (Side::Q, 0.0, -0.5)] {
        let c = cone_angle(&params, root, side, &smooth).unwrap();
        let t = c.killing_period.unwrap();
        for r in [1e-2, 3e-3, 1e-3, 3e-4, 1e-4] {
            assert!((circle_ratio(&params, side, root, other, t, r).unwrap() - 1.0).abs() < 0.01);
        }
    }
    for beta in [0.3, 0.7, 1.6] {
        let c = cone_angle(&params, -1.0, Side::P, &smooth).unwrap();
        let lattice = PeriodLattice::rectangular(beta * c.required_period, 4.0 * std::f64::consts::PI / 1.5).unwrap();
        let t = cone_angle(&params, -1.0, Side::P, &lattice).unwrap().killing_period.unwrap();
        for r in [1e-2, 3e-3, 1e-3, 3e-4, 1e-4] {
            let ratio = circle_ratio(&params, Side::P, -1.0, -0.5, t, r).unwrap();
            assert!((ratio / beta - 1.0).abs() < 0.01, "beta {beta}, r {r}: {ratio}");
        }
    }
}

#[test]
fn smooth_bulk_gives_smooth_boundary() {
    for params in [FamilyParams::cmetric(1.0, 0.5), FamilyParams::cmetric(4.0, 2.0), FamilyParams::cmetric(0.5, 0.1)] {
        let l = auto_periods(&params, (-1.0, 0.0)).unwrap();
        assert!(smoothness_check(&params, (-1.0, 0.0), &l).unwrap());
        for e in [-1.0, 0.0] {
            let r = classify_boundary_end(&params, e, CirclePeriod::Auto).unwrap();
            assert_eq!(r.kind, einstein_lab::conformal::BoundaryEndKind::Smooth, "{params:?} at {e}");
        }
    }
}

#[test]
fn adaptive_estimate_brackets_finer_grid() {
    let cases = [
        (FamilyParams::pd(1, 0.0, 1.0, 0.0, 1.0), L2Domain::Triangle { x1: -0.9, y2: -0.1 }),
        (FamilyParams::naked(-0.5, 0.1, 0.0, 3.0), L2Domain::Triangle { x1: -0.5, y2: 0.9 }),
        (FamilyParams::carter(0.7, 0.4, -0.3, -0.5), L2Domain::Rectangle { x: (-0.3, 0.3), y: (1.2, 1.8) }),
    ];
    for (params, domain) in cases {
        let r = weyl_l2(&params, domain, (1.0, 1.0), 1e-6).unwrap();
        let n = 4 * (r.cells as f64).sqrt().ceil() as usize;
        let fine = weyl_l2_uniform(&params, domain, (1.0, 1.0), n).unwrap();
        assert!((r.value - fine).abs() <= 2.0 * r.error_estimate.max(1e-12), "{params:?}: {} vs {fine} ({:e})", r.value, r.error_estimate);
    }
}

#[test]
fn integrand_vanishes_quadratically_at_the_diagonal() {
    let params = FamilyParams::cmetric(4.0, 2.0);
    let ds: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
    let x = -0.5;
    let lx: Vec<f64> = ds.iter().map(|d| d.ln()).collect();
    let ly: Vec<f64> = ds.iter().map(|d| weyl_density(&params, (x, x + d)).unwrap().ln()).collect();
    let (slope, _) = einstein_lab::numeric::linear_fit(&lx, &ly);
    assert!((slope - 2.0).abs() < 0.1, "{slope}");
}

#[test]
fn family_params_round_trip_through_json() {
    for p in [
        FamilyParams::pd(1, 0.1, 1.0, 0.2, 0.8),
        FamilyParams::cmetric(16.0, 8.0),
        FamilyParams::carter(0.7, 0.4, -0.3, -0.5),
        FamilyParams::carter_roots(-1.0, 1.5, 0.01),
        FamilyParams::naked(-1.0, 0.0, 0.0, 1.0),
    ] {
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<FamilyParams>(&s).unwrap(), p);
    }
}
