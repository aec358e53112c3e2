use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::args::*;
use super::{svg, SCHEMA};
use crate::conformal::{
    boundary_curvature_residual, boundary_interval, boundary_metric_at, classify_boundary_end, degeneration_path,
    BoundaryInterval, CirclePeriod, DegenerationPath,
};
use crate::curvature::{closed_form_riem_norm_sq, closed_form_weyl_norm_sq, curvature_at, einstein_residual_of, type_d_split};
use crate::domain::{sample_admissible_point, Side};
use crate::error::{Error, Result};
use crate::numeric::logspace;
use crate::polyfam::{metric_at, Chart, FamilyParams};
use crate::regularity::{auto_periods, classify_bulk_end, neck_profile, NeckPath, PeriodLattice};
use crate::rootlab::{cmetric_region, region_grid, roots, BoundaryCurve};
use crate::volume::{weyl_l2_with, L2Domain, QuadratureOptions};

/// Relative tolerance of the closed-form curvature cross-check.
pub const CLOSED_FORM_TOL: f64 = 1e-7;

pub struct Reply {
    pub text: String,
    pub code: i32,
}

fn ok(text: String) -> Reply {
    Reply { text, code: 0 }
}

fn envelope(command: &str, mut body: Value) -> Value {
    if let Value::Object(m) = &mut body {
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(command));
    }
    body
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn only_json(o: &OutputArgs, command: &str) -> Result<()> {
    match o.format {
        None | Some(Format::Json) => Ok(()),
        Some(f) => Err(Error::InvalidParams(format!("{command} supports only --format json, got {f:?}"))),
    }
}

fn json_reply(o: &OutputArgs, command: &str, body: Value) -> Result<(Reply, Option<String>)> {
    only_json(o, command)?;
    Ok((ok(render_json(&envelope(command, body))), o.out.clone()))
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn dispatch(cmd: &Command) -> Result<(Reply, Option<String>)> {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Curvature(a) => curvature(a),
        Command::Roots(a) => root_structure(a),
        Command::Region(a) => region(a),
        Command::Classify(a) => classify(a),
        Command::Sweep(a) => sweep(a),
        Command::Boundary(a) => boundary(a),
        Command::WeylL2(a) => weyl(a),
    }
}

fn verify(a: &VerifyArgs) -> Result<(Reply, Option<String>)> {
    only_json(&a.output, "verify")?;
    let params = a.family.resolve()?;
    if !(a.tol > 0.0) || a.samples == 0 {
        return Err(Error::InvalidParams("need --tol > 0 and -n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let points: Vec<(f64, f64)> =
        (0..a.samples).map(|_| sample_admissible_point(&params, &mut rng)).collect::<Result<_>>()?;
    let rows: Vec<(f64, f64, f64, Option<f64>)> = points
        .par_iter()
        .map(|&pt| {
            let c = curvature_at(&metric_at(&params, pt)?)?;
            let res = einstein_residual_of(&c, a.lambda);
            let cf = closed_form_riem_norm_sq(&params, pt)?.map(|v| (c.riem_norm_sq - v).abs() / v.abs());
            Ok((pt.0, pt.1, res, cf))
        })
        .collect::<Result<_>>()?;
    let max_res = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let max_cf = rows.iter().filter_map(|r| r.3).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let pass = max_res < a.tol && max_cf.map_or(true, |v| v < CLOSED_FORM_TOL);
    let body = json!({
        "family": params,
        "lambda": a.lambda,
        "tol": a.tol,
        "seed": a.seed,
        "samples": a.samples,
        "max_residual": max_res,
        "max_closed_form_rel_error": max_cf,
        "pass": pass,
        "points": rows.iter().map(|r| json!({"x": r.0, "y": r.1, "residual": r.2, "closed_form_rel_error": r.3})).collect::<Vec<_>>(),
    });
    Ok((Reply { text: render_json(&envelope("verify", body)), code: if pass { 0 } else { 1 } }, a.output.out.clone()))
}

fn parse_point(s: &str) -> Result<(f64, f64)> {
    let v = parse_list(s, Some(2))?;
    Ok((v[0], v[1]))
}

fn curvature(a: &PointArgs) -> Result<(Reply, Option<String>)> {
    let params = a.family.resolve()?;
    let pt = parse_point(&a.point)?;
    let m = metric_at(&params, pt)?;
    let c = curvature_at(&m)?;
    let body = json!({
        "family": params,
        "point": [pt.0, pt.1],
        "metric_eigenvalues": m.eigenvalues(),
        "scalar": c.scalar,
        "riem_norm_sq": c.riem_norm_sq,
        "weyl_norm_sq": c.weyl_norm_sq,
        "closed_form_riem_norm_sq": closed_form_riem_norm_sq(&params, pt)?,
        "closed_form_weyl_norm_sq": closed_form_weyl_norm_sq(&params, pt)?,
        "einstein_residual": einstein_residual_of(&c, a.lambda),
        "lambda": a.lambda,
        "weyl_selfdual_eigenvalues": c.weyl_sd_eigs,
        "weyl_antiselfdual_eigenvalues": c.weyl_asd_eigs,
        "weyl_selfdual_simple": type_d_split(c.weyl_sd_eigs).0,
        "weyl_antiselfdual_simple": type_d_split(c.weyl_asd_eigs).0,
    });
    json_reply(&a.output, "curvature", body)
}

fn root_structure(a: &FamilyOnly) -> Result<(Reply, Option<String>)> {
    let params = a.family.resolve()?;
    let (p, q) = params.polynomials()?;
    let body = json!({
        "family": params,
        "p": {"coefficients": p.coeffs, "roots": roots(&p)?},
        "q": {"coefficients": q.coeffs, "roots": roots(&q)?},
    });
    json_reply(&a.output, "roots", body)
}

fn region(a: &RegionArgs) -> Result<(Reply, Option<String>)> {
    if let Some(pt) = &a.point {
        let (mu, nu) = parse_point(pt)?;
        let v = cmetric_region(mu, nu)?;
        return json_reply(&a.output, "region", json!({"mu": mu, "nu": nu, "verdict": v}));
    }
    let mr = parse_list(&a.mu_range, Some(2))?;
    let nr = parse_list(&a.nu_range, Some(2))?;
    let (mr, nr) = ((mr[0], mr[1]), (nr[0], nr[1]));
    if !(mr.0 >= 0.0 && mr.0 <= mr.1 && nr.0 <= nr.1) {
        return Err(Error::InvalidParams(format!("invalid ranges mu {mr:?}, nu {nr:?}")));
    }
    let grid = region_grid(mr, nr, a.steps)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("mu,nu,inside,nearest_curve,distance\n");
            for g in &grid {
                let v = &g.verdict;
                let _ = writeln!(s, "{},{},{},{},{}", g.mu, g.nu, v.inside, v.nearest_curve.label(), v.distance_to_boundary);
            }
            s
        }
        Format::Json => {
            let curves: Vec<Value> = BoundaryCurve::ALL
                .iter()
                .map(|c| json!({"curve": c.label(), "points": svg::curve_points(*c, mr, 101)}))
                .collect();
            render_json(&envelope(
                "region",
                json!({"mu_range": [mr.0, mr.1], "nu_range": [nr.0, nr.1], "steps": a.steps, "curves": curves, "grid": grid}),
            ))
        }
        Format::Svg => svg::region_svg(&grid, mr, nr),
    };
    Ok((ok(text), a.output.out.clone()))
}

fn lattice_for(p: &PeriodArgs, params: &FamilyParams, interval: Option<(f64, f64)>) -> Result<Option<PeriodLattice>> {
    match (p.auto_periods, p.period_phi, p.period_psi) {
        (true, None, None) => {
            let iv = interval.ok_or_else(|| Error::InvalidParams("--auto-periods needs a bulk rectangle".into()))?;
            auto_periods(params, iv).map(Some)
        }
        (false, Some(f), Some(s)) => PeriodLattice::rectangular(f, s).map(Some),
        (false, None, None) => Ok(None),
        _ => Err(Error::InvalidParams(
            "give either --auto-periods or both --period-phi and --period-psi".into(),
        )),
    }
}

/// Bulk ends: in the toric chart the root of `P` opening each region and the root of `Q`
/// closing it; in the Carter chart the roots of `P` in the interval and the largest root of `Q`.
fn bulk_roots(params: &FamilyParams, iv: &BoundaryInterval) -> Result<Vec<(f64, Side, usize)>> {
    let (p, q) = params.polynomials()?;
    let (rp, rq) = (roots(&p)?, roots(&q)?);
    let tol = |t: f64| 1e-6 * (1.0 + t.abs());
    let mut edges = vec![iv.start];
    edges.extend(&iv.cusps);
    edges.push(iv.end);
    let mut out = Vec::new();
    match params.chart() {
        Chart::Toric => {
            for w in edges.windows(2) {
                let mp = rp.multiplicity_at(w[0], tol(w[0]));
                if mp > 0 {
                    out.push((w[0], Side::P, mp));
                }
                let mq = rq.multiplicity_at(w[1], tol(w[1]));
                if mq > 0 {
                    out.push((w[1], Side::Q, mq));
                }
            }
        }
        Chart::Carter => {
            for (t, m) in rp.real_roots() {
                if t >= iv.start - tol(t) && t <= iv.end + tol(t) {
                    out.push((t, Side::P, m));
                }
            }
            if let Some(&t) = rq.real_roots_sorted.last() {
                out.push((t, Side::Q, rq.multiplicity_at(t, tol(t))));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn classify(a: &ClassifyArgs) -> Result<(Reply, Option<String>)> {
    let params = a.family.resolve()?;
    let (p, q) = params.polynomials()?;
    let iv = boundary_interval(&params)?;
    let rect = (iv.start, iv.end);
    let lattice = lattice_for(&a.periods, &params, Some(rect))?;
    let bulk: Vec<Value> = bulk_roots(&params, &iv)?
        .into_iter()
        .map(|(t, side, m)| match classify_bulk_end(&params, t, side, lattice.as_ref()) {
            Ok(r) => serde_json::to_value(r).expect("reports serialize"),
            Err(e) => json!({"location": t, "side": side, "multiplicity": m, "error": e.kind(), "message": e.to_string()}),
        })
        .collect();
    let mut points = vec![iv.start];
    points.extend(&iv.cusps);
    points.push(iv.end);
    let boundary: Vec<Value> = points
        .par_iter()
        .map(|&e| match classify_boundary_end(&params, e, CirclePeriod::Auto) {
            Ok(r) => serde_json::to_value(r).expect("reports serialize"),
            Err(err) => json!({"endpoint": e, "error": err.kind(), "message": err.to_string()}),
        })
        .collect();
    let body = json!({
        "family": params,
        "roots": {"p": roots(&p)?, "q": roots(&q)?},
        "interval": iv,
        "regions": iv.regions,
        "lattice": lattice,
        "bulk_ends": bulk,
        "boundary_ends": boundary,
    });
    json_reply(&a.output, "classify", body)
}

fn sweep_values(a: &SweepArgs, default: &[f64]) -> Result<Vec<f64>> {
    match (&a.values, a.samples, a.from, a.to) {
        (Some(v), None, None, None) => parse_list(v, None),
        (None, Some(n), Some(f), Some(t)) => {
            if f * t <= 0.0 {
                return Err(Error::InvalidParams("--from and --to must be nonzero with the same sign".into()));
            }
            let s = f.signum();
            Ok(logspace(f.abs(), t.abs(), n).into_iter().map(|v| s * v).collect())
        }
        (None, None, None, None) => Ok(default.to_vec()),
        _ => Err(Error::InvalidParams("give either --values or all of -n, --from, --to".into())),
    }
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParams(format!("--{name} is required for this path")))
}

fn sweep(a: &SweepArgs) -> Result<(Reply, Option<String>)> {
    let f = &a.family;
    let neck = match a.path {
        PathName::NeckCmetric => Some(NeckPath::CmetricUpper { mu: need(f.mu, "mu")? }),
        PathName::NeckCarter => Some(NeckPath::CarterRoots { p3: need(f.p3, "p3")?, p4: need(f.p4, "p4")? }),
        PathName::NeckNaked => Some(NeckPath::Naked {
            alpha1: need(f.alpha1, "alpha1")?,
            alpha2: need(f.alpha2, "alpha2")?,
            alpha4: need(f.alpha4, "alpha4")?,
        }),
        _ => None,
    };
    let format = a.output.format.unwrap_or(Format::Csv);
    if format == Format::Svg {
        return Err(Error::InvalidParams("sweep supports --format csv or json".into()));
    }
    if let Some(path) = neck {
        if a.weyl_l2 {
            return Err(Error::InvalidParams("--weyl-l2 applies to degeneration paths".into()));
        }
        let values = sweep_values(a, &[0.02, 0.01, 0.005, 0.0025])?;
        let samples = neck_profile(&path, &values)?;
        let text = match format {
            Format::Json => render_json(&envelope("sweep", json!({"path": path, "samples": samples}))),
            _ => {
                let mut s = String::from("eps,center,location,min_circumference,circumference_minus_eps,circumference_plus_eps\n");
                for n in &samples {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        n.eps,
                        n.center,
                        n.location,
                        n.min_circumference,
                        n.offset_circumference[0],
                        n.offset_circumference[1]
                    );
                }
                s
            }
        };
        return Ok((ok(text), a.output.out.clone()));
    }
    let (alpha1, alpha4) = (need(f.alpha1, "alpha1")?, need(f.alpha4, "alpha4")?);
    let (path, default): (DegenerationPath, &[f64]) = match a.path {
        PathName::SmoothToNaked => (DegenerationPath::SmoothToNaked { alpha1, alpha4 }, &[0.1, 0.01, 0.001, 0.0]),
        PathName::ConeToNaked => (DegenerationPath::ConeToNaked { alpha1, alpha4 }, &[-0.1, -0.01, -0.001, -1e-4]),
        PathName::ConeToNakedAtInfinity => {
            (DegenerationPath::ConeToNakedAtInfinity { alpha1, alpha4 }, &[-0.1, -0.01, -0.001, -1e-4])
        }
        _ => (DegenerationPath::CuspToNaked { alpha1, alpha4 }, &[0.1, 0.01, 0.001]),
    };
    let values = sweep_values(a, default)?;
    let samples = degeneration_path(&path, &values)?;
    let weyl: Vec<Option<(f64, f64)>> = if a.weyl_l2 {
        let (pf, ps) = match (a.periods.period_phi, a.periods.period_psi, a.periods.auto_periods) {
            (Some(x), Some(y), false) => (x, y),
            _ => {
                return Err(Error::InvalidParams("--weyl-l2 needs --period-phi and --period-psi".into()));
            }
        };
        let opts = QuadratureOptions { abs_tol: 0.0, rel_tol: a.tol, ..Default::default() };
        samples
            .iter()
            .map(|s| {
                let r = weyl_l2_with(&s.params, L2Domain::Triangle { x1: alpha1, y2: s.right_end }, (pf, ps), &opts)?;
                Ok(Some((r.value, r.error_estimate)))
            })
            .collect::<Result<_>>()?
    } else {
        vec![None; samples.len()]
    };
    let text = match format {
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .zip(&weyl)
                .map(|(s, w)| {
                    let mut v = serde_json::to_value(s).expect("samples serialize");
                    if let (Some((val, err)), Value::Object(m)) = (w, &mut v) {
                        m.insert("weyl_l2".into(), json!({"value": val, "error_estimate": err}));
                    }
                    v
                })
                .collect();
            render_json(&envelope("sweep", json!({"path": path, "samples": rows})))
        }
        _ => {
            let mut s = String::from(
                "value,right_end,boundary_kind,fitted_exponent,model_exponent,cone_angle,bulk_kind,weyl_l2,weyl_l2_error\n",
            );
            for (x, w) in samples.iter().zip(&weyl) {
                let b = &x.boundary;
                let kind = serde_json::to_value(b.kind).expect("kind serializes");
                let bulk = x.bulk.as_ref().map(|r| serde_json::to_value(r.kind).expect("kind serializes"));
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    x.value,
                    x.right_end,
                    kind.as_str().unwrap_or_default(),
                    num(b.fitted_exponent),
                    num(b.model_exponent),
                    opt(b.angle),
                    bulk.as_ref().and_then(|k| k.as_str()).unwrap_or_default(),
                    opt(w.map(|w| w.0)),
                    opt(w.map(|w| w.1)),
                );
            }
            s
        }
    };
    Ok((ok(text), a.output.out.clone()))
}

fn boundary(a: &BoundaryArgs) -> Result<(Reply, Option<String>)> {
    let params = a.family.resolve()?;
    let period = match a.circle_period {
        Some(t) if t > 0.0 => CirclePeriod::Fixed(t),
        Some(t) => return Err(Error::InvalidParams(format!("circle period must be positive, got {t}"))),
        None => CirclePeriod::Auto,
    };
    let body = match (a.x, a.endpoint) {
        (Some(x), None) => {
            let m = boundary_metric_at(&params, x)?;
            let (k, res) = boundary_curvature_residual(&params, x)?;
            json!({"family": params, "x": x, "metric": m.values(), "eigenvalues": m.eigenvalues(),
                   "sectional_curvature": k, "constant_curvature_residual": res})
        }
        (None, Some(e)) => json!({"family": params, "end": classify_boundary_end(&params, e, period)?}),
        (None, None) => {
            let iv = boundary_interval(&params)?;
            let mut pts = vec![iv.start];
            pts.extend(&iv.cusps);
            pts.push(iv.end);
            let ends = pts.par_iter().map(|&e| classify_boundary_end(&params, e, period)).collect::<Result<Vec<_>>>()?;
            json!({"family": params, "interval": iv, "ends": ends})
        }
        _ => return Err(Error::InvalidParams("give at most one of --x and --endpoint".into())),
    };
    json_reply(&a.output, "boundary", body)
}

fn weyl(a: &WeylArgs) -> Result<(Reply, Option<String>)> {
    let params = a.family.resolve()?;
    let domain = match (&a.triangle, &a.rect) {
        (Some(t), None) => {
            let v = parse_list(t, Some(2))?;
            L2Domain::Triangle { x1: v[0], y2: v[1] }
        }
        (None, Some(r)) => {
            let v = parse_list(r, Some(4))?;
            L2Domain::Rectangle { x: (v[0], v[1]), y: (v[2], v[3]) }
        }
        (None, None) if params.chart() == Chart::Toric => {
            let iv = boundary_interval(&params)?;
            L2Domain::Triangle { x1: iv.start, y2: iv.end }
        }
        (None, None) => return Err(Error::InvalidParams("--rect is required for the Carter chart".into())),
        _ => return Err(Error::InvalidParams("give at most one of --triangle and --rect".into())),
    };
    let interval = match domain {
        L2Domain::Triangle { x1, y2 } => Some((x1, y2)),
        L2Domain::Rectangle { .. } => None,
    };
    let lattice = lattice_for(&a.periods, &params, interval)?
        .ok_or_else(|| Error::InvalidParams("give --auto-periods or both --period-phi and --period-psi".into()))?;
    let opts = QuadratureOptions { abs_tol: a.tol, rel_tol: 0.0, max_cells: a.max_cells };
    let r = weyl_l2_with(&params, domain, (lattice.area(), 1.0), &opts)?;
    json_reply(
        &a.output,
        "weyl-l2",
        json!({"family": params, "domain": domain, "torus_area": lattice.area(), "tol": a.tol, "result": r}),
    )
}
