use std::fmt::Write as _;

use crate::rootlab::{BoundaryCurve, RegionSample};

const SIZE: f64 = 480.0;
const PAD: f64 = 40.0;

/// Points `[mu, nu]` of a bounding curve over `mu_range`.
pub fn curve_points(c: BoundaryCurve, mu_range: (f64, f64), n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            let mu = mu_range.0 + t * (mu_range.1 - mu_range.0);
            [mu, c.nu_at(mu)]
        })
        .collect()
}

/// Static plot of the region grid with the four bounding curves.
pub fn region_svg(grid: &[RegionSample], mr: (f64, f64), nr: (f64, f64)) -> String {
    let span = |r: (f64, f64)| if r.1 > r.0 { r.1 - r.0 } else { 1.0 };
    let sx = |mu: f64| PAD + (mu - mr.0) / span(mr) * (SIZE - 2.0 * PAD);
    let sy = |nu: f64| SIZE - PAD - (nu - nr.0) / span(nr) * (SIZE - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r#"<clipPath id="plot"><rect x="{PAD}" y="{PAD}" width="{w}" height="{w}"/></clipPath>"#, w = SIZE - 2.0 * PAD);
    for g in grid {
        let fill = if g.verdict.inside { "#9ecae1" } else { "#eeeeee" };
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{fill}"/>"#, sx(g.mu), sy(g.nu));
    }
    let colors = ["#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    for (c, color) in BoundaryCurve::ALL.iter().zip(colors) {
        let pts: Vec<String> =
            curve_points(*c, mr, 201).iter().map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
        let _ = writeln!(
            s,
            r#"<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            c.label()
        );
    }
    let _ = writeln!(s, r#"<rect x="{PAD}" y="{PAD}" width="{w}" height="{w}" fill="none" stroke="black"/>"#, w = SIZE - 2.0 * PAD);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">mu</text>"#, SIZE / 2.0, SIZE - 10.0);
    let _ = writeln!(s, r#"<text x="12" y="{}" font-size="12" text-anchor="middle">nu</text>"#, SIZE / 2.0);
    s.push_str("</svg>\n");
    s
}
