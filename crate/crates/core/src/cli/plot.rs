use std::fmt::Write as _;

use crate::fitting::DecayFit;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 45.0;

/// Minimal SVG of the measured means and the fitted curve.
pub fn decay_svg(lengths: &[usize], means: &[f64], fit: Option<&DecayFit>, log_y: bool) -> String {
    let jmin = *lengths.iter().min().unwrap_or(&1) as f64;
    let jmax = (*lengths.iter().max().unwrap_or(&2) as f64).max(jmin + 1.0);
    let mut ys: Vec<f64> = means.to_vec();
    if let Some(f) = fit {
        ys.extend(lengths.iter().map(|&j| f.model(j)));
    }
    let tf = |y: f64| if log_y { y.max(1e-6).log10() } else { y };
    let (mut ylo, mut yhi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(tf(y)), b.max(tf(y))));
    if !(yhi - ylo > 1e-9) {
        ylo -= 0.05;
        yhi += 0.05;
    }
    let pad = 0.05 * (yhi - ylo);
    let (ylo, yhi) = (ylo - pad, yhi + pad);
    let sx = |j: f64| LEFT + (j - jmin) / (jmax - jmin) * (W - LEFT - RIGHT);
    let sy = |y: f64| TOP + (yhi - tf(y)) / (yhi - ylo) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (x0, y0, x1, y1) = (LEFT, H - BOTTOM, W - RIGHT, TOP);
    let _ = writeln!(s, r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#);
    for k in 0..=4 {
        let v = ylo + (yhi - ylo) * k as f64 / 4.0;
        let py = TOP + (yhi - v) / (yhi - ylo) * (H - TOP - BOTTOM);
        let label = if log_y { 10f64.powf(v) } else { v };
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{label:.3}</text>"#, LEFT - 6.0, py + 4.0);
    }
    for k in 0..=4 {
        let j = jmin + (jmax - jmin) * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{j:.0}</text>"#, sx(j), H - BOTTOM + 18.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">sequence length</text>"#, (LEFT + W - RIGHT) / 2.0, H - 6.0);
    if let Some(f) = fit {
        let steps = 200;
        let pts: Vec<String> = (0..=steps)
            .map(|k| {
                let j = jmin + (jmax - jmin) * k as f64 / steps as f64;
                let y = f.a0 * f.p.powf(j - 1.0) + f.b0;
                format!("{:.2},{:.2}", sx(j), sy(y))
            })
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, pts.join(" "));
    }
    for (&j, &y) in lengths.iter().zip(means) {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="firebrick"/>"#, sx(j as f64), sy(y));
    }
    s.push_str("</svg>\n");
    s
}
