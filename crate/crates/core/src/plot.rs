//! Minimal SVG scatter plots of complex spectra.

use std::fmt::Write as _;

use crate::hamiltonian::BoundaryLabel;
use crate::linalg::C64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

pub fn color(label: &str) -> &'static str {
    match label.parse::<BoundaryLabel>() {
        Ok(BoundaryLabel::Pbc) => "#2ca02c",
        Ok(BoundaryLabel::XObc) => "#d62728",
        Ok(BoundaryLabel::YObc) => "#000000",
        Ok(BoundaryLabel::XyObc) => "#1f77b4",
        Err(_) => "#7f7f7f",
    }
}

/// One named point series.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<C64>,
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(mag * 10.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-12 * span {
        out.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    out
}

/// Scatter of `Re E` against `Im E`, series drawn in the given order with a
/// legend. Coordinates are printed with fixed precision.
pub fn svg_scatter(title: &str, series: &[Series<'_>]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = |a: f64, b: f64| {
        let d = ((b - a) * 0.05).max(1e-3);
        (a - d, b + d)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.1}" stroke="black"/>"#, bottom + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.1}" text-anchor="middle">{}</text>"#, bottom + 16.0, fmt_tick(t));
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/>"#, left - 4.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, y + 4.0, fmt_tick(t));
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">Re E</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">Im E</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for ser in series {
        let c = color(ser.label);
        let _ = writeln!(s, r#"<g fill="{c}" fill-opacity="0.7">"#);
        for p in &ser.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.6"/>"#, sx(p.re), sy(p.im));
        }
        let _ = writeln!(s, "</g>");
    }
    for (i, ser) in series.iter().enumerate() {
        let y = top + 14.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{y:.1}" r="4" fill="{}"/>"#, right - 70.0, color(ser.label));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, right - 60.0, y + 4.0, escape(ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(t: f64) -> String {
    let s = format!("{t:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Groups points by label, in plotting order for boundary labels and first
/// appearance for anything else.
pub fn group_by_label<'a>(rows: impl IntoIterator<Item = (&'a str, C64)>) -> Vec<(String, Vec<C64>)> {
    let mut groups: Vec<(String, Vec<C64>)> = Vec::new();
    for (label, p) in rows {
        match groups.iter_mut().find(|g| g.0 == label) {
            Some(g) => g.1.push(p),
            None => groups.push((label.to_string(), vec![p])),
        }
    }
    let rank = |l: &str| l.parse::<BoundaryLabel>().map(|b| b as usize).unwrap_or(usize::MAX);
    groups.sort_by_key(|g| rank(&g.0));
    groups
}
