use std::fmt::Write;

use crate::transport::ConvergenceReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;

/// Line plot of `C_k` against `N_k` (logarithmic abscissa) with a dashed
/// reference line at `-1/d`. Undefined rates break the line.
pub fn rates_svg(report: &ConvergenceReport) -> String {
    let target = report.target_rate();
    let points: Vec<(f64, Option<f64>)> = report
        .rates
        .iter()
        .enumerate()
        .map(|(j, c)| (report.levels[j + 1] as f64, *c))
        .collect();
    let (mut lo, mut hi) = (target - 0.5, target + 0.5);
    for c in points.iter().filter_map(|p| p.1) {
        lo = lo.min(c);
        hi = hi.max(c);
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let (x0, x1) = match (points.first(), points.last()) {
        (Some(a), Some(b)) if b.0 > a.0 => (a.0.ln(), b.0.ln()),
        (Some(a), _) => (a.0.ln() - 1.0, a.0.ln() + 1.0),
        _ => (0.0, 1.0),
    };
    let sx = |n: f64| MARGIN + (n.ln() - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |c: f64| HEIGHT - MARGIN - (c - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} V{bottom} H{right}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let c = lo + (hi - lo) * k as f64 / 4.0;
        let y = sy(c);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{c:.2}</text>"#,
            left - 6.0,
            y + 4.0
        );
    }
    for &(n, _) in &points {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{n}</text>"#,
            sx(n),
            bottom + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">N</text>"#,
        0.5 * (left + right),
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">C</text>"#,
        0.5 * (top + bottom),
        0.5 * (top + bottom)
    );
    let yt = sy(target);
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{yt:.1}" x2="{right}" y2="{yt:.1}" stroke="gray" stroke-dasharray="6 4"/>"#
    );
    let mut path = String::new();
    let mut pen_down = false;
    for &(n, c) in &points {
        match c {
            Some(c) => {
                let _ = write!(path, "{}{:.1} {:.1} ", if pen_down { "L" } else { "M" }, sx(n), sy(c));
                pen_down = true;
            }
            None => pen_down = false,
        }
    }
    if !path.is_empty() {
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="black"/>"#, path.trim_end());
    }
    for &(n, c) in &points {
        if let Some(c) = c {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3"/>"#, sx(n), sy(c));
        }
    }
    s.push_str("</svg>\n");
    s
}
