//! Minimal SVG line plot of density functions.

use std::fmt::Write;

use num_traits::ToPrimitive;
use pdens::{PiecewiseLinear, Rational};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Decimal with at most 12 significant digits, trailing zeros removed.
pub fn decimal(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let places = (11 - magnitude).max(0) as usize;
    let mut s = format!("{v:.places$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Overlaid polylines of `(k, ψ_k)`, each drawn from `t = 0` through its
/// corners and back to the axis.
pub fn render(functions: &[(usize, PiecewiseLinear)], title: &str) -> String {
    let x_max = functions
        .iter()
        .filter_map(|(_, f)| f.support_end().map(to_f64))
        .fold(0.0_f64, f64::max)
        .max(1e-9);
    let y_max = functions
        .iter()
        .map(|(_, f)| to_f64(&f.max_value()))
        .fold(0.0_f64, f64::max)
        .max(1e-9);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / x_max * plot_w;
    let sy = |y: f64| TOP + plot_h - y / y_max * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = decimal(WIDTH),
        h = decimal(HEIGHT)
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Axes with five ticks each.
    let (x0, y0, x1, y1) = (sx(0.0), sy(0.0), sx(x_max), sy(y_max));
    let _ = writeln!(
        out,
        r#"<g stroke="black" fill="none"><line x1="{a}" y1="{b}" x2="{c}" y2="{b}"/><line x1="{a}" y1="{b}" x2="{a}" y2="{d}"/></g>"#,
        a = decimal(x0),
        b = decimal(y0),
        c = decimal(x1),
        d = decimal(y1)
    );
    for i in 0..=4 {
        let fx = x_max * i as f64 / 4.0;
        let fy = y_max * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            decimal(sx(fx)),
            decimal(y0 + 16.0),
            decimal(fx)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            decimal(x0 - 6.0),
            decimal(sy(fy) + 4.0),
            decimal(fy)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">radius t</text>"#,
        decimal(LEFT + plot_w / 2.0),
        decimal(HEIGHT - 12.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{y}" text-anchor="middle" transform="rotate(-90 14 {y})">density ψ_k(t)</text>"#,
        y = decimal(TOP + plot_h / 2.0)
    );

    for (i, (k, f)) in functions.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut points = Vec::new();
        let corners = f.corners();
        if let Some(first) = corners.first() {
            if to_f64(&first.y) != 0.0 && to_f64(&first.x) > 0.0 {
                points.push((to_f64(&first.x), 0.0));
            }
        }
        points.extend(corners.iter().map(|c| (to_f64(&c.x), to_f64(&c.y))));
        if let Some(last) = corners.last() {
            if to_f64(&last.y) != 0.0 {
                points.push((to_f64(&last.x), 0.0));
            }
        }
        let path: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", decimal(sx(*x)), decimal(sy(*y))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = TOP + 16.0 * i as f64 + 8.0;
        let lx = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}">ψ_{k}</text>"#,
            decimal(lx),
            decimal(lx + 20.0),
            decimal(lx + 26.0),
            decimal(ly + 4.0),
            y = decimal(ly)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(decimal(2.0 / 3.0 * 100.0), "66.6666666667");
        assert_eq!(decimal(0.5), "0.5");
        assert_eq!(decimal(0.0), "0");
        assert_eq!(decimal(720.0), "720");
    }
}
