//! Minimal static SVG line plots, one series per file. Output depends only
//! on the data, so plots are as reproducible as the CSVs they mirror.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    fn map(self, v: f64) -> Option<f64> {
        match self {
            Scale::Linear => v.is_finite().then_some(v),
            Scale::Log => (v > 0.0 && v.is_finite()).then(|| v.log10()),
        }
    }

    fn unmap(self, v: f64) -> f64 {
        match self {
            Scale::Linear => v,
            Scale::Log => 10f64.powf(v),
        }
    }
}

pub struct LinePlot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x_scale: Scale,
    pub y_scale: Scale,
}

impl LinePlot<'_> {
    pub fn linear<'a>(title: &'a str, x_label: &'a str, y_label: &'a str) -> LinePlot<'a> {
        LinePlot { title, x_label, y_label, x_scale: Scale::Linear, y_scale: Scale::Linear }
    }

    pub fn log_y(self) -> Self {
        Self { y_scale: Scale::Log, ..self }
    }

    pub fn log_log(self) -> Self {
        Self { x_scale: Scale::Log, y_scale: Scale::Log, ..self }
    }

    /// Points that cannot be shown on the chosen scales are dropped.
    pub fn render(&self, xs: &[f64], ys: &[f64]) -> String {
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .zip(ys)
            .filter_map(|(&x, &y)| Some((self.x_scale.map(x)?, self.y_scale.map(y)?)))
            .collect();
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(self.title));
        let (x0, x1) = span(pts.iter().map(|p| p.0));
        let (y0, y1) = span(pts.iter().map(|p| p.1));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let (tx, ty) = (px(xv), py(yv));
            let _ = writeln!(svg, r#"<line x1="{tx:.2}" y1="{}" x2="{tx:.2}" y2="{}" stroke="black"/>"#, TOP + plot_h, TOP + plot_h + 5.0);
            let _ = writeln!(
                svg,
                r#"<text x="{tx:.2}" y="{}" text-anchor="middle">{}</text>"#,
                TOP + plot_h + 18.0,
                tick_label(self.x_scale.unmap(xv))
            );
            let _ = writeln!(svg, r#"<line x1="{}" y1="{ty:.2}" x2="{LEFT}" y2="{ty:.2}" stroke="black"/>"#, LEFT - 5.0);
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 8.0,
                ty + 4.0,
                tick_label(self.y_scale.unmap(yv))
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 10.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            TOP + plot_h / 2.0,
            escape(self.y_label)
        );
        if !pts.is_empty() {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(svg, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#, path.join(" "));
            for &(x, y) in &pts {
                let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#, px(x), py(y));
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Data range padded so that constant series still get a nonempty axis.
fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * lo.abs().max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_polyline() {
        let svg = LinePlot::linear("mass", "t", "mass").render(&[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn log_scale_drops_nonpositive_points() {
        let svg = LinePlot::linear("d", "k", "d").log_y().render(&[1.0, 2.0, 3.0], &[1.0, 0.0, 0.1]);
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn empty_series_still_renders_axes() {
        let svg = LinePlot::linear("x < y", "a", "b").render(&[], &[]);
        assert!(svg.contains("x &lt; y"));
        assert!(!svg.contains("<polyline"));
    }
}
