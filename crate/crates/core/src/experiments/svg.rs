//! Minimal SVG line charts: axes, ticks at the data range ends, one polyline per series.

use std::fmt::Write as _;

use super::AsymptoticsReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
}

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub series: Vec<Series<'a>>,
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick_label(v: f64, scale: Scale) -> String {
    match scale {
        Scale::Linear => format!("{v:.4}"),
        Scale::Log => format!("1e{v:.2}"),
    }
}

impl Chart<'_> {
    pub fn render(&self) -> String {
        let mapped: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.points
                    .iter()
                    .filter_map(|&(x, y)| Some((self.x_scale.map(x)?, self.y_scale.map(y)?)))
                    .collect()
            })
            .collect();
        let (x0, x1) = range(mapped.iter().flatten().map(|p| p.0));
        let (y0, y1) = range(mapped.iter().flatten().map(|p| p.1));
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, self.title);
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            out,
            r#"<polyline points="{left},{top} {left},{bottom} {right},{bottom}" fill="none" stroke="black"/>"#
        );
        for (v, anchor) in [(x0, "start"), (x1, "end")] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}">{}</text>"#,
                px(v),
                bottom + 16.0,
                tick_label(v, self.x_scale)
            );
        }
        for v in [y0, y1] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                left - 4.0,
                py(v) + 4.0,
                tick_label(v, self.y_scale)
            );
        }
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 16.0, self.x_label);
        let _ = writeln!(
            out,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            HEIGHT / 2.0,
            self.y_label
        );
        for (i, (s, pts)) in self.series.iter().zip(&mapped).enumerate() {
            let color = COLORS[i % COLORS.len()];
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                coords.join(" ")
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
                right - 150.0,
                top + 16.0 * (i as f64 + 1.0),
                s.label
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Eigenvalues against the hole radius, log scale in `r`.
pub fn sigma_vs_r(rep: &AsymptoticsReport) -> String {
    let pts = |f: &dyn Fn(&super::RadiusRow) -> f64| rep.rows.iter().map(|r| (r.r, f(r))).collect::<Vec<_>>();
    Chart {
        title: "eigenvalues vs hole radius",
        x_label: "r",
        y_label: "sigma",
        x_scale: Scale::Log,
        y_scale: Scale::Linear,
        series: vec![
            Series { label: "sigma1", points: pts(&|r| r.sigma1) },
            Series { label: "sigma2", points: pts(&|r| r.sigma2()) },
            Series { label: "steklov sigma1", points: pts(&|_| rep.steklov_sigma1) },
            Series { label: "shell sigma1 (R_M)", points: pts(&|r| r.shell_sigma1_measure) },
            Series { label: "shell sigma2 (R_M)", points: pts(&|r| r.shell_sigma2_measure) },
        ],
    }
    .render()
}

/// Eigenvalue gap and eigenfunction errors against the hole radius, log–log.
pub fn error_vs_r(rep: &AsymptoticsReport) -> String {
    let pts = |f: &dyn Fn(&super::RadiusRow) -> f64| rep.rows.iter().map(|r| (r.r, f(r))).collect::<Vec<_>>();
    Chart {
        title: "errors vs hole radius",
        x_label: "r",
        y_label: "error",
        x_scale: Scale::Log,
        y_scale: Scale::Log,
        series: vec![
            Series { label: "|sigma2 - steklov sigma1|", points: pts(&|r| (r.sigma2() - rep.steklov_sigma1).abs()) },
            Series { label: "H1 error u1", points: pts(&|r| r.h1_error_u1) },
            Series { label: "H1 error u2", points: pts(&|r| r.h1_error_u2) },
        ],
    }
    .render()
}
