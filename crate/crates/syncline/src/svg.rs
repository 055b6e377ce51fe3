//! Minimal log-log syncline plot: synchronization accuracy `1/τ` against
//! estimation accuracy `1/δ`, one polyline per curve, with the critical
//! synchronization accuracy and the roof marked.

use std::fmt::Write;

use syncline_core::syncline::SynclineCurve;

use crate::report::format_si;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub struct Series<'a> {
    pub label: &'a str,
    pub curve: &'a SynclineCurve,
}

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    /// Whole decades covering every finite positive value.
    fn fit(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>) -> Option<Axes> {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it
                .filter(|v| v.is_finite() && *v > 0.0)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.log10()), hi.max(v.log10())));
            if lo > hi {
                return None;
            }
            let (lo, hi) = (lo.floor(), hi.ceil());
            Some(if lo == hi { (lo - 1.0, hi + 1.0) } else { (lo, hi) })
        };
        let mut xs = xs;
        let mut ys = ys;
        Some(Axes { x: span(&mut xs)?, y: span(&mut ys)? })
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + (v.log10() - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v.log10() - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn syncline_svg(title: &str, series: &[Series]) -> String {
    let samples = || series.iter().flat_map(|s| s.curve.samples.iter());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let Some(axes) = Axes::fit(samples().map(|s| s.sync_accuracy), samples().map(|s| s.est_accuracy)) else {
        out.push_str("</svg>\n");
        return out;
    };
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);

    for k in axes.x.0 as i32..=axes.x.1 as i32 {
        let x = axes.px(10f64.powi(k));
        let _ = writeln!(out, r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="#ddd"/>"##);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{k}</text>"#, y0 + 18.0);
    }
    for k in axes.y.0 as i32..=axes.y.1 as i32 {
        let y = axes.py(10f64.powi(k));
        let _ = writeln!(out, r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/>"##);
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{k}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">Synchronization accuracy 1/τ [1/s]</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(22 {:.2}) rotate(-90)" text-anchor="middle">Estimation accuracy 1/δ [1/m]</text>"#,
        (y0 + y1) / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = s
            .curve
            .samples
            .iter()
            .filter(|p| p.sync_accuracy.is_finite() && p.sync_accuracy > 0.0 && p.est_accuracy > 0.0)
            .map(|p| format!("{:.2},{:.2}", axes.px(p.sync_accuracy), axes.py(p.est_accuracy)))
            .collect();
        let _ =
            writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, points.join(" "));

        let roof = s.curve.roof;
        if roof.is_finite() && roof > 0.0 {
            let y = axes.py(roof);
            let _ = writeln!(
                out,
                r#"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" text-anchor="end" fill="{color}">roof {}</text>"#,
                x1 - 4.0,
                y - 4.0,
                format_si(1.0 / roof, "m")
            );
        }
        let crit = 1.0 / s.curve.tau_crit;
        if crit.is_finite() && crit > 0.0 {
            let x = axes.px(crit);
            if (x0..=x1).contains(&x) {
                let _ = writeln!(
                    out,
                    r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="{color}" stroke-dasharray="2 3"/>"#
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{}" fill="{color}">τ_crit {}</text>"#,
                    x + 4.0,
                    y1 + 14.0 + 14.0 * i as f64,
                    format_si(s.curve.tau_crit, "s")
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            x0 + 10.0,
            y0 - 10.0 - 16.0 * (series.len() - 1 - i) as f64,
            escape(s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}
