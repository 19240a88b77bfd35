//! Semi-log convergence plots written directly as SVG.

use std::fmt::Write as _;

use anyhow::{bail, Result};

use crate::history::{mean_curves, Row};

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 540.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const MAX_Y_TICKS: i64 = 10;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub name: String,
    pub mean: Vec<f64>,
    pub trials: Vec<Vec<f64>>,
}

/// Groups rows by strategy: mean curve plus the individual trial curves.
pub fn series_from_rows(rows: &[Row]) -> Vec<Series> {
    mean_curves(rows)
        .into_iter()
        .map(|(name, mean)| {
            let mut trials: Vec<Vec<f64>> = Vec::new();
            for r in rows.iter().filter(|r| r.strategy == name) {
                if trials.len() <= r.trial {
                    trials.resize(r.trial + 1, Vec::new());
                }
                let c = &mut trials[r.trial];
                if c.len() <= r.sweep {
                    c.resize(r.sweep + 1, 0.0);
                }
                c[r.sweep] = r.error_sq;
            }
            trials.retain(|c| !c.is_empty());
            Series { name, mean, trials }
        })
        .collect()
}

struct Frame {
    x_max: f64,
    y_min: i64,
    y_max: i64,
}

impl Frame {
    fn px(&self, sweep: f64) -> f64 {
        LEFT + (WIDTH - LEFT - RIGHT) * sweep / self.x_max
    }

    /// Values at or below zero are clipped to the bottom of the axis.
    fn py(&self, value: f64) -> f64 {
        let lo = self.y_min as f64;
        let v = if value > 0.0 { value.log10().max(lo) } else { lo };
        let t = (v - lo) / (self.y_max - self.y_min) as f64;
        HEIGHT - BOTTOM - (HEIGHT - TOP - BOTTOM) * t
    }
}

fn polyline(out: &mut String, frame: &Frame, values: &[f64], color: &str, width: f64, opacity: f64) {
    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| format!("{:.2},{:.2}", frame.px(k as f64), frame.py(v)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="{width:.1}" stroke-opacity="{opacity:.2}" points="{}"/>"#,
        points.join(" ")
    );
}

fn x_step(x_max: f64) -> usize {
    let raw = (x_max / 10.0).max(1.0);
    let mag = 10f64.powi(raw.log10().floor() as i32);
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    step as usize
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders a 960×540 SVG with `log10(error_sq)` over sweeps. Output bytes
/// depend only on the input.
pub fn render(series: &[Series], title: &str, show_trials: bool) -> Result<String> {
    if series.is_empty() || series.iter().all(|s| s.mean.is_empty()) {
        bail!("nothing to plot: no history rows");
    }
    let all = || {
        series
            .iter()
            .flat_map(|s| s.mean.iter().chain(s.trials.iter().flatten().filter(|_| show_trials)))
            .copied()
    };
    let positive_min = all().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
    let max = all().fold(0.0f64, f64::max);
    let (mut y_min, mut y_max) = if positive_min.is_finite() {
        (positive_min.log10().floor() as i64, max.log10().ceil() as i64)
    } else {
        (-1, 0)
    };
    if y_max <= y_min {
        y_max = y_min + 1;
    }
    let span = y_max - y_min;
    let y_step = ((span + MAX_Y_TICKS - 2) / (MAX_Y_TICKS - 1)).max(1);
    y_min = y_max - ((span + y_step - 1) / y_step) * y_step;
    let x_len = series.iter().map(|s| s.mean.len()).max().unwrap_or(1);
    let frame = Frame {
        x_max: (x_len.saturating_sub(1)).max(1) as f64,
        y_min,
        y_max,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );

    let (x0, x1) = (frame.px(0.0), frame.px(frame.x_max));
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let mut decade = y_min;
    while decade <= y_max {
        let y = frame.py(10f64.powi(decade as i32));
        let _ = writeln!(out, r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#dddddd"/>"##);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{decade}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
        decade += y_step;
    }
    let step = x_step(frame.x_max);
    let mut sweep = 0usize;
    while sweep as f64 <= frame.x_max {
        let x = frame.px(sweep as f64);
        let _ = writeln!(out, r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000000"/>"##, y0 + 5.0);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{sweep}</text>"#, y0 + 20.0);
        sweep += step;
    }
    let _ = writeln!(
        out,
        r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000"/>"##,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">sweep</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">squared energy error</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if show_trials {
            for t in &s.trials {
                polyline(&mut out, &frame, t, color, 0.6, 0.25);
            }
        }
        polyline(&mut out, &frame, &s.mean, color, 2.0, 1.0);
        let ly = TOP + 20.0 + 20.0 * idx as f64;
        let lx = WIDTH - RIGHT + 20.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2.0"/>"#,
            lx + 24.0
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&s.name));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(ratio: f64, len: usize) -> Series {
        let mean: Vec<f64> = (0..len).map(|k| ratio.powi(k as i32)).collect();
        Series {
            name: "g".into(),
            trials: vec![mean.clone()],
            mean,
        }
    }

    fn points(svg: &str) -> Vec<(f64, f64)> {
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let pts = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
        pts.split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn geometric_sequence_is_a_straight_line() {
        let svg = render(&[geometric(0.5, 21)], "t", false).unwrap();
        let pts = points(&svg);
        assert_eq!(pts.len(), 21);
        // y spans decades 1e-7..1e0 over the plot height.
        let per_decade = (HEIGHT - TOP - BOTTOM) / 7.0;
        for w in pts.windows(2) {
            let slope = (w[0].1 - w[1].1) / per_decade;
            assert!((slope - 0.5f64.log10()).abs() < 0.01 / per_decade + 1e-3, "{slope}");
        }
    }

    #[test]
    fn deterministic_and_single_polyline() {
        let s = [geometric(0.3, 10)];
        let a = render(&s, "run", false).unwrap();
        assert_eq!(a, render(&s, "run", false).unwrap());
        assert_eq!(a.matches("<polyline").count(), 1);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert_eq!(render(&s, "run", true).unwrap().matches("<polyline").count(), 2);
    }

    #[test]
    fn zeros_are_clipped_and_ticks_bounded() {
        let mean = vec![1e40, 1e-40, 0.0];
        let svg = render(
            &[Series {
                name: "z".into(),
                trials: vec![],
                mean,
            }],
            "",
            false,
        )
        .unwrap();
        let ticks = svg.lines().filter(|l| l.contains(r#"text-anchor="end""#)).count();
        assert!(ticks <= 10, "{ticks}");
        let pts = points(&svg);
        assert!((pts[2].1 - (HEIGHT - BOTTOM)).abs() < 1e-9);
        assert!(render(&[], "", false).is_err());
    }
}
