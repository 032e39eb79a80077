//! Minimal deterministic SVG 1.1 plot writer.
//!
//! Produces fully self-contained documents: inline styling only, no
//! scripts, external references, or fonts beyond generic families. All
//! coordinates are formatted with fixed precision so identical inputs
//! always render byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Default palette cycled through by consecutive series.
pub const PALETTE: [&str; 6] = [
    "#1f6fb2", "#c23b22", "#2e8540", "#8454cc", "#b58900", "#3b7a8c",
];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 42.0;
const MARGIN_B: f64 = 52.0;
const TICKS: usize = 5;

/// One polyline with a legend entry.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

/// A 2D line plot. Data bounds are computed from the content and padded.
#[derive(Debug, Clone)]
pub struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
    markers: Vec<(f64, f64, &'static str)>,
}

fn fmt_tick(v: f64) -> String {
    // Fixed general format keeps files deterministic and labels short.
    let s = format!("{v:.4}");
    // Trim trailing zeros but keep at least one decimal digit.
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

impl Figure {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series: Vec::new(),
            markers: Vec::new(),
        }
    }

    pub fn add_series(&mut self, label: &str, color: &'static str, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            label: label.to_string(),
            color,
            points,
        });
    }

    pub fn add_marker(&mut self, x: f64, y: f64, color: &'static str) {
        self.markers.push((x, y, color));
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        let all = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .chain(self.markers.iter().map(|&(x, y, _)| (x, y)));
        for (x, y) in all {
            if x.is_finite() && y.is_finite() {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
        if !x_min.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        // Pad by 4 percent, with a floor for degenerate (constant) data.
        let x_pad = (0.04 * (x_max - x_min)).max(1e-12 + 0.04 * x_max.abs().max(1.0) * 1e-6);
        let y_pad = (0.04 * (y_max - y_min)).max(1e-12 + 0.04 * y_max.abs().max(1.0) * 1e-6);
        (x_min - x_pad, x_max + x_pad, y_min - y_pad, y_max + y_pad)
    }

    /// Renders the figure to an SVG 1.1 document.
    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let plot_w = WIDTH - MARGIN_L - MARGIN_R;
        let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
        let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| MARGIN_T + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

        let mut out = String::with_capacity(16 * 1024);
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
             text-anchor=\"middle\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // Axis frame.
        out.push_str(&format!(
            "<rect x=\"{MARGIN_L:.2}\" y=\"{MARGIN_T:.2}\" width=\"{plot_w:.2}\" \
             height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
        ));

        // Ticks with grid lines and labels.
        for i in 0..TICKS {
            let f = i as f64 / (TICKS - 1) as f64;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let px = sx(xv);
            let py = sy(yv);
            out.push_str(&format!(
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
                MARGIN_T,
                MARGIN_T + plot_h
            ));
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
                MARGIN_L,
                MARGIN_L + plot_w
            ));
            out.push_str(&format!(
                "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" \
                 text-anchor=\"middle\">{}</text>\n",
                MARGIN_T + plot_h + 16.0,
                fmt_tick(xv)
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" \
                 text-anchor=\"end\">{}</text>\n",
                MARGIN_L - 6.0,
                py + 4.0,
                fmt_tick(yv)
            ));
        }

        // Axis labels.
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_L + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        ));
        out.push_str(&format!(
            "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
            MARGIN_T + plot_h / 2.0,
            MARGIN_T + plot_h / 2.0,
            escape(&self.y_label)
        ));

        // Series polylines, clipped to the frame by construction of bounds.
        for s in &self.series {
            if s.points.is_empty() {
                continue;
            }
            let mut coords = String::with_capacity(s.points.len() * 14);
            for &(x, y) in &s.points {
                if !(x.is_finite() && y.is_finite()) {
                    continue;
                }
                coords.push_str(&format!("{:.2},{:.2} ", sx(x), sy(y)));
            }
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                s.color,
                coords.trim_end()
            ));
        }

        for &(x, y, color) in &self.markers {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }

        // Legend in the top-right corner of the frame.
        for (i, s) in self.series.iter().enumerate() {
            let ly = MARGIN_T + 16.0 + 16.0 * i as f64;
            let lx = MARGIN_L + plot_w - 150.0;
            out.push_str(&format!(
                "<line x1=\"{lx:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"{}\" stroke-width=\"2\"/>\n",
                ly - 4.0,
                lx + 22.0,
                ly - 4.0,
                s.color
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{ly:.2}\" font-family=\"sans-serif\" \
                 font-size=\"12\">{}</text>\n",
                lx + 28.0,
                escape(&s.label)
            ));
        }

        out.push_str("</svg>\n");
        out
    }

    /// Renders and writes `<stem>.svg` under `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{stem}.svg"));
        fs::write(&path, self.render())?;
        Ok(path)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Projects 3D points onto the plane with the fixed oblique camera used by
/// the trajectory plots (azimuth 30 degrees, elevation 20 degrees).
///
/// Each coordinate is first normalized to [0, 1] by its own span so axes
/// of very different magnitude stay comparable; a degenerate span maps to
/// the midpoint 1/2.
pub fn project_oblique(points: &[(f64, f64, f64)]) -> Vec<(f64, f64)> {
    let az = 30.0f64.to_radians();
    let el = 20.0f64.to_radians();
    let right = [-az.sin(), az.cos(), 0.0];
    let up = [-az.cos() * el.sin(), -az.sin() * el.sin(), el.cos()];

    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &(x, y, z) in points {
        for (k, v) in [x, y, z].into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let norm = |v: f64, k: usize| {
        if hi[k] - lo[k] > 0.0 {
            (v - lo[k]) / (hi[k] - lo[k])
        } else {
            0.5
        }
    };
    points
        .iter()
        .map(|&(x, y, z)| {
            let v = [norm(x, 0), norm(y, 1), norm(z, 2)];
            (
                v[0] * right[0] + v[1] * right[1] + v[2] * right[2],
                v[0] * up[0] + v[1] * up[1] + v[2] * up[2],
            )
        })
        .collect()
}
