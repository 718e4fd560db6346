//! Minimal SVG line, scatter and heatmap rendering.

use anyhow::Result;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const W: f64 = 640.0;
const H: f64 = 440.0;
const ML: f64 = 70.0;
const MR: f64 = 130.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Mark style of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// Connected polyline with markers.
    Line,
    /// Markers only.
    Scatter,
}

/// Named data series.
#[derive(Debug, Clone)]
pub struct Series {
    /// Legend entry.
    pub name: String,
    /// Points; non-finite points are skipped.
    pub points: Vec<(f64, f64)>,
    /// Style.
    pub style: Style,
}

/// XY chart.
#[derive(Debug, Clone, Default)]
pub struct Chart {
    /// Title.
    pub title: String,
    /// X-axis label.
    pub x_label: String,
    /// Y-axis label.
    pub y_label: String,
    /// Logarithmic x axis.
    pub log_x: bool,
    /// Logarithmic y axis.
    pub log_y: bool,
    /// Data.
    pub series: Vec<Series>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tx(v: f64, log: bool) -> Option<f64> {
    let t = if log { v.log10() } else { v };
    t.is_finite().then_some(t)
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

fn fmt_tick(t: f64, log: bool) -> String {
    if log {
        format!("1e{}", t.round() as i64)
    } else if t.abs() >= 1e4 || (t != 0.0 && t.abs() < 1e-2) {
        format!("{t:.1e}")
    } else {
        format!("{}", (t * 1000.0).round() / 1000.0)
    }
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log {
        let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
        let step = (((b - a) as f64 / 6.0).ceil() as i64).max(1);
        return (a..=b).step_by(step as usize).map(|e| e as f64).collect();
    }
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(t);
        t += step;
    }
    out
}

fn frame(svg: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (ML + W - MR) / 2.0, esc(title));
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (ML + W - MR) / 2.0, H - 12.0, esc(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        (MT + H - MB) / 2.0,
        esc(y_label)
    );
}

fn axes(svg: &mut String, xr: (f64, f64), yr: (f64, f64), log_x: bool, log_y: bool) {
    let (x0, x1, y0, y1) = (ML, W - MR, MT, H - MB);
    let _ = writeln!(svg, r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y1 - y0);
    for t in ticks(xr.0, xr.1, log_x) {
        let x = x0 + (t - xr.0) / (xr.1 - xr.0) * (x1 - x0);
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, y1 + 18.0, fmt_tick(t, log_x));
    }
    for t in ticks(yr.0, yr.1, log_y) {
        let y = y1 - (t - yr.0) / (yr.1 - yr.0) * (y1 - y0);
        let _ = writeln!(svg, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, fmt_tick(t, log_y));
    }
}

impl Chart {
    /// Renders the chart.
    pub fn render(&self) -> String {
        let pts: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| s.points.iter().filter_map(|&(x, y)| Some((tx(x, self.log_x)?, tx(y, self.log_y)?))).collect())
            .collect();
        let xr = bounds(pts.iter().flatten().map(|p| p.0));
        let yr = bounds(pts.iter().flatten().map(|p| p.1));
        let mut svg = String::new();
        frame(&mut svg, &self.title, &self.x_label, &self.y_label);
        axes(&mut svg, xr, yr, self.log_x, self.log_y);
        let map = |(x, y): (f64, f64)| {
            (ML + (x - xr.0) / (xr.1 - xr.0) * (W - MR - ML), H - MB - (y - yr.0) / (yr.1 - yr.0) * (H - MB - MT))
        };
        for (i, (s, p)) in self.series.iter().zip(&pts).enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if s.style == Style::Line && p.len() > 1 {
                let path: Vec<String> = p.iter().map(|&q| map(q)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
            }
            for &q in p {
                let (x, y) = map(q);
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
            }
            let ly = MT + 14.0 + 18.0 * i as f64;
            let _ = writeln!(svg, r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#, W - MR + 12.0, ly - 9.0);
            let _ = writeln!(svg, r#"<text x="{}" y="{ly}">{}</text>"#, W - MR + 28.0, esc(&s.name));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Heatmap on a rectangular grid, colour on a log scale.
#[derive(Debug, Clone, Default)]
pub struct Heatmap {
    /// Title.
    pub title: String,
    /// X-axis label.
    pub x_label: String,
    /// Y-axis label.
    pub y_label: String,
    /// Column coordinates (ascending).
    pub xs: Vec<f64>,
    /// Row coordinates (ascending).
    pub ys: Vec<f64>,
    /// `values[row][col]`; non-positive or non-finite cells are drawn grey.
    pub values: Vec<Vec<f64>>,
}

fn viridis(t: f64) -> String {
    let stops = [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (a, b) = (stops[i], stops[i + 1]);
    let c = |u: f64, v: f64| (u + f * (v - u)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(a.0, b.0), c(a.1, b.1), c(a.2, b.2))
}

impl Heatmap {
    /// Renders the heatmap.
    pub fn render(&self) -> String {
        let logs: Vec<f64> = self.values.iter().flatten().filter(|v| **v > 0.0 && v.is_finite()).map(|v| v.log10()).collect();
        let (lo, hi) = bounds(logs.iter().copied());
        let mut svg = String::new();
        frame(&mut svg, &self.title, &self.x_label, &self.y_label);
        let (nx, ny) = (self.xs.len().max(1), self.ys.len().max(1));
        let (cw, ch) = ((W - MR - ML) / nx as f64, (H - MB - MT) / ny as f64);
        for (r, row) in self.values.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let fill = if v > 0.0 && v.is_finite() { viridis((v.log10() - lo) / (hi - lo)) } else { "#bbbbbb".into() };
                let (x, y) = (ML + c as f64 * cw, H - MB - (r + 1) as f64 * ch);
                let _ = writeln!(svg, r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#, cw + 0.3, ch + 0.3);
            }
        }
        let half = |v: &[f64]| -> (f64, f64) {
            if v.len() < 2 {
                let x = v.first().copied().unwrap_or(0.0);
                return (x - 0.5, x + 0.5);
            }
            let s = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
            (v[0] - 0.5 * s, v[v.len() - 1] + 0.5 * s)
        };
        axes(&mut svg, half(&self.xs), half(&self.ys), false, false);
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let y = H - MB - t * (H - MB - MT);
            let _ = writeln!(svg, r#"<rect x="{}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#, W - MR + 14.0, y - (H - MB - MT) / 4.0, (H - MB - MT) / 4.0, viridis(t));
            let _ = writeln!(svg, r#"<text x="{}" y="{:.2}">1e{:.1}</text>"#, W - MR + 34.0, y + 4.0, lo + t * (hi - lo));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Writes `svg` as `<experiment>-<hash>.svg`, hash = first 12 hex digits of its SHA-256.
pub fn write_svg(dir: &Path, experiment: &str, svg: &str) -> Result<PathBuf> {
    let digest = Sha256::digest(svg.as_bytes());
    let name = format!("{experiment}-{}.svg", &hex::encode(digest)[..12]);
    let path = dir.join(name);
    std::fs::write(&path, svg)?;
    Ok(path)
}
