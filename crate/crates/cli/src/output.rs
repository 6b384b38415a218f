//! File outputs: CSV (atomic, self-describing headers), hand-emitted SVG
//! line/heat charts, and the binary triplet dump of sparse operators.

use anyhow::{Context, Result};
use rsaa_core::grid::{GridND, SparseSymOperator};
use std::fs;
use std::io::Write;
use std::path::Path;

/// Write bytes through a temp file and an atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp-rsaa");
    {
        let mut f = fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all().ok();
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// CSV body from a header row and rows of prerendered cells.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Shortest-roundtrip float formatting (Rust's default `Display` for f64),
/// which is deterministic across platforms.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Binary triplet dump: little-endian u64/f64 fields.
/// Layout: d; then per axis (min f64, max f64, n u64); then nnz u64; then
/// nnz records of (row u64, col u64, value f64).
pub fn dump_operator(path: &Path, grid: &GridND, op: &SparseSymOperator) -> Result<()> {
    let mut bytes = Vec::with_capacity(32 + 24 * op.nnz());
    bytes.extend_from_slice(&(grid.dim() as u64).to_le_bytes());
    for ax in grid.axes() {
        bytes.extend_from_slice(&ax.min.to_le_bytes());
        bytes.extend_from_slice(&ax.max.to_le_bytes());
        bytes.extend_from_slice(&(ax.n as u64).to_le_bytes());
    }
    bytes.extend_from_slice(&(op.nnz() as u64).to_le_bytes());
    for (r, c, v) in op.triplets() {
        bytes.extend_from_slice(&(r as u64).to_le_bytes());
        bytes.extend_from_slice(&(c as u64).to_le_bytes());
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    write_atomic(path, &bytes)
}

// ---------------------------------------------------------------------------
// SVG primitives: enough for line charts and heatmaps, nothing more.

pub struct SvgCanvas {
    width: f64,
    height: f64,
    body: String,
}

impl SvgCanvas {
    pub fn new(width: f64, height: f64) -> Self {
        SvgCanvas { width, height, body: String::new() }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, color: &str) {
        self.body.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{color}\"/>\n"
        ));
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str) {
        let mut d = String::new();
        for (x, y) in pts {
            d.push_str(&format!("{x:.2},{y:.2} "));
        }
        self.body.push_str(&format!(
            "<polyline points=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, s: &str) {
        self.body.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{size:.1}\" font-family=\"monospace\">{s}</text>\n"
        ));
    }

    pub fn finish(self) -> Vec<u8> {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
        .into_bytes()
    }
}

/// Line chart of one or more series, linear or log-y.
pub fn svg_line_chart(
    series: &[(&str, &[f64], &[f64])],
    log_y: bool,
    title: &str,
) -> Vec<u8> {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 40.0, 40.0);
    let mut canvas = SvgCanvas::new(w, h);
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let ty = |v: f64| if log_y { v.max(1e-300).log10() } else { v };
    for (_, xs, ys) in series {
        for &x in *xs {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
        }
        for &y in *ys {
            ymin = ymin.min(ty(y));
            ymax = ymax.max(ty(y));
        }
    }
    if !(xmax > xmin) {
        xmax = xmin + 1.0;
    }
    if !(ymax > ymin) {
        ymax = ymin + 1.0;
    }
    let px = |x: f64| ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
    let py = |y: f64| h - mb - (ty(y) - ymin) / (ymax - ymin) * (h - mt - mb);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    canvas.text(ml, mt - 16.0, 14.0, title);
    for (i, (name, xs, ys)) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = xs.iter().zip(*ys).map(|(&x, &y)| (px(x), py(y))).collect();
        let color = colors[i % colors.len()];
        canvas.polyline(&pts, color);
        canvas.text(w - mr - 150.0, mt + 16.0 * (i as f64 + 1.0), 12.0, &format!("{name}"));
        canvas.rect(w - mr - 170.0, mt + 16.0 * (i as f64 + 1.0) - 8.0, 12.0, 4.0, color);
    }
    // axes
    canvas.polyline(&[(ml, mt), (ml, h - mb), (w - mr, h - mb)], "#000000");
    canvas.text(ml - 50.0, mt + 4.0, 10.0, &format!("{:.3e}", if log_y { 10f64.powf(ymax) } else { ymax }));
    canvas.text(ml - 50.0, h - mb, 10.0, &format!("{:.3e}", if log_y { 10f64.powf(ymin) } else { ymin }));
    canvas.text(ml, h - mb + 24.0, 10.0, &format!("{xmin:.3}"));
    canvas.text(w - mr - 40.0, h - mb + 24.0, 10.0, &format!("{xmax:.3}"));
    canvas.finish()
}

/// Heatmap of a row-major nx x ny surface.
pub fn svg_heatmap(values: &[f64], nx: usize, ny: usize, title: &str) -> Vec<u8> {
    let cell = (560.0 / nx.max(ny) as f64).max(1.0);
    let (w, h) = (cell * ny as f64 + 80.0, cell * nx as f64 + 60.0);
    let mut canvas = SvgCanvas::new(w, h);
    let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (vmax - vmin).max(1e-12);
    canvas.text(20.0, 24.0, 14.0, title);
    for i in 0..nx {
        for j in 0..ny {
            let t = (values[i * ny + j] - vmin) / span;
            // blue -> white -> red
            let (r, g, b) = if t < 0.5 {
                let u = t * 2.0;
                ((255.0 * u) as u8, (255.0 * u) as u8, 255u8)
            } else {
                let u = (t - 0.5) * 2.0;
                (255u8, (255.0 * (1.0 - u)) as u8, (255.0 * (1.0 - u)) as u8)
            };
            canvas.rect(
                40.0 + j as f64 * cell,
                40.0 + i as f64 * cell,
                cell + 0.5,
                cell + 0.5,
                &format!("#{r:02x}{g:02x}{b:02x}"),
            );
        }
    }
    canvas.text(20.0, h - 8.0, 10.0, &format!("min {vmin:.4e}  max {vmax:.4e}"));
    canvas.finish()
}
