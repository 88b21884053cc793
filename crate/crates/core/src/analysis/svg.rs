use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::scalar::Scalar;

use super::heatmap::Heatmap;

const CELL: f64 = 32.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;
const LEGEND: f64 = 72.0;

/// Linear blend from dark blue (low) through teal to yellow (high).
fn colour(t: f64) -> String {
    let stops = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = t.clamp(0.0, 1.0);
    let k = if t <= 0.5 { 0 } else { 1 };
    let (t0, c0) = stops[k];
    let (t1, c1) = stops[k + 1];
    let f = (t - t0) / (t1 - t0);
    let mix = |i: usize| (c0[i] + f * (c1[i] - c0[i])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Standalone SVG of the heatmap: mu grows upwards, s to the right, one
/// `rect class="cell"` per present cell. `range` fixes the colour scale;
/// otherwise the data range is used.
pub fn emit_heatmap_svg<T: Scalar>(h: &Heatmap<T>, title: &str, range: Option<(f64, f64)>) -> String {
    let values: Vec<f64> = h.values().iter().map(|v| v.to_f64_lossy()).collect();
    let (lo, hi) = range.unwrap_or_else(|| {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() {
            (lo, hi)
        } else {
            (0.0, 1.0)
        }
    });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (rows, cols) = (h.rows(), h.cols());
    let width = MARGIN_LEFT + cols as f64 * CELL + LEGEND;
    let height = MARGIN_TOP + rows as f64 * CELL + MARGIN_BOTTOM;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for i in 0..rows {
        let y = MARGIN_TOP + (rows - 1 - i) as f64 * CELL;
        for j in 0..cols {
            let x = MARGIN_LEFT + j as f64 * CELL;
            if let Some(v) = h.get(i, j) {
                let v = v.to_f64_lossy();
                let _ = writeln!(
                    s,
                    r#"<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"><title>mu={} s={} value={v}</title></rect>"#,
                    colour((v - lo) / span),
                    h.mu_axis[i],
                    h.s_axis[j]
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text class="mu-label" x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + CELL / 2.0 + 4.0,
            h.mu_axis[i]
        );
    }
    let base = MARGIN_TOP + rows as f64 * CELL;
    for (j, s_val) in h.s_axis.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text class="s-label" x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{s_val}</text>"#,
            MARGIN_LEFT + j as f64 * CELL + CELL / 2.0,
            base + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">s (%)</text>"#,
        MARGIN_LEFT + cols as f64 * CELL / 2.0,
        base + 36.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">mu</text>"#,
        MARGIN_TOP + rows as f64 * CELL / 2.0,
        MARGIN_TOP + rows as f64 * CELL / 2.0
    );
    // Colour legend: ten swatches, high at the top.
    let lx = MARGIN_LEFT + cols as f64 * CELL + 16.0;
    let sh = rows as f64 * CELL / 10.0;
    for k in 0..10 {
        let t = 1.0 - (k as f64 + 0.5) / 10.0;
        let _ = writeln!(
            s,
            r#"<rect class="legend" x="{lx}" y="{}" width="14" height="{sh}" fill="{}"/>"#,
            MARGIN_TOP + k as f64 * sh,
            colour(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10">{hi}</text>"#,
        lx + 18.0,
        MARGIN_TOP + 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10">{lo}</text>"#,
        lx + 18.0,
        base
    );
    s.push_str("</svg>\n");
    s
}

pub fn write_heatmap_svg<T: Scalar>(h: &Heatmap<T>, title: &str, range: Option<(f64, f64)>, path: &Path) -> Result<()> {
    std::fs::write(path, emit_heatmap_svg(h, title, range))?;
    Ok(())
}
