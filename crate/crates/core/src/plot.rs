//! Deterministic SVG rendering of a compiled region: rasterized unsafe
//! set, dashed trajectory, polygon outlines at the transition placements.

use crate::geometry::Polygon;
use crate::region::RegionFormula;
use crate::trajectory::Trajectory;
use crate::transitions::{find_transitions, TransitionOptions};
use std::fmt::Write as _;

pub struct PlotOptions {
    /// World-coordinate window (x0, x1, y0, y1).
    pub window: (f64, f64, f64, f64),
    /// Raster cells along the longer window axis.
    pub resolution: usize,
    /// Output width in px; height follows the window aspect ratio.
    pub width_px: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            window: (-10.0, 10.0, -10.0, 10.0),
            resolution: 256,
            width_px: 720.0,
        }
    }
}

fn fmt_px(v: f64) -> String {
    // Two decimals is below a pixel; keeps the output byte-stable.
    format!("{:.2}", v)
}

pub fn render_svg(
    formula: &RegionFormula,
    trajectory: &Trajectory,
    polygon: &Polygon,
    opts: &PlotOptions,
) -> String {
    let (x0, x1, y0, y1) = opts.window;
    let (wx, wy) = (x1 - x0, y1 - y0);
    let scale = opts.width_px / wx;
    let height_px = wy * scale;
    // SVG y grows downward.
    let px = |x: f64| (x - x0) * scale;
    let py = |y: f64| (y1 - y) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt_px(opts.width_px),
        fmt_px(height_px),
        fmt_px(opts.width_px),
        fmt_px(height_px)
    );
    let _ = writeln!(
        out,
        "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>"
    );

    // Unsafe raster: sample cell centers, merge horizontal runs.
    let cell = wx.max(wy) / opts.resolution as f64;
    let (nx, ny) = ((wx / cell).ceil() as usize, (wy / cell).ceil() as usize);
    let _ = writeln!(out, "<g fill=\"#d93025\" fill-opacity=\"0.35\">");
    for j in 0..ny {
        let yc = y0 + (j as f64 + 0.5) * cell;
        let mut run: Option<usize> = None;
        for i in 0..=nx {
            let inside = i < nx
                && formula
                    .evaluate((x0 + (i as f64 + 0.5) * cell, yc))
                    .unwrap_or(false);
            match (run, inside) {
                (None, true) => run = Some(i),
                (Some(s), false) => {
                    let _ = writeln!(
                        out,
                        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                        fmt_px(px(x0 + s as f64 * cell)),
                        fmt_px(py(yc + 0.5 * cell)),
                        fmt_px((i - s) as f64 * cell * scale),
                        fmt_px(cell * scale)
                    );
                    run = None;
                }
                _ => {}
            }
        }
    }
    let _ = writeln!(out, "</g>");

    // Trajectory polyline, dashed; clipped to the window in x.
    let tps = find_transitions(trajectory, polygon, &TransitionOptions::default())
        .unwrap_or_default();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for piece in &trajectory.pieces {
        let (lo, hi) = piece.finite_window(2.0 * (wx + wy));
        let n = 256;
        for k in 0..=n {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            if let Ok(p) = piece.point(t) {
                pts.push(p);
            }
        }
    }
    let path: Vec<String> = pts
        .iter()
        .filter(|&&(x, _)| x >= x0 - wx && x <= x1 + wx)
        .map(|&(x, y)| format!("{},{}", fmt_px(px(x)), fmt_px(py(y))))
        .collect();
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1a73e8\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>",
        path.join(" ")
    );

    // Polygon snapshots at transition placements.
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"#188038\" stroke-width=\"1\">"
    );
    let mut drawn: Vec<(f64, f64)> = Vec::new();
    for tp in &tps {
        if !tp.x.is_finite() || !tp.y.is_finite() {
            continue;
        }
        if drawn
            .iter()
            .any(|&(x, y)| (x - tp.x).abs() < 1e-9 && (y - tp.y).abs() < 1e-9)
        {
            continue;
        }
        drawn.push((tp.x, tp.y));
        let corners: Vec<String> = polygon
            .vertices()
            .iter()
            .map(|&(vx, vy)| format!("{},{}", fmt_px(px(tp.x + vx)), fmt_px(py(tp.y + vy))))
            .collect();
        let _ = writeln!(out, "<polygon points=\"{}\"/>", corners.join(" "));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
