//! Deterministic SVG emission. Coordinates are printed with a fixed number
//! of decimals, so identical inputs give byte-identical files.

use std::fmt::Write;

use lemniprint::{Curve, Diffeo};

const PAD: f64 = 0.05;

fn header(out: &mut String) {
    let side = 1.0 + 2.0 * PAD;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {side:.6} {side:.6}" width="512" height="512">"#,
        -PAD, -PAD
    )
    .unwrap();
}

fn polyline(out: &mut String, points: &[(f64, f64)], color: &str) {
    out.push_str(r#"<polyline fill="none" stroke=""#);
    out.push_str(color);
    out.push_str(r#"" stroke-width="0.004" points=""#);
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x:.6},{y:.6}").unwrap();
    }
    out.push_str("\"/>\n");
}

/// Maps the bounding box of `points` into the unit square, preserving the
/// aspect ratio and flipping `y` so the plot has the usual orientation.
fn to_unit_square(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let side = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    // center the shorter direction
    let (dx, dy) = ((side - (x1 - x0)) / 2.0, (side - (y1 - y0)) / 2.0);
    points.iter().map(|&(x, y)| ((x - x0 + dx) / side, 1.0 - (y - y0 + dy) / side)).collect()
}

/// The curve as one closed polyline.
pub fn curve_svg(curve: &Curve) -> String {
    let mut pts: Vec<(f64, f64)> = curve.points().iter().map(|z| (z.re, z.im)).collect();
    pts.push(pts[0]);
    let mut out = String::new();
    header(&mut out);
    polyline(&mut out, &to_unit_square(&pts), "black");
    out.push_str("</svg>\n");
    out
}

/// The lift `ψ(θ)` against `θ`, both in units of a full turn, over the
/// diagonal `ψ = θ`.
pub fn diffeo_svg(k: &Diffeo) -> String {
    let tau = std::f64::consts::TAU;
    let m = k.grid_size();
    let shift = (k.lift()[0] / tau).floor();
    let mut pts: Vec<(f64, f64)> = (0..m).map(|j| (k.theta(j) / tau, k.lift()[j] / tau - shift)).collect();
    pts.push((1.0, k.lift()[0] / tau - shift + 1.0));
    let (lo, hi) = pts.iter().fold((0.0f64, 1.0f64), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let span = hi - lo;
    let map = |(x, y): (f64, f64)| (x, 1.0 - (y - lo) / span);
    let diagonal: Vec<_> = [(0.0, 0.0), (1.0, 1.0)].into_iter().map(map).collect();
    let graph: Vec<_> = pts.into_iter().map(map).collect();
    let mut out = String::new();
    header(&mut out);
    polyline(&mut out, &diagonal, "gray");
    polyline(&mut out, &graph, "black");
    out.push_str("</svg>\n");
    out
}
