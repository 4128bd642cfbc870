//! SVG drawings of realizations.
//!
//! Vertices are circles and edges are lines colored by weight, from blue at
//! the smallest weight in the drawing to red at the largest (linear in `w`).
//! When every weight is equal, all edges are red. Coordinates are scaled
//! uniformly so the farthest drawn vertex lies on the unit circle.
//!
//! Realizations with `d = 1` lie on a horizontal line. In 3-D mode the first
//! three coordinates are projected orthographically along the view direction
//! `(1,1,1)/√3`, with screen axes `right = (1,−1,0)/√2` and
//! `up = (−1,−1,2)/√6`. Extra coordinates beyond the drawn ones are dropped
//! and the drawing carries a note saying so.

use std::fmt::Write;

use graphreal_core::denselin::Matrix;
use graphreal_core::graph::Graph;

const SIZE: f64 = 400.0;
const RADIUS: f64 = 160.0;
const VERTEX_RADIUS: f64 = 5.0;

/// Screen-plane coordinates `(right, up)` for each vertex.
fn project(x: &Matrix, dims: usize) -> Vec<[f64; 2]> {
    let coord = |i: usize, c: usize| if c < x.cols() { x[(i, c)] } else { 0.0 };
    (0..x.rows())
        .map(|i| {
            if dims == 3 && x.cols() >= 3 {
                let (a, b, c) = (coord(i, 0), coord(i, 1), coord(i, 2));
                let right = (a - b) / 2f64.sqrt();
                let up = (2.0 * c - a - b) / 6f64.sqrt();
                [right, up]
            } else {
                [coord(i, 0), coord(i, 1)]
            }
        })
        .collect()
}

fn color(w: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo { ((w - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 1.0 };
    let red = (255.0 * t).round() as u8;
    format!("#{red:02x}00{:02x}", 255 - red)
}

/// Renders `x` (one row per vertex) with edges colored by `w`. `dims` is 2 or 3.
pub fn render(x: &Matrix, w: &[f64], g: &Graph, dims: usize) -> String {
    let points = project(x, dims);
    let scale = points.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    let scale = if scale > 0.0 { RADIUS / scale } else { 0.0 };
    let screen: Vec<(f64, f64)> =
        points.iter().map(|p| (SIZE / 2.0 + scale * p[0], SIZE / 2.0 - scale * p[1])).collect();
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    if x.cols() > dims {
        let _ = writeln!(
            s,
            r#"<text x="10" y="20" font-family="sans-serif" font-size="14" fill="black">d={}: {dims}-D projection</text>"#,
            x.cols()
        );
    }
    for (k, &(a, b)) in g.edges().iter().enumerate() {
        let (x1, y1) = screen[a];
        let (x2, y2) = screen[b];
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{}" stroke-width="2"/>"#,
            color(w[k], lo, hi)
        );
    }
    for &(cx, cy) in &screen {
        let _ = writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{VERTEX_RADIUS}" fill="black"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
