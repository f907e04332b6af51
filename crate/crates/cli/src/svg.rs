use std::fmt::Write;

use convex_rounder::{Body, DirectionGrid};

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Boundary polylines `u / p(u)` over the grid, one closed curve per body.
pub fn render(bodies: &[(String, Body)], grid: &DirectionGrid, size: u32) -> String {
    let curves: Vec<Vec<Vec<f64>>> = bodies
        .iter()
        .map(|(_, b)| grid.iter().map(|u| b.boundary_point(u)).collect())
        .collect();
    let extent = curves
        .iter()
        .flatten()
        .map(|x| x[0].abs().max(x[1].abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
        * 1.05;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="{} {} {} {}">"#,
        -extent,
        -extent,
        2.0 * extent,
        2.0 * extent
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke-width="{}">"#, extent / 200.0);
    for (k, ((name, _), pts)) in bodies.iter().zip(&curves).enumerate() {
        let points: Vec<String> = pts.iter().map(|x| format!("{:.9},{:.9}", x[0], x[1])).collect();
        let _ = writeln!(
            s,
            r#"<polygon stroke="{}" points="{}"><title>{}</title></polygon>"#,
            COLORS[k % COLORS.len()],
            points.join(" "),
            escape(name)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
