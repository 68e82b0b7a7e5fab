//! SVG quiver of principal directions.
//!
//! Directions are axial, so segments are drawn headless and centered on the
//! site. North is up: lattice `y` grows toward the top of the image.

use std::fmt::Write;

use vorticity_core::lattice::LatticeDescription;
use vorticity_core::vortex::default_threshold;
use vorticity_core::VorticityField;

const SCALE: f64 = 40.0;
const MARGIN: f64 = 30.0;
const MAX_HALF_LENGTH: f64 = 0.45;
const VORTEX_RADIUS: f64 = 0.18;
const TICK_LENGTH: f64 = 0.3;

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

struct Frame {
    x0: i64,
    y1: i64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(points: impl Iterator<Item = (i64, i64)>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for (x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0, 0, 0, 0);
        }
        Self {
            x0,
            y1,
            width: (x1 - x0) as f64 * SCALE + 2.0 * MARGIN,
            height: (y1 - y0) as f64 * SCALE + 2.0 * MARGIN,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0 as f64) * SCALE
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.y1 as f64 - y) * SCALE
    }
}

/// Renders `field`; `eps` defaults to the relative vortex threshold.
pub fn render_svg(
    field: &VorticityField,
    lattice: Option<&LatticeDescription>,
    eps: Option<f64>,
) -> String {
    let eps = eps.unwrap_or_else(|| default_threshold(field));
    let mut points: Vec<(i64, i64)> = field.entries.iter().map(|e| (e.site.x, e.site.y)).collect();
    if let Some(l) = lattice {
        points.extend(l.sites.iter().map(|s| (s.x, s.y)));
    }
    let frame = Frame::new(points.into_iter());
    let max_gap = field
        .entries
        .iter()
        .filter(|e| e.matrix.norm() > eps)
        .map(|e| e.matrix.eigengap())
        .fold(0.0, f64::max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(frame.width),
        h = num(frame.height)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if let Some(l) = lattice {
        let _ = writeln!(svg, r#"<g id="boundary" stroke="gray" stroke-width="1.5">"#);
        for s in &l.sites {
            let Some(theta) = s.theta else { continue };
            let (cx, cy) = (frame.px(s.x as f64), frame.py(s.y as f64));
            let half = 0.5 * TICK_LENGTH * SCALE;
            let (dx, dy) = (half * theta.cos(), -half * theta.sin());
            let _ = writeln!(
                svg,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                num(cx - dx),
                num(cy - dy),
                num(cx + dx),
                num(cy + dy)
            );
        }
        let _ = writeln!(svg, "</g>");
    }

    let _ = writeln!(
        svg,
        r#"<g id="directions" stroke="black" stroke-width="2" stroke-linecap="round">"#
    );
    for e in &field.entries {
        if e.matrix.norm() <= eps {
            continue;
        }
        let half = MAX_HALF_LENGTH * SCALE * e.matrix.eigengap() / max_gap;
        let angle = e.matrix.principal_angle();
        let (cx, cy) = (frame.px(e.site.x as f64), frame.py(e.site.y as f64));
        let (dx, dy) = (half * angle.cos(), -half * angle.sin());
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(cx - dx),
            num(cy - dy),
            num(cx + dx),
            num(cy + dy)
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g id="vortices" fill="crimson">"#);
    for e in field.entries.iter().filter(|e| e.matrix.norm() <= eps) {
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            num(frame.px(e.site.x as f64)),
            num(frame.py(e.site.y as f64)),
            num(VORTEX_RADIUS * SCALE)
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
