use std::fmt::Write;

use super::{CurveSource, PhasePortrait};
use crate::bifurcation::{EquilibriumKind, OrbitClass};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Deterministic SVG rendering with coordinates rounded to two decimals.
pub fn render_svg(pp: &PhasePortrait) -> String {
    let b = pp.bounds;
    let inner = SIZE - 2.0 * MARGIN;
    let sx = |u: f64| MARGIN + (u - b.u_min) / (b.u_max - b.u_min) * inner;
    let sy = |y: f64| MARGIN + (b.y_max - y) / (b.y_max - b.y_min) * inner;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let (x0, y0) = (sx(0.0f64.clamp(b.u_min, b.u_max)), sy(0.0f64.clamp(b.y_min, b.y_max)));
    let _ = writeln!(
        s,
        r##"<g stroke="#bbbbbb" stroke-width="0.5"><line x1="{:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{:.2}" x2="{x0:.2}" y2="{:.2}"/></g>"##,
        MARGIN,
        SIZE - MARGIN,
        MARGIN,
        SIZE - MARGIN
    );
    for c in &pp.curves {
        let (stroke, width, dash) = match (c.source, c.class, c.separatrix) {
            (CurveSource::Traced, _, _) => ("#d62728", 1.6, r#" stroke-dasharray="6 3""#),
            (_, _, true) => ("#d62728", 1.2, ""),
            (_, OrbitClass::Periodic, _) => ("#1f77b4", 0.9, ""),
            _ => ("#7f7f7f", 0.9, ""),
        };
        let mut pts = String::new();
        for p in &c.points {
            let _ = write!(pts, "{:.2},{:.2} ", sx(p[0]), sy(p[1]));
        }
        if c.closed {
            if let Some(p) = c.points.first() {
                let _ = write!(pts, "{:.2},{:.2} ", sx(p[0]), sy(p[1]));
            }
        }
        let _ = writeln!(
            s,
            r#"<polyline id="c{}" fill="none" stroke="{stroke}" stroke-width="{width}"{dash} points="{}"/>"#,
            c.id,
            pts.trim_end()
        );
    }
    for e in &pp.equilibria {
        let (x, y) = (sx(e.location), sy(e.y));
        let _ = match e.kind {
            EquilibriumKind::Saddle | EquilibriumKind::DegenerateSaddle => writeln!(
                s,
                r##"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#000000" stroke-width="2"/>"##,
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            ),
            EquilibriumKind::Center | EquilibriumKind::DegenerateCenter => {
                writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/>"##)
            }
            EquilibriumKind::Cusp => writeln!(
                s,
                r##"<path d="M{:.2},{:.2}L{:.2},{:.2}L{:.2},{:.2}Z" fill="#000000"/>"##,
                x,
                y - 6.0,
                x - 5.0,
                y + 4.0,
                x + 5.0,
                y + 4.0
            ),
        };
    }
    s.push_str("</svg>\n");
    s
}
