//! Deterministic SVG renderings of developments and crossing staircases.

use std::fmt::Write as _;

use crate::development::{PlanarDevelopment, Reference};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

fn fmt(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" { "0.0000".into() } else { s }
}

/// Maps a bounding box onto the canvas, y up.
struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]]) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        Frame { x0, y1, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: [f64; 2]) -> (String, String) {
        (fmt(MARGIN + (p[0] - self.x0) * self.scale), fmt(MARGIN + (self.y1 - p[1]) * self.scale))
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
}

/// The development as a polyline (a single `line` element for one segment)
/// plus a marker for its reference point or direction.
pub fn development_svg(dev: &PlanarDevelopment) -> String {
    let mut all = dev.points.clone();
    if let Reference::Point { image, .. } = dev.reference {
        all.push(image);
    }
    let frame = Frame::fit(&all);
    let mut out = String::new();
    header(&mut out);
    match dev.points.len() {
        0 | 1 => {}
        2 => {
            let (a, b) = (frame.map(dev.points[0]), frame.map(dev.points[1]));
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" fill="none"/>"#,
                a.0, a.1, b.0, b.1
            );
        }
        _ => {
            let pts: Vec<String> = dev.points.iter().map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x},{y}")
            }).collect();
            let _ = writeln!(out, r#"<polyline points="{}" stroke="black" fill="none"/>"#, pts.join(" "));
        }
    }
    match dev.reference {
        Reference::Point { image, .. } => {
            let (x, y) = frame.map(image);
            let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="red"/>"#);
        }
        Reference::Direction { .. } => {
            let m = MARGIN / 2.0;
            let _ = writeln!(
                out,
                r#"<path d="M {m} {} L {m} {} M {} {} L {m} {} L {} {}" stroke="red" fill="none"/>"#,
                fmt(SIZE - MARGIN),
                fmt(SIZE - 3.0 * MARGIN),
                fmt(m - 4.0),
                fmt(SIZE - 3.0 * MARGIN + 6.0),
                fmt(SIZE - 3.0 * MARGIN),
                fmt(m + 4.0),
                fmt(SIZE - 3.0 * MARGIN + 6.0),
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Running sign sum against the crossing index, drawn as steps.
pub fn staircase_svg(signs: &[i8]) -> String {
    let mut pts = vec![[0.0, 0.0]];
    let mut level = 0.0;
    for (n, &s) in signs.iter().enumerate() {
        level += s as f64;
        pts.push([n as f64, level]);
        pts.push([n as f64 + 1.0, level]);
    }
    let frame = Frame::fit(&pts);
    let mut out = String::new();
    header(&mut out);
    if signs.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let coords: Vec<String> = pts.iter().map(|&p| {
        let (x, y) = frame.map(p);
        format!("{x},{y}")
    }).collect();
    let _ = writeln!(out, r#"<polyline points="{}" stroke="black" fill="none"/>"#, coords.join(" "));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_development_is_one_line() {
        let dev = PlanarDevelopment {
            points: vec![[0.0, 0.0], [1.0, 0.0]],
            s: vec![0.0, 1.0],
            reference: Reference::Direction { direction: [0.0, 0.0, 1.0] },
            clamped: 0,
        };
        let svg = development_svg(&dev);
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(!svg.contains("<polyline"));
        assert_eq!(svg, development_svg(&dev));
    }

    #[test]
    fn staircase_levels() {
        let svg = staircase_svg(&[1, 1, -1, -1]);
        assert!(svg.contains("<polyline"));
        let empty = staircase_svg(&[]);
        assert!(!empty.contains("<polyline"));
    }
}
