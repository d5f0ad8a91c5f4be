//! Planar developments of space polylines about a point or in a direction.

use serde::{Deserialize, Serialize};

use crate::curve::Polyline;
use crate::{GeoError, Result, Vec2, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Reference {
    /// Development about a point; `image` is its planar position.
    Point { point: [f64; 3], image: [f64; 2] },
    /// Development in a direction; the planar reference is `(0, 1)`.
    Direction { direction: [f64; 3] },
}

/// A planar polyline whose arc-length table matches its source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarDevelopment {
    pub points: Vec<[f64; 2]>,
    pub s: Vec<f64>,
    pub reference: Reference,
    /// Segments whose height change exceeded their length by rounding only.
    pub clamped: usize,
}

impl PlanarDevelopment {
    pub fn planar(&self) -> Vec<Vec2> {
        self.points.iter().map(|p| Vec2::new(p[0], p[1])).collect()
    }

    /// Signed turning at each interior vertex; counter-clockwise positive.
    /// Zero-length segments are skipped.
    pub fn signed_turning(&self) -> Vec<f64> {
        signed_turning(&self.planar())
    }

    /// Sum of absolute exterior angles.
    pub fn total_curvature(&self) -> f64 {
        self.signed_turning().iter().map(|t| t.abs()).sum()
    }
}

/// Signed turning of a planar polyline at each of its interior vertices.
/// A vertex adjacent to a zero-length segment gets turning zero.
pub fn signed_turning(pts: &[Vec2]) -> Vec<f64> {
    let n = pts.len();
    let mut out = vec![0.0; n.saturating_sub(2)];
    let segs: Vec<Vec2> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    // carry the last non-degenerate direction across repeated points
    let mut last: Option<Vec2> = None;
    for k in 0..segs.len() {
        let d = segs[k];
        if d.norm() == 0.0 {
            continue;
        }
        if let Some(prev) = last {
            if k >= 1 {
                let turn = (prev.x * d.y - prev.y * d.x).atan2(prev.dot(&d));
                out[k - 1] = turn;
            }
        }
        last = Some(d);
    }
    out
}

/// Development in direction `u`: height `<u, γ>`, horizontal increments
/// `sqrt(ds² - dh²)`.
pub fn develop_in_direction(line: &Polyline, u: &Vec3, rel_tol: f64) -> Result<PlanarDevelopment> {
    let norm = u.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(GeoError::Precondition(format!("direction must be a unit vector, |u| = {norm}")));
    }
    let pts = line.points();
    let scale = line.length().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(pts.len());
    let mut x = 0.0;
    let mut clamped = 0;
    out.push([0.0, u.dot(&pts[0])]);
    for w in pts.windows(2) {
        let ds = (w[1] - w[0]).norm();
        let dh = u.dot(&(w[1] - w[0]));
        let excess = dh * dh - ds * ds;
        let dx = if excess > 0.0 {
            if excess.sqrt() > rel_tol * scale {
                return Err(GeoError::Degenerate(format!("height change exceeds segment length by {}", excess.sqrt())));
            }
            clamped += 1;
            0.0
        } else {
            (-excess).sqrt()
        };
        x += dx;
        out.push([x, u.dot(&w[0]) + dh]);
    }
    if clamped > 0 {
        log::warn!("develop_in_direction clamped {clamped} segments");
    }
    Ok(PlanarDevelopment {
        points: out,
        s: line.arclength().to_vec(),
        reference: Reference::Direction { direction: [u.x, u.y, u.z] },
        clamped,
    })
}

/// Development about the point `z`: every sample keeps its distance to `z`,
/// segments keep their lengths, and the azimuth about the image of `z` is
/// nondecreasing.
pub fn develop_about_point(line: &Polyline, z: &Vec3, min_distance: f64) -> Result<PlanarDevelopment> {
    let pts = line.points();
    let r: Vec<f64> = pts.iter().map(|p| (p - z).norm()).collect();
    if let Some(index) = r.iter().position(|&d| d <= min_distance) {
        return Err(GeoError::NearAxis { index, tolerance: min_distance });
    }
    let mut phi = 0.0;
    let mut out = Vec::with_capacity(pts.len());
    out.push([r[0], 0.0]);
    for k in 1..pts.len() {
        let (a, b) = (pts[k - 1] - z, pts[k] - z);
        // angle at z of the triangle (z, γ_{k-1}, γ_k), which the law of
        // cosines fixes from the three side lengths
        phi += a.cross(&b).norm().atan2(a.dot(&b));
        out.push([r[k] * phi.cos(), r[k] * phi.sin()]);
    }
    Ok(PlanarDevelopment {
        points: out,
        s: line.arclength().to_vec(),
        reference: Reference::Point { point: [z.x, z.y, z.z], image: [0.0, 0.0] },
        clamped: 0,
    })
}

/// Total curvature of the development in direction `u`.
pub fn directional_tc(line: &Polyline, u: &Vec3, rel_tol: f64) -> Result<f64> {
    Ok(develop_in_direction(line, u, rel_tol)?.total_curvature())
}
