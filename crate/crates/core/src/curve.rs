//! Space polylines: total curvature, ε-straightness, diameter and winding.
//!
//! Everything here works on plain point sequences so the same routines serve
//! surface paths, analytic test curves and sub-arcs.

use serde::{Deserialize, Serialize};

use crate::{GeoError, Result, Vec3};

/// A polyline with its cumulative arc-length table.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Vec3>,
    s: Vec<f64>,
}

impl Polyline {
    pub fn new(points: Vec<Vec3>) -> Self {
        let mut s = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for (k, p) in points.iter().enumerate() {
            if k > 0 {
                acc += (p - points[k - 1]).norm();
            }
            s.push(acc);
        }
        Self { points, s }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn arclength(&self) -> &[f64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.s.last().copied().unwrap_or(0.0)
    }

    /// Index of the segment containing arc length `t` (clamped).
    pub fn segment_at(&self, t: f64) -> usize {
        let n = self.points.len();
        if n < 2 {
            return 0;
        }
        let k = self.s.partition_point(|&x| x <= t);
        k.clamp(1, n - 1) - 1
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        if self.points.len() < 2 {
            return self.points[0];
        }
        let k = self.segment_at(t);
        let len = self.s[k + 1] - self.s[k];
        if len <= 0.0 {
            return self.points[k];
        }
        let tau = ((t - self.s[k]) / len).clamp(0.0, 1.0);
        self.points[k].lerp(&self.points[k + 1], tau)
    }

    /// Sub-polyline between arc lengths `t0 <= t1`, with interpolated ends.
    pub fn slice(&self, t0: f64, t1: f64) -> Polyline {
        let (t0, t1) = (t0.max(0.0), t1.min(self.length()));
        let mut pts = vec![self.point_at(t0)];
        for (k, &sk) in self.s.iter().enumerate() {
            if sk > t0 && sk < t1 {
                pts.push(self.points[k]);
            }
        }
        let end = self.point_at(t1);
        if t1 > t0 || pts.len() == 1 {
            pts.push(end);
        }
        Polyline::new(pts)
    }

    /// Unit direction of segment `k`, or zero for a repeated point.
    pub fn direction(&self, k: usize) -> Vec3 {
        let d = self.points[k + 1] - self.points[k];
        let n = d.norm();
        if n > 0.0 {
            d / n
        } else {
            Vec3::zeros()
        }
    }
}

/// Total curvature of a polyline together with the number of skipped
/// repeated points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalCurvature {
    pub value: f64,
    pub skipped: usize,
}

/// Angle between two vectors, robust near 0 and π.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Non-degenerate segment vectors of a point sequence, and the number of
/// zero-length segments dropped.
fn segments(points: &[Vec3]) -> (Vec<Vec3>, usize) {
    let scale = points.iter().map(|p| p.amax()).fold(0.0_f64, f64::max).max(1.0);
    let mut out = Vec::with_capacity(points.len());
    let mut skipped = 0;
    for w in points.windows(2) {
        let d = w[1] - w[0];
        if d.norm() <= 1e-15 * scale {
            skipped += 1;
        } else {
            out.push(d);
        }
    }
    (out, skipped)
}

/// Exterior angles at the interior vertices, repeated points removed.
pub fn exterior_angles(points: &[Vec3]) -> Vec<f64> {
    let (segs, _) = segments(points);
    segs.windows(2).map(|w| angle_between(&w[0], &w[1])).collect()
}

/// Sum of exterior angles of the polyline through `points`.
pub fn total_curvature(points: &[Vec3]) -> TotalCurvature {
    let (segs, skipped) = segments(points);
    let value = segs.windows(2).map(|w| angle_between(&w[0], &w[1])).sum();
    if skipped > 0 {
        log::debug!("total_curvature skipped {skipped} repeated points");
    }
    TotalCurvature { value, skipped }
}

/// Chord-to-length ratio of a polyline and whether it is ε-straight.
pub fn is_eps_straight(points: &[Vec3], eps: f64) -> Result<(bool, f64)> {
    let line = Polyline::new(points.to_vec());
    let len = line.length();
    if len <= 0.0 {
        return Err(GeoError::Degenerate("path has zero length".into()));
    }
    let ratio = (points[points.len() - 1] - points[0]).norm() / len;
    Ok((ratio >= 1.0 - eps, ratio))
}

/// An arc of a polyline given by arc-length bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub t0: f64,
    pub t1: f64,
}

/// Greedy subdivision into ε-straight arcs: from each start `t`, the arc
/// extends to the largest `t'` such that `[t, t']` is ε-straight.
pub fn eps_straight_subdivide(line: &Polyline, eps: f64) -> Result<Vec<Arc>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GeoError::Precondition(format!("ε must lie in (0,1), got {eps}")));
    }
    let n = line.len();
    let total = line.length();
    if n < 2 || total <= 0.0 {
        return Err(GeoError::Degenerate("path has zero length".into()));
    }
    let s = line.arclength();
    let pts = line.points();
    let slack = 1e-12 * total;
    let mut arcs = Vec::new();
    let mut t = 0.0;
    while t < total - slack {
        let start = line.point_at(t);
        let f = |x: &Vec3, sx: f64| (x - start).norm() - (1.0 - eps) * (sx - t) + slack;
        let first = line.segment_at(t);
        let mut end = None;
        for k in (first..n - 1).rev() {
            let (a, b) = (pts[k], pts[k + 1]);
            let (sa, sb) = (s[k].max(t), s[k + 1]);
            let pa = if s[k] < t { start } else { a };
            if f(&b, sb) >= 0.0 {
                end = Some(sb);
                break;
            }
            if f(&pa, sa) >= 0.0 {
                // f is convex along the segment, so {f >= 0} ends at a single root
                let (mut lo, mut hi) = (0.0, 1.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if f(&pa.lerp(&b, mid), sa + mid * (sb - sa)) >= 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                end = Some(sa + lo * (sb - sa));
                break;
            }
        }
        let t1 = end.unwrap_or(total).max(t + slack).min(total);
        arcs.push(Arc { t0: t, t1 });
        t = t1;
    }
    if let Some(last) = arcs.last_mut() {
        last.t1 = total;
    }
    Ok(arcs)
}

/// Upper bound on the arc count for minimizing geodesics.
pub fn eps_straight_bound(eps: f64) -> usize {
    (2.0 / eps).ceil() as usize + 1
}

/// Largest pairwise distance between samples.
pub fn path_diameter(points: &[Vec3]) -> f64 {
    let mut best = 0.0_f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm_squared());
        }
    }
    best.sqrt()
}

/// Oriented line for winding computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Axis {
    pub fn new(origin: Vec3, direction: Vec3) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) {
            return Err(GeoError::Degenerate("axis direction is zero".into()));
        }
        Ok(Self { origin, direction: direction / n })
    }

    /// Two unit vectors completing the axis direction to a right-handed frame.
    pub fn basis(&self) -> (Vec3, Vec3) {
        let d = self.direction;
        let helper = if d.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let e1 = d.cross(&helper).normalize();
        let e2 = d.cross(&e1);
        (e1, e2)
    }

    pub fn distance(&self, p: &Vec3) -> f64 {
        let r = p - self.origin;
        (r - self.direction * r.dot(&self.direction)).norm()
    }
}

/// Continuous azimuth of every sample about the axis (radians), unwrapped so
/// consecutive values differ by less than π.
pub fn unwrapped_azimuth(points: &[Vec3], axis: &Axis, min_distance: f64) -> Result<Vec<f64>> {
    let (e1, e2) = axis.basis();
    let mut out = Vec::with_capacity(points.len());
    let mut prev: Option<f64> = None;
    for (index, p) in points.iter().enumerate() {
        if axis.distance(p) <= min_distance {
            return Err(GeoError::NearAxis { index, tolerance: min_distance });
        }
        let r = p - axis.origin;
        let raw = r.dot(&e2).atan2(r.dot(&e1));
        let a = match prev {
            None => raw,
            Some(q) => {
                let mut d = raw - q.rem_euclid(std::f64::consts::TAU);
                d = (d + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
                q + d
            }
        };
        out.push(a);
        prev = Some(a);
    }
    Ok(out)
}

/// Number of turns of the polyline about the axis.
pub fn winding_number(points: &[Vec3], axis: &Axis, min_distance: f64) -> Result<f64> {
    let az = unwrapped_azimuth(points, axis, min_distance)?;
    Ok(match (az.first(), az.last()) {
        (Some(a), Some(b)) => (b - a) / std::f64::consts::TAU,
        _ => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn semicircle(n: usize) -> Vec<Vec3> {
        (0..=n).map(|k| {
            let a = PI * k as f64 / n as f64;
            Vec3::new(a.cos(), a.sin(), 0.0)
        }).collect()
    }

    #[test]
    fn right_angle_turn() {
        let pts = [Vec3::zeros(), Vec3::x(), Vec3::new(1.0, 1.0, 0.0)];
        assert_abs_diff_eq!(total_curvature(&pts).value, PI / 2.0, epsilon = 1e-15);
        let straight = [Vec3::zeros(), Vec3::x(), 2.0 * Vec3::x()];
        assert_eq!(total_curvature(&straight).value, 0.0);
    }

    #[test]
    fn repeated_points_are_counted() {
        let pts = [Vec3::zeros(), Vec3::x(), Vec3::x(), Vec3::new(1.0, 1.0, 0.0)];
        let tc = total_curvature(&pts);
        assert_eq!(tc.skipped, 1);
        assert_abs_diff_eq!(tc.value, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn semicircle_straightness() {
        let pts = semicircle(2000);
        let (ok, ratio) = is_eps_straight(&pts, 0.5).unwrap();
        assert!(ok);
        assert_abs_diff_eq!(ratio, 2.0 / PI, epsilon = 1e-6);
        assert!(!is_eps_straight(&pts, 0.3).unwrap().0);
    }

    #[test]
    fn great_circle_subdivision() {
        let n = 3000;
        let pts: Vec<Vec3> = (0..=n)
            .map(|k| {
                let a = 0.9 * PI * k as f64 / n as f64;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let line = Polyline::new(pts);
        let arcs = eps_straight_subdivide(&line, 0.1).unwrap();
        assert!(arcs.len() <= eps_straight_bound(0.1));
        for a in &arcs {
            let sub = line.slice(a.t0, a.t1);
            assert!(is_eps_straight(sub.points(), 0.1 + 1e-9).unwrap().0);
        }
        assert_eq!(arcs[0].t0, 0.0);
        assert_eq!(arcs.last().unwrap().t1, line.length());
        for w in arcs.windows(2) {
            assert_eq!(w[0].t1, w[1].t0);
        }
    }

    #[test]
    fn straight_segment_is_one_arc() {
        let line = Polyline::new(vec![Vec3::zeros(), Vec3::x(), 3.0 * Vec3::x()]);
        assert_eq!(eps_straight_subdivide(&line, 0.5).unwrap().len(), 1);
        assert_eq!(path_diameter(line.points()), 3.0);
    }

    #[test]
    fn helix_winding() {
        let helix = |turns: f64| -> Vec<Vec3> {
            (0..=400)
                .map(|k| {
                    let t = turns * 2.0 * PI * k as f64 / 400.0;
                    Vec3::new(t, 0.5 * t.cos(), 0.5 * t.sin())
                })
                .collect()
        };
        let axis = Axis::new(Vec3::zeros(), Vec3::x()).unwrap();
        assert_abs_diff_eq!(winding_number(&helix(1.0), &axis, 1e-9).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(winding_number(&helix(2.0), &axis, 1e-9).unwrap(), 2.0, epsilon = 1e-12);
        let flat: Vec<Vec3> = (0..10).map(|k| Vec3::new(k as f64, 0.0, 1.0 + k as f64)).collect();
        assert_eq!(winding_number(&flat, &axis, 1e-9).unwrap(), 0.0);
        let hit = [Vec3::new(0.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0)];
        assert!(matches!(winding_number(&hit, &axis, 1e-9), Err(GeoError::NearAxis { index: 1, .. })));
    }
}
