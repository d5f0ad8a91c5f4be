use serde::{Deserialize, Serialize};

use crate::mesh::ConvexMesh;
use crate::{GeoError, Result, Vec2, Vec3};

/// Lengths of the two arcs into which `p` and `q` split a plane section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionArcs {
    /// Arc on the side of `normal × (q - p)`.
    pub plus: f64,
    pub minus: f64,
    /// Distance of `p` and `q` from the section polygon (should be ~0).
    pub endpoint_offset: f64,
}

/// Andrew's monotone chain; returns the hull counter-clockwise.
fn hull2(mut pts: Vec<Vec2>) -> Vec<Vec2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Vec2, a: &Vec2, b: &Vec2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Vec2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Section of the mesh by the plane through `p` with normal `normal`, split
/// at `p` and `q` (both assumed to lie in the plane and on the surface).
pub fn plane_section_lengths(mesh: &ConvexMesh, p: &Vec3, q: &Vec3, normal: &Vec3) -> Result<SectionArcs> {
    let n = normal.normalize();
    let scale = mesh.diameter();
    if (q - p).dot(&n).abs() > 1e-9 * scale {
        return Err(GeoError::Precondition("plane does not contain both points".into()));
    }
    let e1 = (q - p).normalize();
    let e2 = n.cross(&e1);
    let to2 = |x: &Vec3| Vec2::new((x - p).dot(&e1), (x - p).dot(&e2));
    let dist: Vec<f64> = mesh.vertices().iter().map(|v| (v - p).dot(&n)).collect();
    let tol = 1e-12 * scale;
    if dist.iter().all(|&d| d >= -tol) || dist.iter().all(|&d| d <= tol) {
        return Err(GeoError::Degenerate("plane misses the interior of the body".into()));
    }
    let mut pts = Vec::new();
    for e in mesh.edges() {
        let (a, b) = (e.v[0] as usize, e.v[1] as usize);
        let (da, db) = (dist[a], dist[b]);
        if da == 0.0 {
            pts.push(to2(&mesh.vertices()[a]));
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            pts.push(to2(&mesh.vertices()[a].lerp(&mesh.vertices()[b], t)));
        }
    }
    let ring = hull2(pts);
    let area: f64 = (0..ring.len())
        .map(|k| {
            let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        * 0.5;
    if ring.len() < 3 || area <= 1e-12 * scale * scale {
        return Err(GeoError::Degenerate("plane misses the interior of the body".into()));
    }
    // locate p and q on the ring: nearest boundary point, by edge and parameter
    let locate = |x: Vec2| -> (usize, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for k in 0..ring.len() {
            let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
            let d = b - a;
            let t = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
            let dd = (a + d * t - x).norm();
            if dd < best.2 {
                best = (k, t, dd);
            }
        }
        best
    };
    let m = ring.len();
    let perimeter_pos = |(k, t, _): (usize, f64, f64)| -> f64 {
        let mut acc = 0.0;
        for j in 0..k {
            acc += (ring[(j + 1) % m] - ring[j]).norm();
        }
        acc + t * (ring[(k + 1) % m] - ring[k]).norm()
    };
    let perimeter: f64 = (0..m).map(|j| (ring[(j + 1) % m] - ring[j]).norm()).sum();
    let lp = locate(to2(p));
    let lq = locate(to2(q));
    let offset = lp.2.max(lq.2);
    let (sp, sq) = (perimeter_pos(lp), perimeter_pos(lq));
    // counter-clockwise from q back to p runs through the side e2 > 0, since
    // p and q sit on the e1 axis and the ring is ccw
    let ccw_pq = (sq - sp).rem_euclid(perimeter);
    let ccw_qp = perimeter - ccw_pq;
    Ok(SectionArcs { plus: ccw_qp, minus: ccw_pq, endpoint_offset: offset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cube_axis_section() {
        let cube = ConvexMesh::unit_cube();
        let p = Vec3::new(0.5, 0.5, 0.0);
        let q = Vec3::new(0.5, 0.5, 1.0);
        let arcs = plane_section_lengths(&cube, &p, &q, &Vec3::x()).unwrap();
        assert_abs_diff_eq!(arcs.plus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(arcs.minus, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn tangent_plane_is_rejected() {
        let cube = ConvexMesh::unit_cube();
        let p = Vec3::new(0.2, 0.5, 0.0);
        let q = Vec3::new(0.7, 0.5, 0.0);
        assert!(plane_section_lengths(&cube, &p, &q, &Vec3::z()).is_err());
    }
}
