//! Discrete Gauss curvature: angle defects at vertices and their
//! Gauss-image decomposition by a hemisphere.

use std::f64::consts::PI;

use super::ConvexMesh;
use crate::{GeoError, Result, Vec3};

pub(super) fn defect_raw(mesh: &ConvexMesh, v: u32) -> f64 {
    let sum: f64 = mesh
        .fan(v)
        .iter()
        .map(|&f| {
            let k = mesh.triangle(f).iter().position(|&x| x == v).unwrap();
            mesh.corner_angle(f, k)
        })
        .sum();
    2.0 * PI - sum
}

/// `2π` minus the sum of incident corner angles at `vertex`.
pub fn angle_defect(mesh: &ConvexMesh, vertex: usize) -> Result<f64> {
    mesh.defects()
        .get(vertex)
        .copied()
        .ok_or(GeoError::IndexOutOfRange { index: vertex, len: mesh.num_vertices() })
}

/// Sum of all angle defects, accumulated with Neumaier compensation.
pub fn total_defect(mesh: &ConvexMesh) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &d in mesh.defects() {
        let t = sum + d;
        if sum.abs() >= d.abs() {
            comp += (sum - t) + d;
        } else {
            comp += (d - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Part of the defect of `v` whose Gauss image lies in the closed hemisphere
/// `<n, u> >= 0`.
///
/// The normal cone of a convex vertex is the spherical polygon spanned by the
/// normals of its incident faces; its area is the angle defect. Clipping it by
/// the hemisphere splits the curvature of a horizon vertex between the dark
/// and bright sides, and the clipped parts of all vertices sum to exactly `2π`.
pub fn clipped_defect(mesh: &ConvexMesh, v: u32, u: &Vec3) -> f64 {
    let poly: Vec<Vec3> = mesh.fan(v).iter().map(|&f| mesh.face_normal(f)).collect();
    let clipped = clip_hemisphere(&poly, u);
    spherical_polygon_area(&clipped)
}

fn clip_hemisphere(poly: &[Vec3], u: &Vec3) -> Vec<Vec3> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let da = a.dot(u);
        let db = b.dot(u);
        if da >= 0.0 {
            out.push(a);
        }
        if (da >= 0.0) != (db >= 0.0) {
            let x = a * db.abs() + b * da.abs();
            let len = x.norm();
            if len > 0.0 {
                out.push(x / len);
            }
        }
    }
    out
}

/// Area of a spherical polygon with counter-clockwise vertices on the unit sphere.
pub(crate) fn spherical_polygon_area(poly: &[Vec3]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let a = poly[0];
    let mut area = 0.0;
    for w in poly[1..].windows(2) {
        area += spherical_triangle_area(&a, &w[0], &w[1]);
    }
    area
}

/// Signed area of the spherical triangle `abc` (Van Oosterom–Strackee).
pub(crate) fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let det = a.dot(&b.cross(c));
    let denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * det.atan2(denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::ConvexMesh;

    #[test]
    fn cube_corner_is_half_pi() {
        let m = ConvexMesh::unit_cube();
        assert!((angle_defect(&m, 7).unwrap() - PI / 2.0).abs() < 1e-14);
        assert!(angle_defect(&m, 8).is_err());
    }

    #[test]
    fn tetrahedron_vertex_is_pi() {
        let m = ConvexMesh::tetrahedron();
        for v in 0..4 {
            assert!((angle_defect(&m, v).unwrap() - PI).abs() < 1e-12);
        }
        assert!((total_defect(&m) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn gauss_image_area_equals_defect() {
        let m = ConvexMesh::tetrahedron();
        let up = Vec3::new(0.3, -0.2, 0.9).normalize();
        for v in 0..4u32 {
            let full = clipped_defect(&m, v, &Vec3::new(0.0, 0.0, 0.0));
            // zero direction keeps everything (all dot products are 0 >= 0)
            assert!((full - m.defects()[v as usize]).abs() < 1e-12);
            let dark = clipped_defect(&m, v, &up);
            let bright = clipped_defect(&m, v, &(-up));
            assert!((dark + bright - m.defects()[v as usize]).abs() < 1e-12);
        }
        let dark_total: f64 = (0..4).map(|v| clipped_defect(&m, v, &up)).sum();
        assert!((dark_total - 2.0 * PI).abs() < 1e-12);
    }
}
