//! Straightest-path tracing: walk in a face along a fixed direction and
//! unfold the direction across every edge crossed.

use crate::mesh::{ConvexMesh, SurfacePoint};
use crate::{GeoError, Result, Vec3};

use super::SurfacePath;

const VERTEX_EPS: f64 = 1e-12;

fn project(mesh: &ConvexMesh, f: u32, d: &Vec3) -> Vec3 {
    let n = mesh.face_normal(f);
    d - n * n.dot(d)
}

/// Traces the geodesic leaving `start` in direction `direction` (projected to
/// the tangent plane of the start face) for arc length `length`.
///
/// Fails with [`GeoError::Degenerate`] when the trace runs into a vertex;
/// callers perturb the start direction in that case.
pub fn trace_geodesic(mesh: &ConvexMesh, start: &SurfacePoint, direction: &Vec3, length: f64) -> Result<SurfacePath> {
    let start = mesh.check_point(start)?;
    if !(length > 0.0) {
        return Err(GeoError::Precondition(format!("trace length must be positive, got {length}")));
    }
    // pick a face the direction points into
    let mut chosen = None;
    for loc in mesh.faces_containing(&start) {
        let d = project(mesh, loc.face, direction);
        if d.norm() < 1e-14 {
            continue;
        }
        let x = mesh.position(&loc);
        let b = mesh.barycentric(loc.face, &(x + d * 1e-7 * mesh.diameter() / d.norm()));
        if b.iter().all(|&c| c >= -1e-12) {
            chosen = Some((loc, d.normalize()));
            break;
        }
    }
    let (loc, mut d) = chosen.ok_or_else(|| GeoError::Degenerate("direction does not enter any face at the start point".into()))?;
    let mut f = loc.face;
    let mut x = mesh.position(&loc);
    let mut bary = loc.bary;
    let mut points = vec![x];
    let mut locations = vec![loc];
    let mut faces = Vec::new();
    let mut crossed = vec![None];
    let mut remaining = length;
    let max_steps = 50 * mesh.num_faces() + 1000;
    for _ in 0..max_steps {
        let tri = mesh.triangle(f);
        let b1 = mesh.barycentric(f, &(x + d));
        let db: Vec<f64> = (0..3).map(|i| b1[i] - bary[i]).collect();
        let mut exit: Option<(usize, f64)> = None;
        for i in 0..3 {
            if db[i] < -1e-15 {
                let t = (-bary[i] / db[i]).max(0.0);
                if exit.is_none_or(|(_, best)| t < best) {
                    exit = Some((i, t));
                }
            }
        }
        let (opp, t) = exit.ok_or_else(|| GeoError::Degenerate(format!("trace stalled in face {f}")))?;
        faces.push(f);
        if t >= remaining {
            let y = x + d * remaining;
            let b = mesh.barycentric(f, &y);
            points.push(y);
            locations.push(SurfacePoint::new(f, b));
            crossed.push(None);
            return SurfacePath::from_parts(mesh, points, locations, faces, crossed);
        }
        let mut nb = [0.0; 3];
        for i in 0..3 {
            nb[i] = bary[i] + t * db[i];
        }
        nb[opp] = 0.0;
        let (i1, i2) = ((opp + 1) % 3, (opp + 2) % 3);
        if nb[i1] < VERTEX_EPS || nb[i2] < VERTEX_EPS {
            return Err(GeoError::Degenerate(format!("trace hits a vertex of face {f}")));
        }
        let s = nb[i1] + nb[i2];
        let (w1, w2) = (nb[i1] / s, nb[i2] / s);
        let (v1, v2) = (tri[i1], tri[i2]);
        let (a, b) = (mesh.vertex(v1), mesh.vertex(v2));
        let y = a * w1 + b * w2;
        remaining -= (y - x).norm();
        let e = mesh.edge_between(v1, v2).expect("face edge");
        let g = mesh.edge(e).other_face(f);
        // rotate the direction about the edge into the plane of g
        let axis = (b - a).normalize();
        let along = d.dot(&axis);
        let across = (d - axis * along).norm();
        let tg = mesh.triangle(g);
        let w = tg.iter().copied().find(|&v| v != v1 && v != v2).expect("third vertex");
        let into = mesh.vertex(w) - a;
        let into = (into - axis * into.dot(&axis)).normalize();
        d = (axis * along + into * across).normalize();
        let mut gb = [0.0; 3];
        gb[tg.iter().position(|&v| v == v1).unwrap()] = w1;
        gb[tg.iter().position(|&v| v == v2).unwrap()] = w2;
        points.push(y);
        locations.push(SurfacePoint::new(g, gb));
        crossed.push(Some(e));
        f = g;
        x = y;
        bary = gb;
    }
    Err(GeoError::Degenerate("trace step budget exhausted".into()))
}
