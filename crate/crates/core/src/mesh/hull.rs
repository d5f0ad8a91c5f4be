//! Incremental 3D convex hull with conflict lists.
//!
//! Points within `eps` of a face plane count as coplanar and are not
//! added to the hull; they are reported through [`Hull::used`].

use std::collections::HashMap;

use crate::{GeoError, Result, Vec3};

#[derive(Debug, Clone)]
pub struct Hull {
    /// Outward-oriented triangles indexing the input point array.
    pub triangles: Vec<[u32; 3]>,
    /// `used[i]` is true when input point `i` is a hull vertex.
    pub used: Vec<bool>,
}

impl Hull {
    /// Compacts the hull to its own vertex array, keeping input order.
    pub fn compact(&self, points: &[Vec3]) -> (Vec<Vec3>, Vec<[u32; 3]>, Vec<u32>) {
        let mut remap = vec![u32::MAX; points.len()];
        let mut verts = Vec::new();
        let mut origin = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if self.used[i] {
                remap[i] = verts.len() as u32;
                verts.push(*p);
                origin.push(i as u32);
            }
        }
        let tris = self.triangles.iter().map(|t| t.map(|i| remap[i as usize])).collect();
        (verts, tris, origin)
    }
}

struct Face {
    v: [u32; 3],
    normal: Vec3,
    offset: f64,
    outside: Vec<u32>,
    alive: bool,
}

impl Face {
    fn new(v: [u32; 3], pts: &[Vec3]) -> Self {
        let [a, b, c] = v.map(|i| pts[i as usize]);
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        let normal = if len > 0.0 { n / len } else { n };
        Face { v, normal, offset: normal.dot(&a), outside: Vec::new(), alive: true }
    }
    fn dist(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Convex hull of `points`. Fails when the points are (nearly) coplanar.
pub fn convex_hull(points: &[Vec3]) -> Result<Hull> {
    let n = points.len();
    if n < 4 {
        return Err(GeoError::Degenerate(format!("convex hull needs 4 points, got {n}")));
    }
    let (lo, hi) = super::bounding_box(points);
    let scale = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale;

    let simplex = initial_simplex(points, eps)?;
    let mut faces: Vec<Face> = Vec::new();
    let mut owner: HashMap<(u32, u32), usize> = HashMap::new();
    let [a, b, c, d] = simplex;
    let orient = (points[b as usize] - points[a as usize])
        .cross(&(points[c as usize] - points[a as usize]))
        .dot(&(points[d as usize] - points[a as usize]));
    let base = if orient > 0.0 { [a, c, b] } else { [a, b, c] };
    let tris = [
        base,
        [base[1], base[0], d],
        [base[2], base[1], d],
        [base[0], base[2], d],
    ];
    for t in tris {
        add_face(&mut faces, &mut owner, t, points);
    }
    let mut used = vec![false; n];
    for i in simplex {
        used[i as usize] = true;
    }
    for i in 0..n as u32 {
        if used[i as usize] {
            continue;
        }
        let p = points[i as usize];
        if let Some(f) = faces.iter().position(|f| f.dist(&p) > eps) {
            faces[f].outside.push(i);
        }
    }

    let mut cursor = 0usize;
    loop {
        while cursor < faces.len() && (!faces[cursor].alive || faces[cursor].outside.is_empty()) {
            cursor += 1;
        }
        if cursor >= faces.len() {
            break;
        }
        let start = cursor;
        let eye = {
            let f = &faces[start];
            *f.outside
                .iter()
                .max_by(|&&x, &&y| {
                    f.dist(&points[x as usize])
                        .total_cmp(&f.dist(&points[y as usize]))
                        .then(y.cmp(&x))
                })
                .unwrap()
        };
        let ep = points[eye as usize];

        // visible region by flood fill from the start face
        let mut visible = vec![start];
        let mut is_visible: HashMap<usize, bool> = HashMap::new();
        is_visible.insert(start, true);
        let mut horizon: Vec<(u32, u32)> = Vec::new();
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let v = faces[f].v;
            for k in 0..3 {
                let (p, q) = (v[k], v[(k + 1) % 3]);
                let g = owner[&(q, p)];
                match is_visible.get(&g) {
                    Some(true) => {}
                    Some(false) => horizon.push((p, q)),
                    None => {
                        if faces[g].dist(&ep) > eps {
                            is_visible.insert(g, true);
                            visible.push(g);
                            stack.push(g);
                        } else {
                            is_visible.insert(g, false);
                            horizon.push((p, q));
                        }
                    }
                }
            }
        }
        // horizon edges found from the visible side whose far face was later
        // marked visible must be dropped
        horizon.retain(|&(p, q)| !is_visible.get(&owner[&(q, p)]).copied().unwrap_or(false));

        let mut orphans: Vec<u32> = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            let v = faces[f].v;
            for k in 0..3 {
                owner.remove(&(v[k], v[(k + 1) % 3]));
            }
            orphans.extend(faces[f].outside.drain(..));
        }
        used[eye as usize] = true;
        let first_new = faces.len();
        for &(p, q) in &horizon {
            add_face(&mut faces, &mut owner, [p, q, eye], points);
        }
        for o in orphans {
            if o == eye {
                continue;
            }
            let pt = points[o as usize];
            if let Some(f) = (first_new..faces.len()).find(|&f| faces[f].dist(&pt) > eps) {
                faces[f].outside.push(o);
            }
        }
        cursor = cursor.min(first_new);
    }

    let triangles: Vec<[u32; 3]> = faces.iter().filter(|f| f.alive).map(|f| f.v).collect();
    // points that were consumed as eyes but later buried are not hull vertices
    let mut on_hull = vec![false; n];
    for t in &triangles {
        for &i in t {
            on_hull[i as usize] = true;
        }
    }
    Ok(Hull { triangles, used: on_hull })
}

fn add_face(faces: &mut Vec<Face>, owner: &mut HashMap<(u32, u32), usize>, v: [u32; 3], pts: &[Vec3]) {
    let id = faces.len();
    for k in 0..3 {
        owner.insert((v[k], v[(k + 1) % 3]), id);
    }
    faces.push(Face::new(v, pts));
}

fn initial_simplex(points: &[Vec3], eps: f64) -> Result<[u32; 4]> {
    let degenerate = || GeoError::Degenerate("points are (nearly) coplanar".into());
    let mut a = 0usize;
    for (i, p) in points.iter().enumerate() {
        let q = points[a];
        if (p.x, p.y, p.z) < (q.x, q.y, q.z) {
            a = i;
        }
    }
    let pa = points[a];
    let b = argmax(points, |p| (p - pa).norm_squared());
    let pb = points[b];
    let ab = pb - pa;
    if ab.norm() <= eps {
        return Err(degenerate());
    }
    let c = argmax(points, |p| ab.cross(&(p - pa)).norm_squared());
    let pc = points[c];
    let n = ab.cross(&(pc - pa));
    if n.norm() <= eps * ab.norm() {
        return Err(degenerate());
    }
    let nn = n.normalize();
    let d = argmax(points, |p| nn.dot(&(p - pa)).abs());
    if nn.dot(&(points[d] - pa)).abs() <= eps {
        return Err(degenerate());
    }
    Ok([a as u32, b as u32, c as u32, d as u32])
}

fn argmax(points: &[Vec3], key: impl Fn(&Vec3) -> f64) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, p) in points.iter().enumerate() {
        let v = key(p);
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{ConvexMesh, Provenance};

    #[test]
    fn cube_corners_with_interior_points() {
        let mut pts: Vec<Vec3> = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        pts.push(Vec3::new(0.5, 0.5, 0.5));
        pts.push(Vec3::new(0.5, 0.5, 1.0)); // coplanar with the top face
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.triangles.len(), 12);
        assert!(hull.used[..8].iter().all(|&u| u));
        assert!(!hull.used[8] && !hull.used[9]);
        let (v, t, _) = hull.compact(&pts);
        let m = ConvexMesh::new(v, t, Provenance::imported("test")).unwrap();
        assert!((m.signed_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coplanar_points_fail() {
        let pts: Vec<Vec3> = (0..10).map(|i| Vec3::new(i as f64, (i * i) as f64, 0.0)).collect();
        assert!(matches!(convex_hull(&pts), Err(GeoError::Degenerate(_))));
    }
}
