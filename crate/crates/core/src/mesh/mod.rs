//! Closed convex triangulated surfaces.
//!
//! A [`ConvexMesh`] is immutable after construction. Construction only checks
//! connectivity (closed, consistently oriented 2-manifold); convexity is a
//! separate verdict produced by [`validate_convex`].

mod curvature;
mod generate;
mod hull;
mod io;
mod validate;

pub use curvature::{angle_defect, clipped_defect, total_defect};
pub use generate::{generate_surface, uniform_on_sphere, LipschitzProfile, RadialLaw, SurfaceFamily, SurfaceKind};
pub use hull::{convex_hull, Hull};
pub use io::{read_mesh, read_obj, read_off, write_obj, write_off, MeshDescriptor};
pub use validate::{validate_convex, ValidationReport, Violation};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{GeoError, Result, Vec3};

/// Where a mesh came from. Part of the reproducibility manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn imported(source: &str) -> Self {
        Self {
            generator: "import".into(),
            params: serde_json::json!({ "source": source }),
            seed: None,
        }
    }
}

/// Undirected edge with its two incident faces. `faces[0]` owns the directed
/// edge `v[0] -> v[1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub v: [u32; 2],
    pub faces: [u32; 2],
}

impl Edge {
    pub fn other_face(&self, f: u32) -> u32 {
        if self.faces[0] == f {
            self.faces[1]
        } else {
            self.faces[0]
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvexMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[u32; 3]>,
    normals: Vec<Vec3>,
    edges: Vec<Edge>,
    /// `face_edges[f][k]` is the edge `(tri[k], tri[k + 1])`.
    face_edges: Vec<[u32; 3]>,
    /// Incident faces of each vertex in counter-clockwise order seen from outside.
    fans: Vec<Vec<u32>>,
    edge_lookup: HashMap<(u32, u32), u32>,
    defects: Vec<f64>,
    diameter: f64,
    provenance: Provenance,
    graph_region: Option<Vec<bool>>,
}

/// A point on the surface addressed by a face and barycentric coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub face: u32,
    pub bary: [f64; 3],
}

const BARY_EPS: f64 = 1e-12;

impl SurfacePoint {
    pub fn new(face: u32, bary: [f64; 3]) -> Self {
        Self { face, bary }
    }

    /// `f<index>:<b1>,<b2>` with the third coordinate implied.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || GeoError::Precondition(format!("bad surface point `{text}`, expected f<index>:<b1>,<b2>"));
        let rest = text.strip_prefix('f').ok_or_else(bad)?;
        let (face, coords) = rest.split_once(':').ok_or_else(bad)?;
        let face: u32 = face.trim().parse().map_err(|_| bad())?;
        let (b1, b2) = coords.split_once(',').ok_or_else(bad)?;
        let b1: f64 = b1.trim().parse().map_err(|_| bad())?;
        let b2: f64 = b2.trim().parse().map_err(|_| bad())?;
        Ok(Self::new(face, [b1, b2, 1.0 - b1 - b2]))
    }
}

impl ConvexMesh {
    /// Builds the connectivity of a closed oriented triangle mesh.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>, provenance: Provenance) -> Result<Self> {
        let nv = vertices.len();
        if nv < 4 || triangles.len() < 4 {
            return Err(GeoError::Structural(format!(
                "need at least 4 vertices and 4 triangles, got {} and {}",
                nv,
                triangles.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(GeoError::Structural(format!("vertex {i} has non-finite coordinates")));
        }
        let mut directed: HashMap<(u32, u32), u32> = HashMap::with_capacity(triangles.len() * 3);
        let mut normals = Vec::with_capacity(triangles.len());
        for (f, t) in triangles.iter().enumerate() {
            if t.iter().any(|&i| i as usize >= nv) {
                return Err(GeoError::Structural(format!("triangle {f} references a missing vertex")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(GeoError::Structural(format!("triangle {f} repeats a vertex")));
            }
            let [a, b, c] = t.map(|i| vertices[i as usize]);
            let n = (b - a).cross(&(c - a));
            let norm = n.norm();
            if !(norm > 0.0) {
                return Err(GeoError::Structural(format!("triangle {f} has zero area")));
            }
            normals.push(n / norm);
            for k in 0..3 {
                let key = (t[k], t[(k + 1) % 3]);
                if directed.insert(key, f as u32).is_some() {
                    return Err(GeoError::Structural(format!(
                        "directed edge {}->{} used twice (non-manifold or inconsistent orientation)",
                        key.0, key.1
                    )));
                }
            }
        }
        let mut edges = Vec::with_capacity(triangles.len() * 3 / 2);
        let mut edge_lookup = HashMap::with_capacity(triangles.len() * 3 / 2);
        let mut face_edges = vec![[u32::MAX; 3]; triangles.len()];
        for (f, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = match edge_lookup.get(&key) {
                    Some(&id) => id,
                    None => {
                        let Some(&g) = directed.get(&(b, a)) else {
                            return Err(GeoError::Structural(format!(
                                "edge {a}-{b} borders only one triangle (open surface)"
                            )));
                        };
                        let id = edges.len() as u32;
                        edges.push(Edge { v: [a, b], faces: [f as u32, g] });
                        edge_lookup.insert(key, id);
                        id
                    }
                };
                face_edges[f][k] = id;
            }
        }
        let mut incident: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for (f, t) in triangles.iter().enumerate() {
            for &v in t {
                incident[v as usize].push(f as u32);
            }
        }
        let mut fans = Vec::with_capacity(nv);
        for (v, inc) in incident.iter().enumerate() {
            let Some(&start) = inc.iter().min() else {
                return Err(GeoError::Structural(format!("vertex {v} is not used by any triangle")));
            };
            let v = v as u32;
            let mut fan = vec![start];
            let mut f = start;
            loop {
                let t = triangles[f as usize];
                let k = t.iter().position(|&x| x == v).unwrap();
                let b = t[(k + 2) % 3];
                let next = directed[&(v, b)];
                if next == start {
                    break;
                }
                fan.push(next);
                f = next;
                if fan.len() > inc.len() {
                    break;
                }
            }
            if fan.len() != inc.len() {
                return Err(GeoError::Structural(format!(
                    "vertex {v} is non-manifold: fan covers {} of {} incident triangles",
                    fan.len(),
                    inc.len()
                )));
            }
            fans.push(fan);
        }
        let (lo, hi) = bounding_box(&vertices);
        let diameter = (hi - lo).norm();
        let mut mesh = Self {
            vertices,
            triangles,
            normals,
            edges,
            face_edges,
            fans,
            edge_lookup,
            defects: Vec::new(),
            diameter,
            provenance,
            graph_region: None,
        };
        mesh.defects = (0..nv).map(|v| curvature::defect_raw(&mesh, v as u32)).collect();
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_faces(&self) -> usize {
        self.triangles.len()
    }
    pub fn vertex(&self, v: u32) -> Vec3 {
        self.vertices[v as usize]
    }
    pub fn triangle(&self, f: u32) -> [u32; 3] {
        self.triangles[f as usize]
    }
    pub fn face_normal(&self, f: u32) -> Vec3 {
        self.normals[f as usize]
    }
    pub fn face_normals(&self) -> &[Vec3] {
        &self.normals
    }
    pub fn face_vertices(&self, f: u32) -> [Vec3; 3] {
        self.triangles[f as usize].map(|i| self.vertices[i as usize])
    }
    pub fn face_edges(&self, f: u32) -> [u32; 3] {
        self.face_edges[f as usize]
    }
    pub fn edge(&self, e: u32) -> &Edge {
        &self.edges[e as usize]
    }
    pub fn edge_between(&self, a: u32, b: u32) -> Option<u32> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }
    /// Edge shared by two faces, if any.
    pub fn shared_edge(&self, f: u32, g: u32) -> Option<u32> {
        self.face_edges[f as usize]
            .iter()
            .copied()
            .find(|&e| self.edges[e as usize].other_face(f) == g && self.edges[e as usize].faces.contains(&f))
    }
    /// Counter-clockwise fan of faces around `v`.
    pub fn fan(&self, v: u32) -> &[u32] {
        &self.fans[v as usize]
    }
    pub fn defects(&self) -> &[f64] {
        &self.defects
    }
    /// Bounding-box diagonal; every relative tolerance scales with it.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
    pub fn face_area(&self, f: u32) -> f64 {
        let [a, b, c] = self.face_vertices(f);
        0.5 * (b - a).cross(&(c - a)).norm()
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i as usize]);
                a.dot(&b.cross(&c))
            })
            .sum::<f64>()
            / 6.0
    }

    /// Faces flagged as lying on the graph of a Lipschitz function, when the
    /// mesh was generated from such a family.
    pub fn graph_region(&self) -> Option<&[bool]> {
        self.graph_region.as_deref()
    }
    pub(crate) fn set_graph_region(&mut self, region: Vec<bool>) {
        self.graph_region = Some(region);
    }
    pub(crate) fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    /// Angle of face `f` at its corner `k`.
    pub fn corner_angle(&self, f: u32, k: usize) -> f64 {
        let t = self.triangles[f as usize];
        let p = self.vertices[t[k] as usize];
        let a = self.vertices[t[(k + 1) % 3] as usize] - p;
        let b = self.vertices[t[(k + 2) % 3] as usize] - p;
        a.cross(&b).norm().atan2(a.dot(&b))
    }

    pub fn position(&self, p: &SurfacePoint) -> Vec3 {
        let [a, b, c] = self.face_vertices(p.face);
        a * p.bary[0] + b * p.bary[1] + c * p.bary[2]
    }

    /// Validates a surface point: face in range, coordinates sum to one and
    /// are nonnegative up to rounding. Returns the point with clamped coordinates.
    pub fn check_point(&self, p: &SurfacePoint) -> Result<SurfacePoint> {
        if p.face as usize >= self.triangles.len() {
            return Err(GeoError::OffSurface(format!(
                "face {} does not exist ({} faces)",
                p.face,
                self.triangles.len()
            )));
        }
        let sum: f64 = p.bary.iter().sum();
        if !p.bary.iter().all(|b| b.is_finite()) || (sum - 1.0).abs() > 1e-9 || p.bary.iter().any(|&b| b < -1e-9) {
            return Err(GeoError::OffSurface(format!(
                "barycentric coordinates {:?} on face {} do not describe a point of the face",
                p.bary, p.face
            )));
        }
        let mut bary = p.bary.map(|b| if b.abs() < BARY_EPS { 0.0 } else { b.max(0.0) });
        let s: f64 = bary.iter().sum();
        bary.iter_mut().for_each(|b| *b /= s);
        Ok(SurfacePoint { face: p.face, bary })
    }

    /// Every face containing the point, with the point expressed in that face.
    pub fn faces_containing(&self, p: &SurfacePoint) -> Vec<SurfacePoint> {
        let t = self.triangles[p.face as usize];
        let zero: Vec<usize> = (0..3).filter(|&k| p.bary[k] <= BARY_EPS).collect();
        let weight_of = |v: u32| -> f64 { t.iter().position(|&x| x == v).map(|k| p.bary[k]).unwrap_or(0.0) };
        let express = |g: u32| -> SurfacePoint {
            let tg = self.triangles[g as usize];
            SurfacePoint { face: g, bary: tg.map(weight_of) }
        };
        match zero.len() {
            0 => vec![*p],
            1 => {
                let k = zero[0];
                let (a, b) = (t[(k + 1) % 3], t[(k + 2) % 3]);
                let e = self.edge_between(a, b).expect("face edge");
                let g = self.edges[e as usize].other_face(p.face);
                vec![*p, express(g)]
            }
            _ => {
                let k = (0..3).find(|k| !zero.contains(k)).unwrap_or(0);
                let v = t[k];
                self.fans[v as usize]
                    .iter()
                    .map(|&g| {
                        let tg = self.triangles[g as usize];
                        let mut bary = [0.0; 3];
                        bary[tg.iter().position(|&x| x == v).unwrap()] = 1.0;
                        SurfacePoint { face: g, bary }
                    })
                    .collect()
            }
        }
    }

    /// Vertex coinciding with the point, if the point sits on a vertex.
    pub fn point_vertex(&self, p: &SurfacePoint) -> Option<u32> {
        let t = self.triangles[p.face as usize];
        (0..3).find(|&k| p.bary[k] >= 1.0 - BARY_EPS).map(|k| t[k])
    }

    /// Barycentric coordinates of `x` (assumed to lie in the plane of `f`).
    pub fn barycentric(&self, f: u32, x: &Vec3) -> [f64; 3] {
        let [a, b, c] = self.face_vertices(f);
        let n = (b - a).cross(&(c - a));
        let nn = n.norm_squared();
        let l0 = (c - b).cross(&(x - b)).dot(&n) / nn;
        let l1 = (a - c).cross(&(x - c)).dot(&n) / nn;
        [l0, l1, 1.0 - l0 - l1]
    }

    /// Mean of the vertices; an interior point of the body.
    pub fn centroid(&self) -> Vec3 {
        self.vertices.iter().sum::<Vec3>() / self.vertices.len() as f64
    }

    /// Where the ray from `origin` (inside the body) in direction `d` leaves
    /// the surface.
    pub fn ray_exit(&self, origin: &Vec3, d: &Vec3) -> Option<SurfacePoint> {
        let hits: Vec<(f64, u32)> = self
            .normals
            .iter()
            .enumerate()
            .filter(|(_, n)| n.dot(d) > 0.0)
            .map(|(f, n)| (n.dot(&(self.vertices[self.triangles[f][0] as usize] - origin)) / n.dot(d), f as u32))
            .collect();
        let t_min = hits.iter().map(|h| h.0).fold(f64::INFINITY, f64::min);
        if !t_min.is_finite() {
            return None;
        }
        let x = origin + d * t_min;
        // coplanar faces tie on t; keep the one that contains the point
        let slack = 1e-9 * t_min.abs().max(self.diameter);
        let (_, f, bary) = hits
            .iter()
            .filter(|h| h.0 <= t_min + slack)
            .map(|&(_, f)| {
                let b = self.barycentric(f, &x);
                (b.iter().copied().fold(f64::INFINITY, f64::min), f, b)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))?;
        self.check_point(&SurfacePoint { face: f, bary }).ok()
    }

    /// Surface point seen from the centroid in direction `d`.
    pub fn point_toward(&self, d: &Vec3) -> Option<SurfacePoint> {
        self.ray_exit(&self.centroid(), d)
    }

    /// Deterministic content hash of the vertex and triangle arrays.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update((self.vertices.len() as u64).to_le_bytes());
        for v in &self.vertices {
            for c in v.iter() {
                h.update(c.to_le_bytes());
            }
        }
        h.update((self.triangles.len() as u64).to_le_bytes());
        for t in &self.triangles {
            for i in t {
                h.update(i.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Regular tetrahedron inscribed in the unit sphere.
    pub fn tetrahedron() -> Self {
        let s = 1.0 / 3f64.sqrt();
        let v = vec![
            Vec3::new(s, s, s),
            Vec3::new(s, -s, -s),
            Vec3::new(-s, s, -s),
            Vec3::new(-s, -s, s),
        ];
        let t = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
        let prov = Provenance { generator: "tetrahedron".into(), params: serde_json::json!({}), seed: None };
        Self::new(v, t, prov).expect("tetrahedron is a valid closed mesh")
    }

    /// Unit cube `[0,1]^3`, each square split into two triangles.
    ///
    /// Face order: bottom (0,1), front y=0 (2,3), right x=1 (4,5),
    /// back y=1 (6,7), left x=0 (8,9), top (10,11).
    pub fn unit_cube() -> Self {
        let v: Vec<Vec3> = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        let quads: [[u32; 4]; 6] = [
            [0, 2, 3, 1], // z = 0
            [0, 1, 5, 4], // y = 0
            [1, 3, 7, 5], // x = 1
            [3, 2, 6, 7], // y = 1
            [2, 0, 4, 6], // x = 0
            [4, 5, 7, 6], // z = 1
        ];
        let mut t = Vec::with_capacity(12);
        for q in quads {
            t.push([q[0], q[1], q[2]]);
            t.push([q[0], q[2], q[3]]);
        }
        let prov = Provenance { generator: "cube".into(), params: serde_json::json!({}), seed: None };
        Self::new(v, t, prov).expect("cube is a valid closed mesh")
    }
}

pub(crate) fn bounding_box(points: &[Vec3]) -> (Vec3, Vec3) {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}
