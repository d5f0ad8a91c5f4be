//! Exact polyhedral shortest paths with certificates.
//!
//! [`shortest_path`] seeds a face strip from a Steiner-graph search, pulls the
//! path taut inside the strip with the funnel algorithm, and reroutes the
//! strip around every vertex the taut path catches on. The returned
//! [`GeodesicCertificate`] is recomputed from scratch on the final path.

mod funnel;
mod steiner;
mod trace;

pub use trace::trace_geodesic;

use serde::{Deserialize, Serialize};

use crate::curve::Polyline;
use crate::mesh::{ConvexMesh, SurfacePoint};
use crate::{GeoError, Result, ToleranceProfile, Vec3};

/// A path on the mesh: straight inside faces, bending only at edge crossings.
#[derive(Debug, Clone)]
pub struct SurfacePath {
    line: Polyline,
    locations: Vec<SurfacePoint>,
    segment_faces: Vec<u32>,
    crossed: Vec<Option<u32>>,
}

/// One entry of the path JSON schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub face: u32,
    pub bary: [f64; 3],
    pub s: f64,
}

impl SurfacePath {
    /// Assembles a path and checks its invariants: consecutive samples share
    /// the segment face, samples lie on their faces, arc length increases.
    pub fn from_parts(
        mesh: &ConvexMesh,
        points: Vec<Vec3>,
        locations: Vec<SurfacePoint>,
        segment_faces: Vec<u32>,
        crossed: Vec<Option<u32>>,
    ) -> Result<Self> {
        let n = points.len();
        if n < 2 || locations.len() != n || crossed.len() != n || segment_faces.len() != n - 1 {
            return Err(GeoError::Precondition(format!(
                "inconsistent path arrays: {} points, {} locations, {} faces",
                n,
                locations.len(),
                segment_faces.len()
            )));
        }
        let tol = 1e-10 * mesh.diameter();
        for (k, (x, loc)) in points.iter().zip(&locations).enumerate() {
            if (mesh.position(loc) - x).norm() > tol.max(1e-12) {
                return Err(GeoError::OffSurface(format!("sample {k} is off its face")));
            }
        }
        let line = Polyline::new(points);
        if line.arclength().windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeoError::Degenerate("arc length is not strictly increasing".into()));
        }
        Ok(Self { line, locations, segment_faces, crossed })
    }

    pub fn line(&self) -> &Polyline {
        &self.line
    }
    pub fn points(&self) -> &[Vec3] {
        self.line.points()
    }
    pub fn arclength(&self) -> &[f64] {
        self.line.arclength()
    }
    pub fn length(&self) -> f64 {
        self.line.length()
    }
    pub fn locations(&self) -> &[SurfacePoint] {
        &self.locations
    }
    /// Face containing each segment.
    pub fn segment_faces(&self) -> &[u32] {
        &self.segment_faces
    }
    /// Edge crossed at each sample (`None` at the endpoints).
    pub fn crossed_edges(&self) -> &[Option<u32>] {
        &self.crossed
    }
    pub fn start(&self) -> SurfacePoint {
        self.locations[0]
    }
    pub fn end(&self) -> SurfacePoint {
        self.locations[self.locations.len() - 1]
    }
    pub fn num_samples(&self) -> usize {
        self.locations.len()
    }

    pub fn samples(&self) -> Vec<PathSample> {
        self.locations
            .iter()
            .zip(self.arclength())
            .map(|(l, &s)| PathSample { face: l.face, bary: l.bary, s })
            .collect()
    }

    /// The same path traversed backwards.
    pub fn reversed(&self, mesh: &ConvexMesh) -> Self {
        let mut points = self.points().to_vec();
        points.reverse();
        let n = points.len();
        let mut locations = self.locations.clone();
        locations.reverse();
        let mut segment_faces = self.segment_faces.clone();
        segment_faces.reverse();
        let mut crossed = self.crossed.clone();
        crossed.reverse();
        // interior samples are located on the outgoing face
        for k in 1..n - 1 {
            locations[k] = express_on(mesh, &locations[k], segment_faces[k]);
        }
        Self { line: Polyline::new(points), locations, segment_faces, crossed }
    }

    /// Sub-path between arc lengths `t0 < t1`.
    pub fn slice(&self, mesh: &ConvexMesh, t0: f64, t1: f64) -> Result<Self> {
        let total = self.length();
        let (t0, t1) = (t0.max(0.0), t1.min(total));
        if !(t1 > t0) {
            return Err(GeoError::Degenerate(format!("empty sub-path [{t0}, {t1}]")));
        }
        let s = self.arclength();
        let eps = 1e-12 * total.max(1.0);
        let k0 = self.line.segment_at(t0);
        let k1 = self.line.segment_at(t1);
        let at = |t: f64, k: usize| -> (Vec3, SurfacePoint) {
            let x = self.line.point_at(t);
            let f = self.segment_faces[k];
            (x, SurfacePoint::new(f, mesh.barycentric(f, &x)))
        };
        let mut points = Vec::new();
        let mut locations = Vec::new();
        let mut faces = Vec::new();
        let mut crossed = Vec::new();
        if (t0 - s[k0]).abs() <= eps {
            points.push(self.points()[k0]);
            locations.push(express_on(mesh, &self.locations[k0], self.segment_faces[k0]));
        } else {
            let (x, l) = at(t0, k0);
            points.push(x);
            locations.push(l);
        }
        crossed.push(None);
        faces.push(self.segment_faces[k0]);
        for k in k0 + 1..=k1 {
            if s[k] >= t1 - eps {
                break;
            }
            points.push(self.points()[k]);
            locations.push(self.locations[k]);
            crossed.push(self.crossed[k]);
            faces.push(self.segment_faces[k]);
        }
        let last_face = *faces.last().unwrap();
        let (x, _) = at(t1, k1);
        let x = if (s[k1 + 1] - t1).abs() <= eps { self.points()[k1 + 1] } else { x };
        points.push(x);
        locations.push(SurfacePoint::new(last_face, clamp_bary(mesh.barycentric(last_face, &x))));
        crossed.push(None);
        Self::from_parts(mesh, points, locations, faces, crossed)
    }
}

fn clamp_bary(b: [f64; 3]) -> [f64; 3] {
    let c = b.map(|x| x.max(0.0));
    let s: f64 = c.iter().sum();
    c.map(|x| x / s)
}

/// Re-expresses a point lying on the boundary of face `f` in that face.
fn express_on(mesh: &ConvexMesh, loc: &SurfacePoint, f: u32) -> SurfacePoint {
    if loc.face == f {
        return *loc;
    }
    let t = mesh.triangle(loc.face);
    let weight = |v: u32| t.iter().position(|&x| x == v).map(|k| loc.bary[k]).unwrap_or(0.0);
    SurfacePoint::new(f, mesh.triangle(f).map(weight))
}

/// Machine-checkable evidence that a path is a shortest geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCertificate {
    /// Unfolded turning at every edge crossing (radians, signed).
    pub turning: Vec<f64>,
    /// Largest absolute unfolded turning.
    pub residual: f64,
    pub length: f64,
    /// Length of the Steiner-graph path at density `k`.
    pub upper_bound: f64,
    /// Steiner-graph length at density `2k` minus the per-crossing snapping slack.
    pub lower_bound: f64,
    /// `length - lower_bound`.
    pub gap: f64,
    /// Smallest distance from an edge crossing to an endpoint of its edge.
    pub min_vertex_clearance: f64,
    pub reroutes: usize,
    pub certified: bool,
}

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShortestPathOptions {
    /// Steiner points per edge for the initial graph search.
    pub steiner: usize,
    /// Maximum number of strip reroutes.
    pub max_reroutes: usize,
    pub tolerances: ToleranceProfile,
}

impl Default for ShortestPathOptions {
    fn default() -> Self {
        Self { steiner: 4, max_reroutes: 400, tolerances: ToleranceProfile::default() }
    }
}

/// Signed turning of the path at each edge crossing, measured after
/// unfolding the two faces adjacent to the crossed edge into a common plane.
pub fn unfolded_turning(mesh: &ConvexMesh, path: &SurfacePath) -> Vec<f64> {
    let pts = path.points();
    let mut out = Vec::new();
    for k in 1..pts.len() - 1 {
        let Some(e) = path.crossed_edges()[k] else { continue };
        let edge = mesh.edge(e);
        let (a, b) = (mesh.vertex(edge.v[0]), mesh.vertex(edge.v[1]));
        let axis = (b - a).normalize();
        let flat = |y: &Vec3, side: f64| -> (f64, f64) {
            let r = y - a;
            let along = r.dot(&axis);
            (along, side * (r - axis * along).norm())
        };
        let (x0, y0) = flat(&pts[k - 1], 1.0);
        let (x1, y1) = flat(&pts[k], 0.0);
        let (x2, y2) = flat(&pts[k + 1], -1.0);
        let (u, v) = ((x1 - x0, y1 - y0), (x2 - x1, y2 - y1));
        out.push((u.0 * v.1 - u.1 * v.0).atan2(u.0 * v.0 + u.1 * v.1));
    }
    out
}

fn min_clearance(mesh: &ConvexMesh, path: &SurfacePath) -> f64 {
    let mut best = f64::INFINITY;
    for (k, e) in path.crossed_edges().iter().enumerate() {
        if let Some(e) = e {
            let edge = mesh.edge(*e);
            let x = path.points()[k];
            for v in edge.v {
                best = best.min((mesh.vertex(v) - x).norm());
            }
        }
    }
    best
}

/// A shortest path with its certificate.
#[derive(Debug, Clone)]
pub struct Geodesic {
    pub path: SurfacePath,
    pub certificate: GeodesicCertificate,
}

/// Shortest path between two surface points.
///
/// Paths that cannot be straightened within the reroute budget are still
/// returned, with `certificate.certified == false`.
pub fn shortest_path(mesh: &ConvexMesh, p: &SurfacePoint, q: &SurfacePoint, options: &ShortestPathOptions) -> Result<Geodesic> {
    let p = mesh.check_point(p)?;
    let q = mesh.check_point(q)?;
    let pp = mesh.position(&p);
    let qq = mesh.position(&q);
    let tol = &options.tolerances;
    let tau_len = tol.len_rel * mesh.diameter();
    if (pp - qq).norm() <= 1e-9 * mesh.diameter() {
        return Err(GeoError::Degenerate("start and end points coincide".into()));
    }
    let pl = mesh.faces_containing(&p);
    let ql = mesh.faces_containing(&q);
    let k = options.steiner.max(1);

    let mut best: Option<(funnel::StripPath, usize)> = None;
    let mut bounds = [f64::INFINITY; 2];
    for (slot, density) in [k, 2 * k].into_iter().enumerate() {
        let graph = steiner::SteinerGraph::new(mesh, density);
        let gp = graph
            .shortest(&pl, &ql)
            .ok_or_else(|| GeoError::Degenerate("Steiner graph is disconnected".into()))?;
        bounds[slot] = gp.length;
        let strip = funnel::strip_from_graph(mesh, &gp.nodes, &gp.faces, |n| graph.as_vertex(n));
        if let Some(found) = funnel::relax(mesh, strip, &pl, &ql, options.max_reroutes) {
            let better = match &best {
                None => true,
                Some((b, _)) => {
                    (found.0.bends.is_empty() && !b.bends.is_empty())
                        || (found.0.bends.is_empty() == b.bends.is_empty() && found.0.length < b.length - tau_len * 1e-3)
                }
            };
            if better {
                best = Some(found);
            }
        }
    }
    let (sp, reroutes) = best.ok_or_else(|| GeoError::Degenerate("could not build a face strip".into()))?;
    let path = SurfacePath::from_parts(mesh, sp.points, sp.locations, sp.segment_faces, sp.crossed)?;
    let turning = unfolded_turning(mesh, &path);
    let residual = turning.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    let length = path.length();
    let slack: f64 = path
        .crossed_edges()
        .iter()
        .flatten()
        .map(|&e| steiner::spacing(mesh, e, 2 * k))
        .sum();
    let upper_bound = bounds[0].min(bounds[1]);
    let lower_bound = bounds[1] - slack;
    let certified = sp.bends.is_empty()
        && residual <= tol.geo
        && length <= upper_bound + tau_len
        && length >= lower_bound - tau_len;
    let certificate = GeodesicCertificate {
        turning,
        residual,
        length,
        upper_bound,
        lower_bound,
        gap: length - lower_bound,
        min_vertex_clearance: min_clearance(mesh, &path),
        reroutes,
        certified,
    };
    Ok(Geodesic { path, certificate })
}
