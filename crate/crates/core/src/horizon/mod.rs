//! Dark and bright sides, horizons, crossing sequences, drifting frames and
//! plane sections.
//!
//! A face is dark for `u` when `<n_f, u> >= 0`; faces tied at zero (within
//! the genericity tolerance) are labeled dark so the horizon is always a set
//! of closed edge cycles.

mod crossings;
mod frame;
mod section;

pub use crossings::{find_crossings, Crossing, CrossingSequence};
pub use frame::{drift_angles, DriftSample};
pub use section::{plane_section_lengths, SectionArcs};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::mesh::{clipped_defect, ConvexMesh};
use crate::{GeoError, Result, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideLabeling {
    pub u: [f64; 3],
    /// `<n_f, u>` per face.
    pub values: Vec<f64>,
    pub dark: Vec<bool>,
    /// Faces with `|<n_f, u>|` below the genericity tolerance.
    pub ties: usize,
}

impl SideLabeling {
    pub fn direction(&self) -> Vec3 {
        Vec3::new(self.u[0], self.u[1], self.u[2])
    }
    pub fn is_dark(&self, f: u32) -> bool {
        self.dark[f as usize]
    }
}

fn check_unit(u: &Vec3) -> Result<()> {
    let n = u.norm();
    if (n - 1.0).abs() > 1e-9 {
        return Err(GeoError::Precondition(format!("direction must be a unit vector, |u| = {n}")));
    }
    Ok(())
}

/// Labels every face dark or bright for the direction `u`.
pub fn classify_sides(mesh: &ConvexMesh, u: &Vec3, tau_generic: f64) -> Result<SideLabeling> {
    check_unit(u)?;
    let values: Vec<f64> = mesh.face_normals().iter().map(|n| n.dot(u)).collect();
    let dark = values.iter().map(|&v| v >= -tau_generic).collect();
    let ties = values.iter().filter(|v| v.abs() < tau_generic).count();
    Ok(SideLabeling { u: [u.x, u.y, u.z], values, dark, ties })
}

/// Curvature of the dark side: the part of each vertex's Gauss image lying
/// in the hemisphere `<n, u> >= 0`, summed.
pub fn dark_curvature(mesh: &ConvexMesh, u: &Vec3) -> f64 {
    (0..mesh.num_vertices() as u32).map(|v| clipped_defect(mesh, v, u)).sum()
}

/// Closed edge cycles separating dark from bright faces. Each cycle is
/// oriented so its dark face lies on the left, seen from outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonCurve {
    /// Vertex cycles (the first vertex is not repeated at the end).
    pub cycles: Vec<Vec<u32>>,
    /// Edge ids of each cycle, aligned with `cycles`.
    pub edges: Vec<Vec<u32>>,
}

impl HorizonCurve {
    pub fn length(&self, mesh: &ConvexMesh) -> f64 {
        self.cycles
            .iter()
            .map(|c| (0..c.len()).map(|k| (mesh.vertex(c[(k + 1) % c.len()]) - mesh.vertex(c[k])).norm()).sum::<f64>())
            .sum()
    }

    /// OBJ polylines (`l` records) for inspection.
    pub fn to_obj(&self, mesh: &ConvexMesh) -> String {
        let mut s = String::new();
        let mut base = 1;
        for c in &self.cycles {
            for &v in c {
                let p = mesh.vertex(v);
                let _ = writeln!(s, "v {:?} {:?} {:?}", p.x, p.y, p.z);
            }
            let idx: Vec<String> = (0..=c.len()).map(|k| (base + k % c.len()).to_string()).collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
            base += c.len();
        }
        s
    }
}

/// Edges between differently labeled faces, chained into cycles.
pub fn extract_horizon(mesh: &ConvexMesh, labels: &SideLabeling, max_tie_fraction: f64) -> Result<HorizonCurve> {
    let faces = mesh.num_faces();
    if labels.ties as f64 > max_tie_fraction * faces as f64 {
        return Err(GeoError::NonGeneric { ties: labels.ties, faces });
    }
    // directed edges keyed by their tail vertex; BTreeMap keeps the chaining deterministic
    let mut out_edges: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    let mut count = 0;
    for (e, edge) in mesh.edges().iter().enumerate() {
        let [f0, f1] = edge.faces;
        let (d0, d1) = (labels.is_dark(f0), labels.is_dark(f1));
        if d0 == d1 {
            continue;
        }
        let (a, b) = if d0 { (edge.v[0], edge.v[1]) } else { (edge.v[1], edge.v[0]) };
        out_edges.entry(a).or_default().push((b, e as u32));
        count += 1;
    }
    for list in out_edges.values_mut() {
        list.sort_unstable_by_key(|&(_, e)| std::cmp::Reverse(e));
    }
    let mut cycles = Vec::new();
    let mut cycle_edges = Vec::new();
    let mut used = 0;
    while used < count {
        let start = *out_edges.iter().find(|(_, l)| !l.is_empty()).map(|(v, _)| v).expect("unused horizon edge");
        let mut cycle = vec![start];
        let mut edges = Vec::new();
        let mut v = start;
        loop {
            let Some((w, e)) = out_edges.get_mut(&v).and_then(|l| l.pop()) else {
                return Err(GeoError::Structural(format!("horizon is not closed at vertex {v}")));
            };
            used += 1;
            edges.push(e);
            if w == start {
                break;
            }
            cycle.push(w);
            v = w;
        }
        cycles.push(cycle);
        cycle_edges.push(edges);
    }
    Ok(HorizonCurve { cycles, edges: cycle_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_surface, SurfaceFamily, SurfaceKind};
    use std::f64::consts::PI;

    fn sphere(res: usize) -> ConvexMesh {
        generate_surface(&SurfaceFamily { kind: SurfaceKind::Ellipsoid { a: 1.0, b: 1.0, c: 1.0 }, resolution: res, seed: 1 })
            .unwrap()
    }

    #[test]
    fn cube_sides() {
        let cube = ConvexMesh::unit_cube();
        let l = classify_sides(&cube, &Vec3::z(), 1e-12).unwrap();
        assert!(l.is_dark(10) && l.is_dark(11));
        assert!(!l.is_dark(0) && !l.is_dark(1));
        assert!((2..10).all(|f| l.is_dark(f)));
        assert_eq!(l.ties, 8);
        assert!(matches!(extract_horizon(&cube, &l, 1e-3), Err(GeoError::NonGeneric { .. })));
    }

    #[test]
    fn cube_diagonal_horizon_is_hexagon() {
        let cube = ConvexMesh::unit_cube();
        let u = Vec3::new(1.0, 1.0, 1.0).normalize();
        let l = classify_sides(&cube, &u, 1e-12).unwrap();
        let h = extract_horizon(&cube, &l, 1e-3).unwrap();
        assert_eq!(h.cycles.len(), 1);
        assert_eq!(h.cycles[0].len(), 6);
        assert!(!h.cycles[0].contains(&0) && !h.cycles[0].contains(&7));
    }

    #[test]
    fn sphere_equator() {
        let m = sphere(5000);
        let u = Vec3::new(0.01, -0.02, 1.0).normalize();
        let l = classify_sides(&m, &u, 1e-12).unwrap();
        let h = extract_horizon(&m, &l, 1e-3).unwrap();
        assert_eq!(h.cycles.len(), 1);
        let len = h.length(&m);
        // edge path zig-zags around the equator, so it is a bit longer
        assert!(len > 2.0 * PI * 0.99 && len < 2.0 * PI * 1.3, "{len}");
        assert!((dark_curvature(&m, &u) - 2.0 * PI).abs() < 1e-9);
    }
}
