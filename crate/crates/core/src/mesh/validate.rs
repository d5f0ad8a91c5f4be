use serde::{Deserialize, Serialize};

use super::{convex_hull, ConvexMesh};

/// One violated invariant with its worst-case residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EulerCharacteristic { value: i64 },
    Orientation { signed_volume: f64 },
    /// Vertex lies strictly inside the hull of the vertex set.
    InteriorVertex { vertex: u32, depth: f64 },
    /// Edge whose dihedral angle exceeds `π + τ`.
    ReflexEdge { edge: [u32; 2], excess: f64 },
    NegativeDefect { vertex: u32, defect: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub tau_hull: f64,
    pub tau_defect: f64,
    pub max_hull_residual: f64,
    pub max_dihedral_residual: f64,
    pub min_defect: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// Vertices blamed for the failure: interior or negatively curved
    /// vertices, plus the vertices shared by the most reflex edges.
    pub fn offending_vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .violations
            .iter()
            .filter_map(|x| match x {
                Violation::InteriorVertex { vertex, .. } | Violation::NegativeDefect { vertex, .. } => Some(*vertex),
                _ => None,
            })
            .collect();
        let mut counts: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
        for x in &self.violations {
            if let Violation::ReflexEdge { edge, .. } = x {
                for &e in edge {
                    *counts.entry(e).or_default() += 1;
                }
            }
        }
        if let Some(&max) = counts.values().max() {
            v.extend(counts.iter().filter(|(_, &c)| c == max).map(|(&k, _)| k));
        }
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Checks every convex-mesh invariant. Connectivity was already enforced by
/// [`ConvexMesh::new`]; `tau_hull` is relative to the bounding-box diameter.
pub fn validate_convex(mesh: &ConvexMesh, tau_hull: f64, tau_defect: f64) -> ValidationReport {
    let tau = tau_hull * mesh.diameter();
    let mut violations = Vec::new();

    let chi = mesh.euler_characteristic();
    if chi != 2 {
        violations.push(Violation::EulerCharacteristic { value: chi });
    }
    let vol = mesh.signed_volume();
    if !(vol > 0.0) {
        violations.push(Violation::Orientation { signed_volume: vol });
    }

    // hull membership: every vertex is a hull vertex or within tau of a hull facet
    let mut max_hull_residual = 0.0f64;
    match convex_hull(mesh.vertices()) {
        Ok(hull) => {
            let planes: Vec<(crate::Vec3, f64)> = hull
                .triangles
                .iter()
                .map(|t| {
                    let [a, b, c] = t.map(|i| mesh.vertex(i));
                    let n = (b - a).cross(&(c - a)).normalize();
                    (n, n.dot(&a))
                })
                .collect();
            for (v, &on) in hull.used.iter().enumerate() {
                if on {
                    continue;
                }
                let p = mesh.vertex(v as u32);
                let depth = planes
                    .iter()
                    .map(|(n, d)| d - n.dot(&p))
                    .fold(f64::INFINITY, f64::min)
                    .max(0.0);
                max_hull_residual = max_hull_residual.max(depth);
                if depth > tau {
                    violations.push(Violation::InteriorVertex { vertex: v as u32, depth });
                }
            }
        }
        Err(_) => {
            max_hull_residual = f64::INFINITY;
            violations.push(Violation::Orientation { signed_volume: vol });
        }
    }

    // local convexity: the opposite vertex of each edge lies below the other face
    let mut max_dihedral_residual = 0.0f64;
    for e in mesh.edges() {
        let [f, g] = e.faces;
        let apex = |face: u32| {
            let t = mesh.triangle(face);
            *t.iter().find(|&&x| x != e.v[0] && x != e.v[1]).unwrap()
        };
        let a = mesh.vertex(e.v[0]);
        let d = mesh.vertex(apex(g));
        let height = mesh.face_normal(f).dot(&(d - a));
        let edge_len = (mesh.vertex(e.v[1]) - a).norm();
        // dihedral excess over π, as an angle
        let excess = if height > 0.0 {
            let reach = (d - a).cross(&(mesh.vertex(e.v[1]) - a)).norm() / edge_len;
            (height / reach.max(f64::MIN_POSITIVE)).clamp(-1.0, 1.0).asin()
        } else {
            0.0
        };
        max_dihedral_residual = max_dihedral_residual.max(excess);
        if excess > tau_hull && height > tau {
            violations.push(Violation::ReflexEdge { edge: e.v, excess });
        }
    }

    let mut min_defect = f64::INFINITY;
    for (v, &k) in mesh.defects().iter().enumerate() {
        min_defect = min_defect.min(k);
        if k < -tau_defect {
            violations.push(Violation::NegativeDefect { vertex: v as u32, defect: k });
        }
    }

    ValidationReport {
        passed: violations.is_empty(),
        tau_hull: tau,
        tau_defect,
        max_hull_residual,
        max_dihedral_residual,
        min_defect,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{ConvexMesh, Provenance};
    use crate::Vec3;

    #[test]
    fn tetrahedron_and_cube_pass() {
        let r = validate_convex(&ConvexMesh::tetrahedron(), 1e-9, 1e-9);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.max_dihedral_residual, 0.0);
        assert!(validate_convex(&ConvexMesh::unit_cube(), 1e-9, 1e-9).passed);
    }

    #[test]
    fn dented_cube_names_vertex() {
        let cube = ConvexMesh::unit_cube();
        let mut v = cube.vertices().to_vec();
        // push corner 7 = (1,1,1) inward along the diagonal by 0.1
        v[7] -= Vec3::new(1.0, 1.0, 1.0).normalize() * 0.1;
        let dented = ConvexMesh::new(v, cube.triangles().to_vec(), Provenance::imported("dent")).unwrap();
        let r = validate_convex(&dented, 1e-9, 1e-9);
        assert!(!r.passed);
        // still a hull vertex of the eight points, but the diagonals 1-7 and 4-7 fold inward
        assert_eq!(r.offending_vertices(), vec![7]);
        assert!(r.violations.iter().all(|x| matches!(x, Violation::ReflexEdge { .. })));
    }

    #[test]
    fn deeply_dented_cube_is_interior() {
        let cube = ConvexMesh::unit_cube();
        let mut v = cube.vertices().to_vec();
        v[7] -= Vec3::new(1.0, 1.0, 1.0).normalize() * 0.6;
        let dented = ConvexMesh::new(v, cube.triangles().to_vec(), Provenance::imported("dent")).unwrap();
        let r = validate_convex(&dented, 1e-9, 1e-9);
        // the other seven corners span the half-space x + y + z <= 2
        let expected = (2.0 - (3.0 - 0.6 * 3f64.sqrt())) / 3f64.sqrt();
        let depth = r
            .violations
            .iter()
            .find_map(|x| match x {
                Violation::InteriorVertex { vertex: 7, depth } => Some(*depth),
                _ => None,
            })
            .unwrap();
        assert!((depth - expected).abs() < 1e-12, "{depth} vs {expected}");
        assert_eq!(r.offending_vertices(), vec![7]);
    }
}
