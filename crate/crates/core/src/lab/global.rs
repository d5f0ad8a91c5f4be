use std::f64::consts::PI;

use crate::curve::{path_diameter, total_curvature, Axis};
use crate::development::directional_tc;
use crate::geodesic::SurfacePath;
use crate::horizon::find_crossings;
use crate::mesh::ConvexMesh;
use crate::{Result, ToleranceProfile, Vec3};

use super::{generic_labels, LemmaReport};

/// Number of stretching samples along the path.
const STRETCH_SAMPLES: usize = 32;

/// The 26 directions of the `{-1, 0, 1}³` grid, normalized.
pub fn grid_directions() -> Vec<Vec3> {
    let mut out = Vec::with_capacity(26);
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                if (a, b, c) != (0, 0, 0) {
                    out.push(Vec3::new(a as f64, b as f64, c as f64).normalize());
                }
            }
        }
    }
    out
}

/// `tc ≤ Σ tc_e` over an orthonormal frame.
fn frame_bound(report: &mut LemmaReport, name: &str, path: &SurfacePath, frame: [Vec3; 3], tc: f64, tol: &ToleranceProfile) -> Result<()> {
    let mut sum = 0.0;
    for e in frame {
        sum += directional_tc(path.line(), &e, tol.dev_rel)?;
    }
    report.check(name, tc, sum, tol.tc);
    Ok(())
}

/// Alternating-sum bound `tc_u ≤ 3π + 2|Σ (-1)^n α_n|` for one direction.
pub fn check_alternating_bound(path: &SurfacePath, mesh: &ConvexMesh, u: &Vec3, tol: &ToleranceProfile) -> Result<(f64, f64)> {
    let labels = generic_labels(mesh, u, tol)?;
    let crossings = find_crossings(path, &labels, tol.merge_rel);
    let tc_u = directional_tc(path.line(), &labels.direction(), tol.dev_rel)?;
    Ok((tc_u, 3.0 * PI + 2.0 * crossings.alternating_alpha().abs()))
}

/// Lipschitz constant of the generating family, when the mesh is a graph
/// mesh and every face the path uses lies in the graph region.
fn usov_constant(path: &SurfacePath, mesh: &ConvexMesh) -> Option<f64> {
    let region = mesh.graph_region()?;
    let lipschitz = mesh.provenance().params.get("lipschitz")?.as_f64()?;
    path.segment_faces().iter().all(|&f| region[f as usize]).then_some(lipschitz)
}

/// Whether `q` is on the dark side from `z`: the ray from `q` away from `z`
/// does not enter the body. Returns the normalized margin.
fn dark_margin(mesh: &ConvexMesh, path: &SurfacePath, z: &Vec3) -> Option<f64> {
    let end = path.end();
    let q = mesh.position(&end);
    let d = q - z;
    let r = d.norm();
    if r <= 1e-12 * mesh.diameter() {
        return None;
    }
    mesh.faces_containing(&end)
        .iter()
        .map(|p| mesh.face_normal(p.face).dot(&d) / r)
        .max_by(f64::total_cmp)
}

/// The global statements for one certified minimizing geodesic.
pub fn check_global_bounds(path: &SurfacePath, mesh: &ConvexMesh, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let mut report = LemmaReport::new("global");
    let line = path.line();
    let pts = line.points();
    let tc = total_curvature(pts).value;
    let len = line.length();
    report.value("tc", tc);
    report.value("length", len);

    // kept literal: ln tc ≤ 1000 ln 1000
    report.check("main-theorem", tc.max(f64::MIN_POSITIVE).ln(), 1000.0 * 1000f64.ln(), 0.0);

    frame_bound(&mut report, "three-direction-standard", path, [Vec3::x(), Vec3::y(), Vec3::z()], tc, tol)?;
    let chord = pts[pts.len() - 1] - pts[0];
    if let Ok(axis) = Axis::new(pts[0], chord) {
        let (e1, e2) = axis.basis();
        frame_bound(&mut report, "three-direction-chord", path, [axis.direction, e1, e2], tc, tol)?;
    }

    let mut worst_alt = f64::NEG_INFINITY;
    for (k, u) in grid_directions().iter().enumerate() {
        let (tc_u, bound) = check_alternating_bound(path, mesh, u, tol)?;
        report.check(format!("alternating-{k}"), tc_u, bound, tol.tc);
        worst_alt = worst_alt.max(tc_u - bound);
    }
    report.value("alternating-worst", worst_alt);

    let diam = path_diameter(pts);
    report.value("diameter", diam);
    report.check("diameter", len / 10.0, diam, tol.len_rel * mesh.diameter());

    match usov_constant(path, mesh) {
        Some(l) => {
            report.check("usov", tc, 2.0 * l, tol.usov);
        }
        None => report.count("usov-skipped", 1),
    }

    let s = line.arclength();
    let n = pts.len();
    let step = ((n - 1) / STRETCH_SAMPLES).max(1);
    let mut worst = f64::NEG_INFINITY;
    let mut k = 0;
    while k + 1 < n {
        let d = line.direction(k);
        if d.norm() > 0.0 {
            let z = pts[k] - d * s[k];
            if let Some(m) = dark_margin(mesh, path, &z) {
                worst = worst.max(-m);
            }
        }
        k += step;
    }
    if worst.is_finite() {
        report.check("stretching", worst, 0.0, tol.frame);
    }
    Ok(report)
}
