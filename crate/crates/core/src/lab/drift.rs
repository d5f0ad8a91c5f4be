use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::curve::{total_curvature, Axis};
use crate::development::directional_tc;
use crate::geodesic::SurfacePath;
use crate::horizon::{classify_sides, drift_angles, find_crossings, CrossingSequence, DriftSample, SideLabeling};
use crate::mesh::ConvexMesh;
use crate::spairs::{check_depth_bounds_with, DepthChecks, SignSequence};
use crate::{Result, ToleranceProfile, Vec3};

use super::LemmaReport;

/// Tolerance on `cos θ cos ψ = cos φ`.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance on the orthonormality of the frame.
pub const ORTHO_TOL: f64 = 1e-12;
/// Largest `∠(γ̇, i)` for which a path counts as drifting.
pub const DRIFT_ANGLE: f64 = 0.1;
/// Number of `j` candidates tried in the rotation step.
pub const J_CANDIDATES: usize = 16;

/// `count` unit vectors perpendicular to `i`, equally spaced in angle.
pub fn perpendicular_directions(i: &Vec3, count: usize) -> Vec<Vec3> {
    let axis = Axis { origin: Vec3::zeros(), direction: i.normalize() };
    let (e1, e2) = axis.basis();
    (0..count)
        .map(|k| {
            let a = TAU * k as f64 / count as f64;
            e1 * a.cos() + e2 * a.sin()
        })
        .collect()
}

/// Labels for `u`, nudging `u` deterministically when too many faces tie.
pub fn generic_labels(mesh: &ConvexMesh, u: &Vec3, tol: &ToleranceProfile) -> Result<SideLabeling> {
    let limit = (tol.max_tie_fraction * mesh.num_faces() as f64).floor() as usize;
    let mut dir = u.normalize();
    let mut labels = classify_sides(mesh, &dir, tol.generic)?;
    let mut k = 0;
    while labels.ties > limit && k < 8 {
        k += 1;
        let nudge = Vec3::new(0.7548776662, 0.5698402910, 0.3247179572) * (1e-3 * k as f64);
        dir = (u.normalize() + nudge).normalize();
        labels = classify_sides(mesh, &dir, tol.generic)?;
    }
    Ok(labels)
}

/// Among [`J_CANDIDATES`] directions perpendicular to `i`, the one
/// maximizing `tc_j` (first on ties).
pub fn rotate_j(path: &SurfacePath, i: &Vec3, tol: &ToleranceProfile) -> Result<(Vec3, f64)> {
    let mut best = (Vec3::zeros(), f64::NEG_INFINITY);
    for j in perpendicular_directions(i, J_CANDIDATES) {
        let tc = directional_tc(path.line(), &j, tol.dev_rel)?;
        if tc > best.1 {
            best = (j, tc);
        }
    }
    Ok(best)
}

/// Prefix defect sums along `i`: `K(x)` is the curvature of the vertices
/// with `<v, i>` below `x`.
pub struct PrefixCurvature {
    x: Vec<f64>,
    sums: Vec<f64>,
}

impl PrefixCurvature {
    pub fn new(mesh: &ConvexMesh, i: &Vec3) -> Self {
        let mut v: Vec<(f64, f64)> = mesh
            .vertices()
            .iter()
            .zip(mesh.defects())
            .map(|(p, &d)| (p.dot(i), d))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut sums = vec![0.0];
        let mut acc = 0.0;
        for &(_, d) in &v {
            acc += d;
            sums.push(acc);
        }
        PrefixCurvature { x: v.iter().map(|p| p.0).collect(), sums }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.sums[self.x.partition_point(|&v| v < x)]
    }
}

/// Crossings with `ω_j` on a drifting path, with the angle function data the
/// s-pair bounds need. Signs follow `s_n θ_n = (-1)^n α_n`, read off the
/// orientation of `μ` against `j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DriftCrossings {
    pub crossings: CrossingSequence,
    pub signs: SignSequence,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    /// Minimum of `ψ` over each arc between consecutive crossings.
    pub psi_between: Vec<f64>,
    /// Largest `|s_n θ_n - (-1)^n α_n|`.
    pub identity_gap: f64,
}

fn frame_of(frames: &[DriftSample], segment: usize) -> &DriftSample {
    let k = frames.partition_point(|f| f.segment < segment);
    &frames[k.min(frames.len() - 1)]
}

pub fn drift_crossings(
    path: &SurfacePath,
    mesh: &ConvexMesh,
    frames: &[DriftSample],
    i: &Vec3,
    j: &Vec3,
    tol: &ToleranceProfile,
) -> Result<DriftCrossings> {
    let labels = generic_labels(mesh, j, tol)?;
    let mut crossings = find_crossings(path, &labels, tol.merge_rel);
    crossings.crossings.retain(|c| c.transversal);
    let k_of = PrefixCurvature::new(mesh, i);
    let (mut signs, mut theta, mut k, mut phi, mut psi) = (vec![], vec![], vec![], vec![], vec![]);
    let mut gap: f64 = 0.0;
    for (n, c) in crossings.crossings.iter().enumerate() {
        let f = frame_of(frames, c.sample - 1);
        let alt = if n % 2 == 0 { 1.0 } else { -1.0 };
        let s: i8 = if alt * -f.mu().dot(j) >= 0.0 { 1 } else { -1 };
        gap = gap.max((s as f64 * f.theta - alt * c.alpha).abs());
        signs.push(s);
        theta.push(f.theta);
        phi.push(f.phi);
        psi.push(f.psi);
        k.push(k_of.at(path.points()[c.sample].dot(i)));
    }
    let psi_between = crossings
        .crossings
        .windows(2)
        .map(|w| {
            frames
                .iter()
                .filter(|f| f.segment >= w[0].sample && f.segment < w[1].sample)
                .map(|f| f.psi)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let signs = SignSequence::new(signs)?.with_data(theta, k)?;
    Ok(DriftCrossings { crossings, signs, phi, psi, psi_between, identity_gap: gap })
}

/// Frame identity, the bounds `|ψ|, |θ| ≤ φ`, monotonicity of `φ` on one-sided runs
/// and the plane-section bound `φ(s) ≤ ψ(t)` on the dark suffix.
pub fn check_frames(path: &SurfacePath, mesh: &ConvexMesh, i: &Vec3, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let i = i.normalize();
    let frames = drift_angles(path, mesh, &i, tol.frame)?;
    let mut report = LemmaReport::new("drift-frame");
    let mut worst_identity: f64 = 0.0;
    let mut worst_ortho: f64 = 0.0;
    let mut worst_claim: f64 = f64::NEG_INFINITY;
    for f in &frames {
        worst_identity = worst_identity.max(f.identity_residual().abs());
        let (l, m, n) = (f.lambda(), f.mu(), f.nu());
        for e in [l.dot(&m), m.dot(&n), n.dot(&l), l.norm() - 1.0, m.norm() - 1.0, n.norm() - 1.0, (l.dot(&i)).min(0.0)] {
            worst_ortho = worst_ortho.max(e.abs());
        }
        worst_claim = worst_claim.max(f.psi.abs() - f.phi).max(f.theta.abs() - f.phi);
    }
    report.check("identity", worst_identity, 0.0, IDENTITY_TOL);
    report.check("orthonormal", worst_ortho, 0.0, ORTHO_TOL);
    if !frames.is_empty() {
        report.check("phi-dominates", worst_claim, 0.0, tol.frame);
    }
    let max_phi = frames.iter().map(|f| f.phi).fold(0.0, f64::max);
    report.value("max-phi", max_phi);

    let labels = classify_sides(mesh, &i, tol.generic)?;
    let dark: Vec<bool> = frames.iter().map(|f| labels.is_dark(path.segment_faces()[f.segment])).collect();
    let mut monotone = 0;
    let mut worst_mono = f64::NEG_INFINITY;
    for (k, w) in frames.windows(2).enumerate() {
        if w[1].segment != w[0].segment + 1 || dark[k] != dark[k + 1] {
            continue;
        }
        let drop = if dark[k] { w[0].phi - w[1].phi } else { w[1].phi - w[0].phi };
        worst_mono = worst_mono.max(drop);
        monotone += 1;
    }
    report.count("monotone-steps", monotone);
    if monotone > 0 {
        report.check("phi-monotone", worst_mono, 0.0, tol.frame);
    }

    // dark suffix: s < t both in it, γ(s) on the (ν(t), λ(t)) plane through γ(t)
    let start = dark.iter().rposition(|d| !d).map(|k| k + 1).unwrap_or(0);
    let pts = path.points();
    let mut triggered = 0;
    let mut worst_section = f64::NEG_INFINITY;
    if max_phi < DRIFT_ANGLE {
        for m in start..frames.len() {
            let ft = &frames[m];
            let x = 0.5 * (pts[ft.segment] + pts[ft.segment + 1]);
            let mu = ft.mu();
            for fs in &frames[start..m] {
                let (ga, gb) = (mu.dot(&(pts[fs.segment] - x)), mu.dot(&(pts[fs.segment + 1] - x)));
                if ga == 0.0 || ga * gb < 0.0 {
                    worst_section = worst_section.max(fs.phi - ft.psi);
                    triggered += 1;
                }
            }
        }
    }
    report.count("section-triggers", triggered);
    if triggered > 0 {
        report.check("section-bound", worst_section, 0.0, tol.frame);
    }
    Ok(report)
}

/// Inputs of the growth claims, separated from the geometry so hand-built
/// data can be fed in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthData {
    pub signs: Vec<i8>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi_between: Vec<f64>,
    pub tc_j: f64,
}

pub fn growth_from_data(data: &GrowthData, tol: &ToleranceProfile) -> LemmaReport {
    let mut report = LemmaReport::new("growth");
    let n = data.signs.len();
    let mut a = 0;
    for k in 0..n.saturating_sub(1) {
        let eps = data.psi_between.get(k).copied().unwrap_or(f64::NEG_INFINITY);
        if data.signs[k] != data.signs[k + 1] || !(eps > 0.0) {
            continue;
        }
        let gap = (data.theta[k + 1] - data.theta[k]).abs();
        report.check(format!("theta-gap-{k}"), PI * eps.sin(), gap, tol.frame);
        a += 1;
    }
    let mut b = 0;
    for i in 0..n {
        let mut sum = 0i64;
        for j in i..n {
            sum += data.signs[j] as i64;
            if j > i && sum.abs() > 5 {
                report.check(format!("phi-growth-{i}-{j}"), 1.5 * data.phi[i], data.phi[j], tol.frame);
                b += 1;
            }
        }
    }
    report.check("tc-j", data.tc_j, 100.0 * PI, tol.tc);
    report.count("equal-sign-steps", a);
    report.count("excess-pairs", b);
    if a == 0 && b == 0 {
        report.inconclusive("no equal-sign crossings with positive ψ and no sign excess above 5");
    }
    report
}

/// Longest suffix of `path` whose faces are all dark for `i`, or `None`
/// when the last segment is already bright.
pub fn dark_suffix(path: &SurfacePath, mesh: &ConvexMesh, i: &Vec3, tol: &ToleranceProfile) -> Result<Option<SurfacePath>> {
    let labels = classify_sides(mesh, i, tol.generic)?;
    let faces = path.segment_faces();
    match faces.iter().rposition(|&f| !labels.is_dark(f)) {
        None => Ok(Some(path.clone())),
        Some(k) if k + 1 == faces.len() => Ok(None),
        Some(k) => {
            let t0 = path.arclength()[k + 1];
            if path.length() - t0 <= tol.len_rel * mesh.diameter() {
                return Ok(None);
            }
            path.slice(mesh, t0, path.length()).map(Some)
        }
    }
}

/// Growth claims on the dark-for-`i` suffix of a drifting path, with
/// crossings taken against `ω_j`.
pub fn check_growth(path: &SurfacePath, mesh: &ConvexMesh, i: &Vec3, j: &Vec3, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let i = i.normalize();
    let Some(arc) = dark_suffix(path, mesh, &i, tol)? else {
        let mut r = LemmaReport::new("growth");
        r.inconclusive("path ends on the bright side for i");
        return Ok(r);
    };
    let frames = drift_angles(&arc, mesh, &i, tol.frame)?;
    let dc = drift_crossings(&arc, mesh, &frames, &i, j, tol)?;
    let data = GrowthData {
        signs: dc.signs.signs.clone(),
        theta: dc.signs.theta.clone().unwrap_or_default(),
        phi: dc.phi.clone(),
        psi_between: dc.psi_between.clone(),
        tc_j: directional_tc(arc.line(), j, tol.dev_rel)?,
    };
    let mut report = growth_from_data(&data, tol);
    report.value("tc", total_curvature(arc.points()).value);
    report.value("suffix-start", path.length() - arc.length());
    Ok(report)
}

/// s-pair depth bounds on the `ω_j` crossings of a drifting path. The
/// pairwise step only applies while the path is drifting.
pub fn check_drift_depth(path: &SurfacePath, mesh: &ConvexMesh, i: &Vec3, j: &Vec3, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let i = i.normalize();
    let frames = drift_angles(path, mesh, &i, tol.frame)?;
    let dc = drift_crossings(path, mesh, &frames, &i, j, tol)?;
    let drifting = frames.iter().all(|f| f.phi < DRIFT_ANGLE);
    let checks = DepthChecks { pairwise: drifting, ..DepthChecks::default() };
    let mut report = check_depth_bounds_with(&dc.signs, tol.tc, checks)?;
    report.lemma = "drift-depth".into();
    report.value("sign-identity-gap", dc.identity_gap);
    if !drifting {
        report.note("pairwise step skipped: path is not drifting");
    }
    Ok(report)
}
