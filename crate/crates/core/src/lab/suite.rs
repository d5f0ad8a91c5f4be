use serde::{Deserialize, Serialize};

use crate::curve::{eps_straight_bound, eps_straight_subdivide, Axis};
use crate::geodesic::SurfacePath;
use crate::horizon::{find_crossings, SideLabeling};
use crate::mesh::ConvexMesh;
use crate::spairs::{check_depth_bounds_with, theta_from_alpha, DepthChecks, SignSequence};
use crate::{GeoError, Result, ToleranceProfile, Vec3};

use super::{
    almost_constant_arc, check_drift_depth, check_frames, check_global_bounds, check_growth, check_liberman,
    detect_and_check_tongues, generic_labels, rotate_j, split_three_arcs, Instance, LemmaReport, PrefixCurvature,
};

/// ε values for the subdivision-count check.
pub const EPS_STRAIGHT: [f64; 3] = [0.5, 0.2, 0.1];
/// Cone angle used when localizing an almost-constant arc.
pub const CONSTANT_ARC_EPS: f64 = 0.2;
pub const CONSTANT_ARC_DELTA: f64 = 0.1;

/// Which families of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckSet {
    pub global: bool,
    pub eps_straight: bool,
    pub liberman: bool,
    pub tongues: bool,
    pub spairs: bool,
    pub drift: bool,
    pub arcs: bool,
}

impl Default for CheckSet {
    fn default() -> Self {
        Self::all()
    }
}

impl CheckSet {
    pub const NAMES: [&'static str; 7] = ["global", "eps-straight", "liberman", "tongues", "spairs", "drift", "arcs"];

    pub fn all() -> Self {
        CheckSet { global: true, eps_straight: true, liberman: true, tongues: true, spairs: true, drift: true, arcs: true }
    }

    pub fn none() -> Self {
        CheckSet { global: false, eps_straight: false, liberman: false, tongues: false, spairs: false, drift: false, arcs: false }
    }

    /// Parses `all` or a comma-separated list of [`CheckSet::NAMES`].
    pub fn parse(list: &str) -> Result<Self> {
        if list.trim() == "all" {
            return Ok(Self::all());
        }
        let mut set = Self::none();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let flag = match name {
                "global" => &mut set.global,
                "eps-straight" => &mut set.eps_straight,
                "liberman" => &mut set.liberman,
                "tongues" => &mut set.tongues,
                "spairs" => &mut set.spairs,
                "drift" => &mut set.drift,
                "arcs" => &mut set.arcs,
                other => {
                    return Err(GeoError::Precondition(format!(
                        "unknown check `{other}`; expected `all` or some of {}",
                        Self::NAMES.join(", ")
                    )))
                }
            };
            *flag = true;
        }
        Ok(set)
    }

    fn per_direction(&self) -> bool {
        self.liberman || self.tongues || self.spairs
    }
}

/// Turns a failed computation into an inconclusive report.
fn guard(lemma: &str, r: Result<LemmaReport>) -> LemmaReport {
    r.unwrap_or_else(|e| {
        let mut report = LemmaReport::new(lemma);
        report.inconclusive(format!("not evaluated: {e}"));
        report
    })
}

/// Greedy ε-straight subdivision counts against `⌈2/ε⌉ + 1`.
pub fn check_eps_straight(path: &SurfacePath) -> Result<LemmaReport> {
    let mut report = LemmaReport::new("eps-straight");
    for eps in EPS_STRAIGHT {
        let n = eps_straight_subdivide(path.line(), eps)?.len();
        report.check(format!("count-{eps}"), n as f64, eps_straight_bound(eps) as f64, 0.0);
    }
    Ok(report)
}

/// Depth bounds on the crossing sequence with `ω_u`, with
/// `θ_n = s_n (-1)^n α_n`. The pairwise step needs a drifting path and is
/// left out.
pub fn check_crossing_depth(path: &SurfacePath, mesh: &ConvexMesh, labels: &SideLabeling, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let mut seq = find_crossings(path, labels, tol.merge_rel);
    seq.crossings.retain(|c| c.transversal);
    let signs = seq.signs();
    let alpha: Vec<f64> = seq.crossings.iter().map(|c| c.alpha).collect();
    let theta = theta_from_alpha(&signs, &alpha);
    let pts = path.points();
    let k = match Axis::new(pts[0], pts[pts.len() - 1] - pts[0]) {
        Ok(axis) => {
            let prefix = PrefixCurvature::new(mesh, &axis.direction);
            seq.crossings.iter().map(|c| prefix.at(pts[c.sample].dot(&axis.direction))).collect()
        }
        Err(_) => vec![0.0; signs.len()],
    };
    let data = SignSequence::new(signs)?.with_data(theta, k)?;
    let checks = DepthChecks { pairwise: false, ..DepthChecks::default() };
    let mut report = check_depth_bounds_with(&data, tol.tc, checks)?;
    report.lemma = "crossing-depth".into();
    Ok(report)
}

/// Runs the selected checks on one certified geodesic. Per-direction checks
/// run once per entry of `directions`.
pub fn run_checks(
    path: &SurfacePath,
    mesh: &ConvexMesh,
    directions: &[Vec3],
    tol: &ToleranceProfile,
    checks: &CheckSet,
) -> Vec<LemmaReport> {
    let pts = path.points();
    let base = Instance {
        mesh: Some(mesh.content_hash()),
        generator: Some(mesh.provenance().generator.clone()),
        from: Some(pts[0].into()),
        to: Some(pts[pts.len() - 1].into()),
        direction: None,
    };
    let mut out = Vec::new();
    if checks.global {
        out.push(guard("global", check_global_bounds(path, mesh, tol)));
    }
    if checks.eps_straight {
        out.push(guard("eps-straight", check_eps_straight(path)));
    }
    let mut directional = Vec::new();
    if checks.per_direction() {
        for u in directions {
            let labels = match generic_labels(mesh, u, tol) {
                Ok(l) => l,
                Err(e) => {
                    directional.push(guard("labels", Err(e)));
                    continue;
                }
            };
            let dir = Some(labels.direction().into());
            let mut push = |r: LemmaReport| {
                let mut r = r;
                r.instance.direction = dir;
                directional.push(r);
            };
            if checks.liberman {
                push(guard("liberman", check_liberman(path, &labels, tol)));
            }
            if checks.tongues {
                push(guard("tongue", detect_and_check_tongues(path, mesh, &labels, tol)));
            }
            if checks.spairs {
                push(guard("crossing-depth", check_crossing_depth(path, mesh, &labels, tol)));
            }
        }
    }
    if checks.drift || checks.arcs {
        if let Ok(axis) = Axis::new(pts[0], pts[pts.len() - 1] - pts[0]) {
            let i = axis.direction;
            if checks.drift {
                out.push(guard("drift-frame", check_frames(path, mesh, &i, tol)));
                match rotate_j(path, &i, tol) {
                    Ok((j, _)) => {
                        out.push(guard("growth", check_growth(path, mesh, &i, &j, tol)));
                        out.push(guard("drift-depth", check_drift_depth(path, mesh, &i, &j, tol)));
                    }
                    Err(e) => out.push(guard("growth", Err(e))),
                }
            }
            if checks.arcs {
                out.push(guard("three-arcs", split_three_arcs(path, mesh, tol).map(|s| s.report)));
            }
        }
        if checks.arcs {
            out.push(guard(
                "almost-constant-arc",
                almost_constant_arc(path.line(), CONSTANT_ARC_EPS, CONSTANT_ARC_DELTA, tol).map(|c| c.report),
            ));
        }
    }
    for r in &mut out {
        r.instance = base.clone();
    }
    for r in &mut directional {
        let dir = r.instance.direction;
        r.instance = Instance { direction: dir, ..base.clone() };
    }
    out.extend(directional);
    out
}
