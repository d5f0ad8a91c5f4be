use crate::curve::Polyline;
use crate::development::develop_in_direction;
use crate::geodesic::SurfacePath;
use crate::horizon::SideLabeling;
use crate::{Result, ToleranceProfile};

use super::LemmaReport;

/// A maximal run of consecutive segments whose faces share a side label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideRun {
    pub first: usize,
    /// Last segment, inclusive.
    pub last: usize,
    pub dark: bool,
}

pub fn side_runs(path: &SurfacePath, labels: &SideLabeling) -> Vec<SideRun> {
    let faces = path.segment_faces();
    let mut runs: Vec<SideRun> = Vec::new();
    for (k, &f) in faces.iter().enumerate() {
        let dark = labels.is_dark(f);
        match runs.last_mut() {
            Some(r) if r.dark == dark => r.last = k,
            _ => runs.push(SideRun { first: k, last: k, dark }),
        }
    }
    runs
}

/// Develops every one-sided run of the path in direction `u` and checks
/// that the signed turning is `≤ 0` on dark runs and `≥ 0` on bright ones.
pub fn check_liberman(path: &SurfacePath, labels: &SideLabeling, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let u = labels.direction();
    let mut report = LemmaReport::new("liberman");
    let mut checked = 0;
    for (n, run) in side_runs(path, labels).iter().enumerate() {
        if run.last == run.first {
            continue;
        }
        let line = Polyline::new(path.points()[run.first..=run.last + 1].to_vec());
        let dev = develop_in_direction(&line, &u, tol.dev_rel)?;
        let turning = dev.signed_turning();
        let excess = if run.dark {
            turning.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            turning.iter().map(|t| -t).fold(f64::NEG_INFINITY, f64::max)
        };
        let side = if run.dark { "dark" } else { "bright" };
        report.check(format!("{side}-run-{n}"), excess, 0.0, tol.geo);
        report.count(format!("{side}-runs"), 1);
        checked += 1;
    }
    if checked == 0 {
        report.inconclusive("no one-sided run with an interior sample");
    }
    Ok(report)
}
