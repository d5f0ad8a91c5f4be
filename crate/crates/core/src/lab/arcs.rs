use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{angle_between, eps_straight_subdivide, total_curvature, unwrapped_azimuth, Arc, Axis, Polyline};
use crate::geodesic::SurfacePath;
use crate::horizon::classify_sides;
use crate::mesh::ConvexMesh;
use crate::{GeoError, Result, ToleranceProfile, Vec3};

use super::LemmaReport;

/// Non-degenerate segments of a polyline: `(index, unit direction)`.
fn directions(line: &Polyline) -> Vec<(usize, Vec3)> {
    let floor = 1e-14 * line.length().max(f64::MIN_POSITIVE);
    line.points()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]).norm() > floor)
        .map(|(k, w)| (k, (w[1] - w[0]).normalize()))
        .collect()
}

fn window_tc(dirs: &[(usize, Vec3)]) -> f64 {
    dirs.windows(2).map(|w| angle_between(&w[0].1, &w[1].1)).sum()
}

/// Arc-length span of a run of segments.
fn span(line: &Polyline, dirs: &[(usize, Vec3)]) -> Arc {
    let s = line.arclength();
    Arc { t0: s[dirs[0].0], t1: s[dirs[dirs.len() - 1].0 + 1] }
}

/// ε-straight subdivision, then the arc of largest total curvature.
fn straightest_heavy_arc(line: &Polyline, delta: f64) -> Result<Arc> {
    let arcs = eps_straight_subdivide(line, delta)?;
    let mut best = arcs[0];
    let mut best_tc = f64::NEG_INFINITY;
    for a in arcs {
        let tc = total_curvature(line.slice(a.t0, a.t1).points()).value;
        if tc > best_tc {
            best = a;
            best_tc = tc;
        }
    }
    Ok(best)
}

/// Splits the arc into maximal runs whose angle to the chord varies by at
/// most `band`, and returns the run of largest total curvature with its mean
/// angle.
fn angle_band_refine(line: &Polyline, band: f64) -> Option<(Arc, f64, Vec3)> {
    let pts = line.points();
    let chord = pts[pts.len() - 1] - pts[0];
    if chord.norm() == 0.0 {
        return None;
    }
    let v = chord.normalize();
    let dirs = directions(line);
    if dirs.is_empty() {
        return None;
    }
    let mut best: Option<(f64, usize, usize, f64)> = None;
    let mut a = 0;
    while a < dirs.len() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut b = a;
        while b < dirs.len() {
            let ang = angle_between(&dirs[b].1, &v);
            if lo.min(ang) < hi.max(ang) - band {
                break;
            }
            lo = lo.min(ang);
            hi = hi.max(ang);
            b += 1;
        }
        let tc = window_tc(&dirs[a..b]);
        if best.is_none_or(|x| tc > x.0) {
            best = Some((tc, a, b, 0.5 * (lo + hi)));
        }
        a = b;
    }
    let (_, a, b, alpha) = best?;
    Some((span(line, &dirs[a..b]), alpha, v))
}

/// Approximate smallest spherical cap holding the directions
/// (Bădoiu–Clarkson iteration); returns the centre and the exact radius about it.
pub fn enclosing_cap(dirs: &[Vec3]) -> (Vec3, f64) {
    let mut c = dirs[0];
    for k in 1..200 {
        let far = dirs.iter().max_by(|a, b| angle_between(a, &c).total_cmp(&angle_between(b, &c))).unwrap();
        let next = c + (far - c) / (k as f64 + 1.0);
        if next.norm() == 0.0 {
            break;
        }
        c = next.normalize();
    }
    let r = dirs.iter().map(|d| angle_between(d, &c)).fold(0.0, f64::max);
    (c, r)
}

/// Greedy maximal windows whose directions fit in a cap of radius `< eps`;
/// the window of largest total curvature wins.
fn cone_fit(line: &Polyline, eps: f64) -> Option<(Arc, Vec3)> {
    let dirs = directions(line);
    if dirs.is_empty() {
        return None;
    }
    let mut best: Option<(f64, usize, usize, Vec3)> = None;
    let mut a = 0;
    while a < dirs.len() {
        let mut b = a + 1;
        let mut centre = dirs[a].1;
        while b < dirs.len() {
            let window: Vec<Vec3> = dirs[a..=b].iter().map(|d| d.1).collect();
            let (c, r) = enclosing_cap(&window);
            if r >= eps {
                break;
            }
            centre = c;
            b += 1;
        }
        let tc = window_tc(&dirs[a..b]);
        if best.is_none_or(|x| tc > x.0) {
            best = Some((tc, a, b, centre));
        }
        a = b;
    }
    let (_, a, b, c) = best?;
    Some((span(line, &dirs[a..b]), c))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantArc {
    /// Sub-arc in the arc-length parameter of the input.
    pub arc: Arc,
    pub u: [f64; 3],
    /// `tc(sub-arc) / tc(path)`.
    pub ratio: f64,
    pub rounds: usize,
    pub report: LemmaReport,
}

impl ConstantArc {
    pub fn direction(&self) -> Vec3 {
        Vec3::from(self.u)
    }
}

/// Localizes a sub-arc whose directions stay within `eps` of a fixed
/// direction: straightest-heavy arc, angle-band refinement, a second round
/// when the band sits away from the chord, and a cone fit to finish.
pub fn almost_constant_arc(line: &Polyline, eps: f64, delta: f64, tol: &ToleranceProfile) -> Result<ConstantArc> {
    if !(eps > 0.0 && eps < PI / 2.0) {
        return Err(GeoError::Precondition(format!("ε must lie in (0, π/2), got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GeoError::Precondition(format!("δ must lie in (0, 1), got {delta}")));
    }
    let mut report = LemmaReport::new("almost-constant-arc");
    let total = total_curvature(line.points()).value;
    let whole = Arc { t0: 0.0, t1: line.length() };
    let pts = line.points();
    let chord = pts[pts.len() - 1] - pts[0];
    if total < tol.tc {
        report.inconclusive("path is straight; nothing to localize");
        let u = if chord.norm() > 0.0 { chord.normalize() } else { Vec3::x() };
        return Ok(ConstantArc { arc: whole, u: u.into(), ratio: 0.0, rounds: 0, report });
    }

    // current arc as an offset into the input
    let mut cur = whole;
    let mut rounds = 0;
    let mut settled: Option<Vec3> = None;
    for _ in 0..2 {
        rounds += 1;
        let sub = line.slice(cur.t0, cur.t1);
        let heavy = straightest_heavy_arc(&sub, delta)?;
        let heavy_line = sub.slice(heavy.t0, heavy.t1);
        let Some((band, alpha, v)) = angle_band_refine(&heavy_line, eps / 2.0) else { break };
        let t0 = cur.t0 + heavy.t0;
        cur = Arc { t0: t0 + band.t0, t1: t0 + band.t1 };
        if alpha <= eps / 2.0 {
            settled = Some(v);
            break;
        }
        if alpha >= PI - eps / 2.0 {
            settled = Some(-v);
            break;
        }
    }
    let sub = line.slice(cur.t0, cur.t1);
    let spread = |u: &Vec3| directions(&sub).iter().map(|d| angle_between(&d.1, u)).fold(0.0, f64::max);
    let (arc, u) = match settled {
        Some(u) if spread(&u) < eps => (cur, u),
        _ => {
            let (fit, c) = cone_fit(&sub, eps).ok_or_else(|| GeoError::Degenerate("arc has no segments".into()))?;
            (Arc { t0: cur.t0 + fit.t0, t1: cur.t0 + fit.t1 }, c)
        }
    };
    let piece = line.slice(arc.t0, arc.t1);
    let max_angle = directions(&piece).iter().map(|d| angle_between(&d.1, &u)).fold(0.0, f64::max);
    report.check("direction-spread", max_angle, eps, 0.0);
    let ratio = total_curvature(piece.points()).value / total;
    report.value("ratio", ratio);
    report.value("rounds", rounds as f64);
    Ok(ConstantArc { arc, u: u.into(), ratio, rounds, report })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeArcs {
    pub left: Option<Arc>,
    pub middle: Option<Arc>,
    pub right: Option<Arc>,
    pub report: LemmaReport,
}

/// First sample index `b` such that some `a ≤ b` past the midpoint plane has
/// turned at least `turns` full times relative to `b`.
fn witness(x: &[f64], az: &[f64], x_mid: f64, turns: f64) -> Option<usize> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for b in 0..x.len() {
        if x[b] > x_mid {
            lo = lo.min(az[b]);
            hi = hi.max(az[b]);
        }
        if lo.is_finite() && (az[b] - lo).max(hi - az[b]) >= turns * std::f64::consts::TAU {
            return Some(b);
        }
    }
    None
}

/// Left (bright for `i`), middle and right (dark for `i`) arcs of a drifting
/// path about its chord line.
pub fn split_three_arcs(path: &SurfacePath, mesh: &ConvexMesh, tol: &ToleranceProfile) -> Result<ThreeArcs> {
    let mut report = LemmaReport::new("three-arcs");
    let pts = path.points();
    let s = path.arclength();
    let n = pts.len();
    let (p, q) = (pts[0], pts[n - 1]);
    let axis = Axis::new(p, q - p)?;
    let i = axis.direction;
    let whole = Arc { t0: 0.0, t1: path.length() };
    if n < 3 {
        report.count("samples", n);
        return Ok(ThreeArcs { left: None, middle: Some(whole), right: None, report });
    }
    // the ends sit on the axis; azimuth is taken on interior samples only
    let inner = &pts[1..n - 1];
    let min_d = tol.axis_rel * mesh.diameter();
    let az = match unwrapped_azimuth(inner, &axis, min_d) {
        Ok(a) => a,
        Err(e) => {
            report.inconclusive(format!("winding undefined: {e}"));
            return Ok(ThreeArcs { left: None, middle: None, right: None, report });
        }
    };
    let x: Vec<f64> = inner.iter().map(|v| (v - p).dot(&i)).collect();
    let x_mid = 0.5 * (q - p).dot(&i);
    let labels = classify_sides(mesh, &i, tol.generic)?;
    let faces = path.segment_faces();

    // inner sample m is path sample m + 1
    let right_start = witness(&x, &az, x_mid, 2.0).map(|m| m + 1);
    let rx: Vec<f64> = x.iter().rev().map(|v| -v).collect();
    let raz: Vec<f64> = az.iter().rev().copied().collect();
    let left_end = witness(&rx, &raz, -x_mid, 2.0).map(|m| n - 2 - m);

    let right = right_start.map(|b| Arc { t0: s[b], t1: s[n - 1] });
    let left = left_end.map(|b| Arc { t0: 0.0, t1: s[b] });
    if let Some(b) = right_start {
        let bad = faces[b..].iter().filter(|&&f| !labels.is_dark(f)).count();
        report.check("right-dark", bad as f64, 0.0, 0.0);
    }
    if let Some(b) = left_end {
        let bad = faces[..b].iter().filter(|&&f| labels.is_dark(f)).count();
        report.check("left-bright", bad as f64, 0.0, 0.0);
    }
    let (m0, m1) = (left_end.unwrap_or(0), right_start.unwrap_or(n - 1));
    let middle = if m1 > m0 { Some(Arc { t0: s[m0], t1: s[m1] }) } else { None };
    if m1 > m0 {
        // any sub-arc turns at most (max - min) of the azimuth over the arc
        let lo_i = m0.max(1) - 1;
        let hi_i = (m1 - 1).min(n - 3);
        if lo_i <= hi_i {
            let seg = &az[lo_i..=hi_i];
            let range = seg.iter().copied().fold(f64::NEG_INFINITY, f64::max) - seg.iter().copied().fold(f64::INFINITY, f64::min);
            report.check("middle-winding", range / std::f64::consts::TAU, 4.0, tol.wind);
        }
    }
    let total_turns = (az[az.len() - 1] - az[0]) / std::f64::consts::TAU;
    report.value("turns", total_turns);
    report.count("right", right.is_some() as usize);
    report.count("left", left.is_some() as usize);
    Ok(ThreeArcs { left, middle, right, report })
}
