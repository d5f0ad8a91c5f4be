use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::curve::{angle_between, total_curvature, Polyline};
use crate::development::directional_tc;
use crate::geodesic::SurfacePath;
use crate::horizon::{find_crossings, SideLabeling};
use crate::mesh::{clipped_defect, ConvexMesh};
use crate::{Result, ToleranceProfile};

use super::LemmaReport;

/// The four admissible values of the enclosed curvature, in the order
/// `α-β, -α+β, π-α-β, π+α+β`.
pub fn tongue_values(alpha: f64, beta: f64) -> [f64; 4] {
    [alpha - beta, beta - alpha, PI - alpha - beta, PI + alpha + beta]
}

/// Distance between two angles on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    ((a - b + PI).rem_euclid(TAU) - PI).abs()
}

/// Closest admissible value: `(branch index, distance)`.
pub fn nearest_branch(d: f64, alpha: f64, beta: f64) -> (usize, f64) {
    tongue_values(alpha, beta)
        .iter()
        .enumerate()
        .map(|(k, &v)| (k, circle_distance(d, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// An arc between consecutive horizon crossings together with the curvature
/// of the two regions it cuts from its side of the surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tongue {
    /// Index of the opening crossing.
    pub crossing: usize,
    pub t0: f64,
    pub t1: f64,
    pub dark: bool,
    /// Meeting angles measured on the first and last segment of the arc.
    pub alpha: f64,
    pub beta: f64,
    /// Enclosed curvature left and right of the arc.
    pub left: f64,
    pub right: f64,
    /// Total curvature of the arc and of its development in direction `u`.
    pub tc: f64,
    pub tc_u: f64,
}

impl Tongue {
    /// The disc with the smaller enclosed curvature.
    pub fn disc(&self) -> f64 {
        self.left.min(self.right)
    }
}

pub struct TongueScan {
    pub tongues: Vec<Tongue>,
    /// Arcs whose two sides could not be separated.
    pub unseparated: usize,
    pub non_transversal: usize,
}

/// Flood fill over the vertices of one side, blocked by the edges crossed
/// along the arc; seeds are the endpoints of those edges on either hand.
pub fn find_tongues(path: &SurfacePath, mesh: &ConvexMesh, labels: &SideLabeling, tol: &ToleranceProfile) -> Result<TongueScan> {
    let u = labels.direction();
    let seq = find_crossings(path, labels, tol.merge_rel);
    let faces = path.segment_faces();
    let crossed = path.crossed_edges();
    let pts = path.points();
    let s = path.arclength();
    let mut tongues = Vec::new();
    let mut unseparated = 0;
    let mut non_transversal = 0;
    for (n, w) in seq.crossings.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if !(a.transversal && b.transversal) {
            non_transversal += 1;
            continue;
        }
        let (k0, k1) = (a.sample, b.sample);
        let dark = labels.is_dark(faces[k0]);
        let side_u = if dark { u } else { -u };
        let on_side = |f: u32| labels.is_dark(f) == dark;

        let mut blocked = vec![false; mesh.edges().len()];
        let mut left_seeds = Vec::new();
        let mut right_seeds = Vec::new();
        for k in k0..=k1 {
            let Some(e) = crossed[k] else { continue };
            blocked[e as usize] = true;
            let seg = if k < k1 { k } else { k - 1 };
            let d = pts[seg + 1] - pts[seg];
            let side = mesh.face_normal(faces[seg]).cross(&d);
            for &v in &mesh.edge(e).v {
                if side.dot(&(mesh.vertex(v) - pts[k])) > 0.0 {
                    left_seeds.push(v);
                } else {
                    right_seeds.push(v);
                }
            }
        }
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); mesh.num_vertices()];
        for (e, edge) in mesh.edges().iter().enumerate() {
            if blocked[e] || !(on_side(edge.faces[0]) || on_side(edge.faces[1])) {
                continue;
            }
            adjacency[edge.v[0] as usize].push(edge.v[1]);
            adjacency[edge.v[1] as usize].push(edge.v[0]);
        }
        let flood = |seeds: &[u32]| -> Vec<bool> {
            let mut seen = vec![false; mesh.num_vertices()];
            let mut queue: VecDeque<u32> = seeds.iter().copied().collect();
            for &v in seeds {
                seen[v as usize] = true;
            }
            while let Some(v) = queue.pop_front() {
                for &w in &adjacency[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        let (l, r) = (flood(&left_seeds), flood(&right_seeds));
        if l.iter().zip(&r).any(|(a, b)| *a && *b) {
            unseparated += 1;
            continue;
        }
        let curvature = |set: &[bool]| -> f64 {
            set.iter()
                .enumerate()
                .filter(|(_, &x)| x)
                .map(|(v, _)| clipped_defect(mesh, v as u32, &side_u))
                .sum()
        };
        let arc = Polyline::new(pts[k0..=k1].to_vec());
        let angle = |seg: usize| angle_between(&(pts[seg + 1] - pts[seg]), &u) - PI / 2.0;
        tongues.push(Tongue {
            crossing: n,
            t0: s[k0],
            t1: s[k1],
            dark,
            alpha: angle(k0),
            beta: angle(k1 - 1),
            left: curvature(&l),
            right: curvature(&r),
            tc: total_curvature(arc.points()).value,
            tc_u: directional_tc(&arc, &u, tol.dev_rel)?,
        });
    }
    Ok(TongueScan { tongues, unseparated, non_transversal })
}

/// Checks the four-value identity on both discs of every tongue, then the
/// lower bound `|α-β| ≤ D` and `tc_u(arc) ≤ D` on the smaller disc.
pub fn detect_and_check_tongues(path: &SurfacePath, mesh: &ConvexMesh, labels: &SideLabeling, tol: &ToleranceProfile) -> Result<LemmaReport> {
    let scan = find_tongues(path, mesh, labels, tol)?;
    Ok(report_tongues(&scan, tol.tongue_for(mesh.num_faces())))
}

pub fn report_tongues(scan: &TongueScan, tau: f64) -> LemmaReport {
    let mut report = LemmaReport::new("tongue");
    for (m, t) in scan.tongues.iter().enumerate() {
        for (name, d) in [("left", t.left), ("right", t.right)] {
            let (_, dist) = nearest_branch(d, t.alpha, t.beta);
            report.check(format!("identity-{m}-{name}"), dist, 0.0, tau);
        }
        let d = t.disc();
        report.check(format!("angle-gap-{m}"), (t.alpha - t.beta).abs(), d, tau);
        report.check(format!("directional-tc-{m}"), t.tc_u, d, tau);
        report.value(format!("tc-{m}"), t.tc);
        report.value(format!("disc-{m}"), d);
    }
    report.count("tongues", scan.tongues.len());
    report.count("unseparated", scan.unseparated);
    report.count("non-transversal", scan.non_transversal);
    if scan.tongues.is_empty() {
        if scan.unseparated > 0 {
            report.inconclusive("arcs between crossings do not separate their side");
        } else {
            report.inconclusive("fewer than two transversal crossings");
        }
    }
    report
}
