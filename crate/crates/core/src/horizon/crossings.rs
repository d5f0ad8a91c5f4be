use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::SideLabeling;
use crate::curve::angle_between;
use crate::geodesic::SurfacePath;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Meeting moment (arc length).
    pub t: f64,
    /// Meeting angle `∠(γ̇_in, u) - π/2`.
    pub alpha: f64,
    /// +1 when the path passes from bright to dark.
    pub sign: i8,
    pub transversal: bool,
    /// Sample index of the crossing on the path.
    #[serde(skip)]
    pub sample: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingSequence {
    pub u: [f64; 3],
    pub crossings: Vec<Crossing>,
    /// Near-tangential double crossings removed by merging.
    pub merged: usize,
}

impl CrossingSequence {
    pub fn signs(&self) -> Vec<i8> {
        self.crossings.iter().map(|c| c.sign).collect()
    }

    /// `α_0 - α_1 + ... ± α_k` over the transversal crossings.
    pub fn alternating_alpha(&self) -> f64 {
        self.crossings
            .iter()
            .filter(|c| c.transversal)
            .enumerate()
            .map(|(n, c)| if n % 2 == 0 { c.alpha } else { -c.alpha })
            .sum()
    }
}

/// Horizon crossings of a path: samples where the path leaves a face of
/// one side for a face of the other.
pub fn find_crossings(path: &SurfacePath, labels: &SideLabeling, merge_rel: f64) -> CrossingSequence {
    let u = labels.direction();
    let faces = path.segment_faces();
    let line = path.line();
    let s = path.arclength();
    let mut raw = Vec::new();
    for k in 1..path.num_samples() - 1 {
        let (before, after) = (labels.is_dark(faces[k - 1]), labels.is_dark(faces[k]));
        if before == after {
            continue;
        }
        let d = line.direction(k - 1);
        let alpha = angle_between(&d, &u) - FRAC_PI_2;
        raw.push(Crossing {
            t: s[k],
            alpha,
            sign: if after { 1 } else { -1 },
            transversal: alpha.abs() < FRAC_PI_2 - 1e-9,
            sample: k,
        });
    }
    let gap = merge_rel * path.length();
    let mut crossings: Vec<Crossing> = Vec::with_capacity(raw.len());
    let mut merged = 0;
    for c in raw {
        match crossings.last() {
            Some(prev) if c.t - prev.t < gap && prev.sign != c.sign => {
                crossings.pop();
                merged += 1;
            }
            _ => crossings.push(c),
        }
    }
    if merged > 0 {
        log::warn!("merged {merged} near-tangential double crossings");
    }
    CrossingSequence { u: labels.u, crossings, merged }
}
