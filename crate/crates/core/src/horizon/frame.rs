use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::curve::angle_between;
use crate::geodesic::SurfacePath;
use crate::mesh::ConvexMesh;
use crate::{GeoError, Result, Vec3};

/// The `(λ, μ, ν)` frame and angle functions on one path segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftSample {
    /// Arc length at the segment midpoint.
    pub t: f64,
    pub segment: usize,
    pub lambda: [f64; 3],
    pub mu: [f64; 3],
    pub nu: [f64; 3],
    /// `∠(i, γ̇)`.
    pub phi: f64,
    /// `π/2 - ∠(i, ν)`.
    pub psi: f64,
    /// `π/2 - ∠(μ, γ̇)`.
    pub theta: f64,
}

impl DriftSample {
    /// `cos θ cos ψ - cos φ`, zero for an exact frame.
    pub fn identity_residual(&self) -> f64 {
        self.theta.cos() * self.psi.cos() - self.phi.cos()
    }
    pub fn nu(&self) -> Vec3 {
        Vec3::from(self.nu)
    }
    pub fn lambda(&self) -> Vec3 {
        Vec3::from(self.lambda)
    }
    pub fn mu(&self) -> Vec3 {
        Vec3::from(self.mu)
    }
}

/// Frames along the path for the drift direction `i`. Each segment lies in
/// one face, so `ν` is that face's normal and `γ̇` the segment direction.
pub fn drift_angles(path: &SurfacePath, mesh: &ConvexMesh, i: &Vec3, tau_frame: f64) -> Result<Vec<DriftSample>> {
    let i = i.normalize();
    let line = path.line();
    let s = path.arclength();
    let mut out = Vec::with_capacity(path.segment_faces().len());
    for (k, &f) in path.segment_faces().iter().enumerate() {
        let g = line.direction(k);
        if g.norm() == 0.0 {
            continue;
        }
        let phi = angle_between(&i, &g);
        if phi >= FRAC_PI_2 - tau_frame {
            return Err(GeoError::Precondition(format!(
                "segment {k} makes angle {phi:.6} with the drift direction, which must stay below π/2"
            )));
        }
        let nu = mesh.face_normal(f);
        let m = nu.cross(&i);
        if m.norm() <= tau_frame {
            return Err(GeoError::Degenerate(format!("normal of segment {k} is parallel to the drift direction")));
        }
        let mu = m.normalize();
        let lambda = mu.cross(&nu);
        let psi = FRAC_PI_2 - angle_between(&i, &nu);
        let theta = FRAC_PI_2 - angle_between(&mu, &g);
        out.push(DriftSample {
            t: 0.5 * (s[k] + s[k + 1]),
            segment: k,
            lambda: lambda.into(),
            mu: mu.into(),
            nu: nu.into(),
            phi,
            psi,
            theta,
        });
    }
    Ok(out)
}
