//! Tolerance profile shared by every check.
//!
//! All defaults are pinned here; the profile is echoed into every report so a
//! verdict can always be traced back to the thresholds that produced it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceProfile {
    /// Hull membership / dihedral slack, relative to the bounding-box diameter.
    pub hull_rel: f64,
    /// Slack on negative angle defects (radians).
    pub defect: f64,
    /// Maximum unfolded turning of a certified geodesic (radians).
    pub geo: f64,
    /// Length slack relative to mesh diameter.
    pub len_rel: f64,
    /// Accumulated polyline / defect error on total-curvature inequalities (radians).
    pub tc: f64,
    /// Tongue identity tolerance at the reference resolution (radians).
    pub tongue: f64,
    /// Face count at which `tongue` applies; coarser meshes scale it up.
    pub tongue_reference_faces: usize,
    /// Frame identities and angle-function inequalities (radians).
    pub frame: f64,
    /// Winding tolerance (turns).
    pub wind: f64,
    /// Tie threshold on `<n_f, u>` for side labels.
    pub generic: f64,
    /// Maximum tied-face fraction before a direction is called non-generic.
    pub max_tie_fraction: f64,
    /// Minimum distance of samples to a reference point or axis, relative to diameter.
    pub axis_rel: f64,
    /// Development arc-length tolerance, relative to path length.
    pub dev_rel: f64,
    /// Crossings closer than this fraction of the path length are merged.
    pub merge_rel: f64,
    /// Slack on the Lipschitz-graph total curvature bound (radians).
    pub usov: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            hull_rel: 1e-9,
            defect: 1e-9,
            geo: 1e-8,
            len_rel: 1e-6,
            tc: 1e-4,
            tongue: 5e-2,
            tongue_reference_faces: 20_000,
            frame: 1e-6,
            wind: 1e-6,
            generic: 1e-12,
            max_tie_fraction: 1e-3,
            axis_rel: 1e-9,
            dev_rel: 1e-10,
            merge_rel: 1e-7,
            usov: 1e-3,
        }
    }
}

impl ToleranceProfile {
    /// Tongue tolerance for a mesh with `faces` triangles. The horizon is an
    /// edge path, so its discretization error scales like the edge length,
    /// i.e. like `faces^{-1/2}`.
    pub fn tongue_for(&self, faces: usize) -> f64 {
        let ratio = self.tongue_reference_faces as f64 / faces.max(1) as f64;
        self.tongue * ratio.sqrt().max(1.0)
    }
}
