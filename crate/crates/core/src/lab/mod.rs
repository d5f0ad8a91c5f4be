//! Numerical checks of the structural lemmas. Each check returns a
//! [`LemmaReport`] with named residuals.

mod arcs;
mod drift;
mod global;
mod liberman;
mod report;
mod suite;
mod sweep;
mod tongue;

pub use arcs::{almost_constant_arc, enclosing_cap, split_three_arcs, ConstantArc, ThreeArcs};
pub use drift::{
    check_drift_depth, check_frames, check_growth, dark_suffix, drift_crossings, generic_labels, growth_from_data, perpendicular_directions,
    rotate_j, DriftCrossings, GrowthData, PrefixCurvature, DRIFT_ANGLE, IDENTITY_TOL, J_CANDIDATES, ORTHO_TOL,
};
pub use global::{check_alternating_bound, check_global_bounds, grid_directions};
pub use liberman::{check_liberman, side_runs, SideRun};
pub use report::{Instance, LemmaReport, Residual, Verdict};
pub use suite::{check_crossing_depth, check_eps_straight, run_checks, CheckSet, CONSTANT_ARC_DELTA, CONSTANT_ARC_EPS, EPS_STRAIGHT};
pub use sweep::{
    run_sweep, run_sweep_with_threads, Aggregate, FailureEntry, InstanceRecord, LeaderEntry, LemmaSummary, SurfaceSpec, SweepConfig,
    SweepOutcome, Tally, GRAPH_INTERIOR, LEADERBOARD, SCHEMA_VERSION,
};
pub use tongue::{
    circle_distance, detect_and_check_tongues, find_tongues, nearest_branch, report_tongues, tongue_values, Tongue, TongueScan,
};
