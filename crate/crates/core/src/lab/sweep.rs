use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::total_curvature;
use crate::geodesic::{shortest_path, ShortestPathOptions};
use crate::mesh::{generate_surface, uniform_on_sphere, ConvexMesh, LipschitzProfile, RadialLaw, SurfaceFamily, SurfaceKind, SurfacePoint};
use crate::{GeoError, Result, ToleranceProfile, Vec3};

use super::{run_checks, CheckSet, LemmaReport, Verdict};

pub const SCHEMA_VERSION: u32 = 1;
/// Leaderboard length.
pub const LEADERBOARD: usize = 10;
/// Lipschitz-graph endpoints are drawn over this fraction of the disc radius.
pub const GRAPH_INTERIOR: f64 = 0.7;

/// `count` surfaces of one family at one resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    #[serde(flatten)]
    pub kind: SurfaceKind,
    pub resolution: usize,
    #[serde(default = "one")]
    pub count: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub surfaces: Vec<SurfaceSpec>,
    pub pairs_per_surface: usize,
    pub directions_per_path: usize,
    pub master_seed: u64,
    pub steiner: usize,
    pub tolerances: ToleranceProfile,
    pub checks: CheckSet,
}

impl Default for SweepConfig {
    /// Desk-scale sweep: ten surfaces, ten pairs each.
    fn default() -> Self {
        let ellipsoid = |a, b, c| SurfaceSpec { kind: SurfaceKind::Ellipsoid { a, b, c }, resolution: 20_000, count: 1 };
        SweepConfig {
            surfaces: vec![
                ellipsoid(1.0, 1.0, 1.0),
                ellipsoid(1.0, 0.8, 0.6),
                ellipsoid(2.0, 1.0, 0.5),
                ellipsoid(1.5, 1.5, 0.4),
                SurfaceSpec { kind: SurfaceKind::RandomHull { points: 1000, radial: RadialLaw::UniformSphere }, resolution: 2000, count: 2 },
                SurfaceSpec {
                    kind: SurfaceKind::RandomHull { points: 1500, radial: RadialLaw::Shell { inner: 0.8 } },
                    resolution: 2000,
                    count: 1,
                },
                SurfaceSpec {
                    kind: SurfaceKind::LipschitzGraph {
                        lipschitz: 1.0,
                        profile: LipschitzProfile::SmoothCone { softening: 0.3 },
                        radius: 1.0,
                    },
                    resolution: 10_000,
                    count: 2,
                },
                SurfaceSpec {
                    kind: SurfaceKind::LipschitzGraph { lipschitz: 1.0, profile: LipschitzProfile::Paraboloid, radius: 1.0 },
                    resolution: 10_000,
                    count: 1,
                },
            ],
            pairs_per_surface: 10,
            directions_per_path: 16,
            master_seed: 42,
            steiner: 4,
            tolerances: ToleranceProfile::default(),
            checks: CheckSet::all(),
        }
    }
}

impl SweepConfig {
    /// Surface families with derived seeds, in sweep order.
    pub fn families(&self) -> Vec<SurfaceFamily> {
        let mut out = Vec::new();
        for spec in &self.surfaces {
            for _ in 0..spec.count {
                let seed = stream(self.master_seed, out.len() as u64, 0).random();
                out.push(SurfaceFamily { kind: spec.kind, resolution: spec.resolution, seed });
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.steiner == 0 {
            return Err(GeoError::Precondition("steiner density must be positive".into()));
        }
        if let Some(s) = self.surfaces.iter().find(|s| s.resolution < 4) {
            return Err(GeoError::Precondition(format!("resolution must be at least 4, got {}", s.resolution)));
        }
        Ok(())
    }
}

/// Independent random stream for (surface, slot).
fn stream(master: u64, surface: u64, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(surface << 32 | slot);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub surface: usize,
    pub pair: usize,
    pub family: SurfaceFamily,
    pub mesh_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<SurfacePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<SurfacePoint>,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tc: Option<f64>,
    pub reports: Vec<LemmaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    #[serde(flatten)]
    pub tally: Tally,
    pub residuals: usize,
    /// Largest `excess - tolerance` over all residuals.
    pub worst: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderEntry {
    pub surface: usize,
    pub pair: usize,
    pub mesh_hash: String,
    pub tc: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureEntry {
    pub surface: usize,
    pub pair: usize,
    pub lemma: String,
    pub residual: String,
    pub excess: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub schema_version: u32,
    pub config: SweepConfig,
    pub verdict: Verdict,
    pub instances: usize,
    pub certified: usize,
    pub errors: usize,
    pub totals: Tally,
    pub lemmas: BTreeMap<String, LemmaSummary>,
    /// Largest observed total curvature among certified geodesics.
    pub max_tc: Option<f64>,
    pub leaderboard: Vec<LeaderEntry>,
    pub failures: Vec<FailureEntry>,
}

impl Aggregate {
    pub fn from_records(config: &SweepConfig, records: &[InstanceRecord]) -> Aggregate {
        let mut totals = Tally::default();
        let mut lemmas: BTreeMap<String, LemmaSummary> = BTreeMap::new();
        let mut failures = Vec::new();
        for rec in records {
            for r in &rec.reports {
                totals.add(r.verdict);
                let s = lemmas.entry(r.lemma.clone()).or_default();
                s.tally.add(r.verdict);
                s.residuals += r.residuals.len();
                for res in &r.residuals {
                    let e = res.excess - res.tolerance;
                    if !e.is_nan() {
                        s.worst = Some(s.worst.map_or(e, |w: f64| w.max(e)));
                    }
                }
                for f in r.failures() {
                    failures.push(FailureEntry {
                        surface: rec.surface,
                        pair: rec.pair,
                        lemma: r.lemma.clone(),
                        residual: f.name.clone(),
                        excess: f.excess,
                        tolerance: f.tolerance,
                    });
                }
            }
        }
        let mut board: Vec<LeaderEntry> = records
            .iter()
            .filter(|r| r.certified)
            .filter_map(|r| {
                Some(LeaderEntry { surface: r.surface, pair: r.pair, mesh_hash: r.mesh_hash.clone(), tc: r.tc?, length: r.length? })
            })
            .collect();
        board.sort_by(|a, b| b.tc.total_cmp(&a.tc).then((a.surface, a.pair).cmp(&(b.surface, b.pair))));
        board.truncate(LEADERBOARD);
        let verdict = if totals.fail > 0 { Verdict::Fail } else { Verdict::Pass };
        Aggregate {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            verdict,
            instances: records.len(),
            certified: records.iter().filter(|r| r.certified).count(),
            errors: records.iter().filter(|r| r.error.is_some()).count(),
            totals,
            lemmas,
            max_tc: board.first().map(|e| e.tc),
            leaderboard: board,
            failures,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("aggregate serializes")
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub aggregate: Aggregate,
    pub instances: Vec<InstanceRecord>,
}

/// Random endpoint. Graph meshes draw from the interior of the graph region.
fn pick_point(mesh: &ConvexMesh, kind: &SurfaceKind, rng: &mut ChaCha8Rng, near: Option<Vec3>) -> Option<SurfacePoint> {
    match *kind {
        SurfaceKind::LipschitzGraph { radius, .. } => {
            let r = GRAPH_INTERIOR * radius * rng.random::<f64>().sqrt();
            let a = rng.random_range(0.0..TAU);
            let origin = Vec3::new(r * a.cos(), r * a.sin(), mesh.centroid().z);
            mesh.ray_exit(&origin, &-Vec3::z())
        }
        _ => {
            let d = uniform_on_sphere(rng);
            let d = match near {
                Some(c) => (c + 0.4 * d).normalize(),
                None => d,
            };
            mesh.point_toward(&d)
        }
    }
}

fn run_instance(config: &SweepConfig, surface: usize, pair: usize, family: &SurfaceFamily, mesh: &ConvexMesh) -> InstanceRecord {
    let mut rec = InstanceRecord {
        surface,
        pair,
        family: *family,
        mesh_hash: mesh.content_hash(),
        from: None,
        to: None,
        certified: false,
        length: None,
        tc: None,
        reports: Vec::new(),
        error: None,
    };
    let mut rng = stream(config.master_seed, surface as u64, pair as u64 + 1);
    let p = pick_point(mesh, &family.kind, &mut rng, None);
    let near = (pair % 2 == 1).then(|| p.map(|p| (mesh.position(&p) - mesh.centroid()).normalize())).flatten();
    let q = pick_point(mesh, &family.kind, &mut rng, near);
    let directions: Vec<Vec3> = (0..config.directions_per_path).map(|_| uniform_on_sphere(&mut rng)).collect();
    let (Some(p), Some(q)) = (p, q) else {
        rec.error = Some("endpoint sampling missed the surface".into());
        return rec;
    };
    rec.from = Some(p);
    rec.to = Some(q);
    let options = ShortestPathOptions { steiner: config.steiner, tolerances: config.tolerances, ..Default::default() };
    let g = match shortest_path(mesh, &p, &q, &options) {
        Ok(g) => g,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.certified = g.certificate.certified;
    rec.length = Some(g.path.length());
    rec.tc = Some(total_curvature(g.path.points()).value);
    if rec.certified {
        rec.reports = run_checks(&g.path, mesh, &directions, &config.tolerances, &config.checks);
    } else {
        let mut r = LemmaReport::new("certificate");
        r.value("residual", g.certificate.residual);
        r.value("gap", g.certificate.gap);
        r.inconclusive("geodesic not certified; checks skipped");
        rec.reports.push(r);
    }
    rec
}

/// Runs the sweep on the current rayon pool. Output order and content depend
/// only on the configuration.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let families = config.families();
    let meshes: Vec<std::result::Result<ConvexMesh, String>> =
        families.par_iter().map(|f| generate_surface(f).map_err(|e| e.to_string())).collect();
    let jobs: Vec<(usize, usize)> = (0..families.len()).flat_map(|s| (0..config.pairs_per_surface).map(move |p| (s, p))).collect();
    let instances: Vec<InstanceRecord> = jobs
        .par_iter()
        .map(|&(s, p)| match &meshes[s] {
            Ok(mesh) => run_instance(config, s, p, &families[s], mesh),
            Err(e) => InstanceRecord {
                surface: s,
                pair: p,
                family: families[s],
                mesh_hash: String::new(),
                from: None,
                to: None,
                certified: false,
                length: None,
                tc: None,
                reports: Vec::new(),
                error: Some(format!("mesh generation failed: {e}")),
            },
        })
        .collect();
    let aggregate = Aggregate::from_records(config, &instances);
    Ok(SweepOutcome { aggregate, instances })
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(config: &SweepConfig, threads: usize) -> Result<SweepOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| GeoError::Precondition(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(config))
}
