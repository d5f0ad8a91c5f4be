//! `geolab` command line: mesh generation, geodesics, analysis, checks,
//! sweeps and SVG reports.

mod bundle;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geolab::curve::{total_curvature, Axis};
use geolab::development::{develop_about_point, develop_in_direction};
use geolab::geodesic::{shortest_path, Geodesic, ShortestPathOptions};
use geolab::horizon::find_crossings;
use geolab::lab::{generic_labels, grid_directions, run_checks, run_sweep, run_sweep_with_threads, CheckSet, SweepConfig, Verdict};
use geolab::mesh::{
    generate_surface, read_mesh, write_obj, write_off, ConvexMesh, LipschitzProfile, MeshDescriptor, RadialLaw, SurfaceFamily,
    SurfaceKind, SurfacePoint,
};
use geolab::svg::{development_svg, staircase_svg};
use geolab::{ToleranceProfile, Vec3};

use bundle::{Bundle, NamedDevelopment, PathRecord, BUNDLE_VERSION};
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "geolab", version, about = "Minimizing geodesics on convex meshes and checks of their curvature bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a convex mesh and write it as OFF or OBJ.
    Gen(GenArgs),
    /// Shortest path between two surface points.
    Geodesic(PathArgs),
    /// Crossings and developments of a shortest path.
    Analyze(AnalyzeArgs),
    /// Run lemma checks on a shortest path.
    Verify(VerifyArgs),
    /// Seeded randomized sweep.
    Sweep(SweepArgs),
    /// Render SVGs from an analyze/verify bundle.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Ellipsoid,
    RandomHull,
    Lipschitz,
    Cube,
    Tetrahedron,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Cone,
    Paraboloid,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Ellipsoid semi-axes `a,b,c`.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.0, 1.0])]
    axes: Vec<f64>,
    /// Random hull sample count.
    #[arg(long, default_value_t = 200)]
    points: usize,
    /// Random hull inner radius; samples are on the sphere when absent.
    #[arg(long)]
    inner: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    lipschitz: f64,
    #[arg(long, value_enum, default_value_t = Profile::Cone)]
    profile: Profile,
    #[arg(long, default_value_t = 0.3)]
    softening: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Target face count.
    #[arg(long, default_value_t = 2000)]
    res: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output mesh file (`.off` or `.obj`).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Start point `f<face>:<b1>,<b2>`.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    /// End point `f<face>:<b1>,<b2>`.
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    #[arg(long, default_value_t = 4)]
    steiner: usize,
    /// Tolerance profile JSON; defaults are used for missing fields.
    #[arg(long)]
    tolerances: Option<PathBuf>,
    /// Output directory; JSON goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    path: PathArgs,
    /// Direction `x,y,z` for crossings and the in-direction development;
    /// defaults to the chord.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    direction: Option<Vec<f64>>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    path: PathArgs,
    /// `all` or a comma-separated subset of the check names.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Direction `x,y,z` for per-direction checks; the 26 grid directions
    /// are used when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    direction: Option<Vec<f64>>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration JSON; the built-in default when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the master seed of the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Run directory for aggregate, instances and manifest; aggregate JSON
    /// goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the default configuration and exit.
    #[arg(long)]
    print_default_config: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Bundle written by `analyze` or `verify`.
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// A check failed (exit 1), as opposed to an error (exit 2).
struct ChecksFailed;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(ChecksFailed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

type Outcome = anyhow::Result<Result<(), ChecksFailed>>;

fn pass_if(ok: bool) -> Outcome {
    Ok(if ok { Ok(()) } else { Err(ChecksFailed) })
}

fn to_json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn gen(a: GenArgs) -> Outcome {
    if a.axes.len() != 3 {
        bail!("--axes takes three comma-separated values, got {}", a.axes.len());
    }
    let kind = match a.family {
        Family::Ellipsoid => SurfaceKind::Ellipsoid { a: a.axes[0], b: a.axes[1], c: a.axes[2] },
        Family::RandomHull => SurfaceKind::RandomHull {
            points: a.points,
            radial: a.inner.map_or(RadialLaw::UniformSphere, |inner| RadialLaw::Shell { inner }),
        },
        Family::Lipschitz => SurfaceKind::LipschitzGraph {
            lipschitz: a.lipschitz,
            profile: match a.profile {
                Profile::Cone => LipschitzProfile::SmoothCone { softening: a.softening },
                Profile::Paraboloid => LipschitzProfile::Paraboloid,
            },
            radius: a.radius,
        },
        Family::Cube => SurfaceKind::Cube,
        Family::Tetrahedron => SurfaceKind::Tetrahedron,
    };
    let family = SurfaceFamily { kind, resolution: a.res, seed: a.seed };
    let mesh = generate_surface(&family)?;
    let text = match a.out.extension().and_then(|e| e.to_str()) {
        Some("obj") => write_obj(&mesh),
        Some("off") => write_off(&mesh),
        _ => bail!("output must end in .off or .obj: {}", a.out.display()),
    };
    std::fs::write(&a.out, text).with_context(|| format!("writing {}", a.out.display()))?;
    print!("{}", to_json(&MeshDescriptor::of(&mesh))?);
    pass_if(true)
}

struct Loaded {
    mesh: ConvexMesh,
    geodesic: Geodesic,
    tolerances: ToleranceProfile,
    manifest: RunManifest,
}

fn load_path(a: &PathArgs, command: &str, extra: serde_json::Value) -> anyhow::Result<Loaded> {
    let from = SurfacePoint::parse(&a.from)?;
    let to = SurfacePoint::parse(&a.to)?;
    let tolerances: ToleranceProfile = match &a.tolerances {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => ToleranceProfile::default(),
    };
    let config = serde_json::json!({
        "mesh": a.mesh.display().to_string(),
        "from": a.from,
        "to": a.to,
        "steiner": a.steiner,
        "tolerances": tolerances,
        "extra": extra,
    });
    let mut manifest = RunManifest::new(command, config);
    manifest.phase("load");
    manifest.input(&a.mesh)?;
    if let Some(p) = &a.tolerances {
        manifest.input(p)?;
    }
    let mesh = read_mesh(&a.mesh)?;
    manifest.phase("geodesic");
    let options = ShortestPathOptions { steiner: a.steiner, tolerances, ..Default::default() };
    let geodesic = shortest_path(&mesh, &from, &to, &options)?;
    Ok(Loaded { mesh, geodesic, tolerances, manifest })
}

fn path_record(g: &Geodesic) -> PathRecord {
    PathRecord {
        samples: g.path.samples(),
        points: g.path.points().iter().map(|p| (*p).into()).collect(),
        length: g.path.length(),
        tc: total_curvature(g.path.points()).value,
        certificate: g.certificate.clone(),
    }
}

/// Writes `name` under `out` (with a manifest) or prints it.
fn emit(out: &Option<PathBuf>, manifest: RunManifest, name: &str, text: &str) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            let mut manifest = manifest;
            manifest.write(dir.join(name), text.as_bytes())?;
            manifest.finish(dir)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn geodesic(a: PathArgs) -> Outcome {
    let loaded = load_path(&a, "geodesic", serde_json::Value::Null)?;
    let record = path_record(&loaded.geodesic);
    let text = to_json(&record)?;
    emit(&a.out, loaded.manifest, "geodesic.json", &text)?;
    pass_if(record.certificate.certified)
}

fn parse_direction(v: &Option<Vec<f64>>) -> anyhow::Result<Option<Vec3>> {
    match v {
        None => Ok(None),
        Some(c) if c.len() != 3 => bail!("direction takes three comma-separated values, got {}", c.len()),
        Some(c) => {
            let d = Vec3::new(c[0], c[1], c[2]);
            if !(d.norm() > 0.0) {
                bail!("direction must be nonzero");
            }
            Ok(Some(d.normalize()))
        }
    }
}

fn analyze(a: AnalyzeArgs) -> Outcome {
    let direction = parse_direction(&a.direction)?;
    let mut loaded = load_path(&a.path, "analyze", serde_json::json!({ "direction": a.direction }))?;
    loaded.manifest.phase("analyze");
    let (mesh, g, tol) = (&loaded.mesh, &loaded.geodesic, &loaded.tolerances);
    let pts = g.path.points();
    let u = match direction {
        Some(u) => u,
        None => Axis::new(pts[0], pts[pts.len() - 1] - pts[0]).map_err(|e| anyhow!("{e}"))?.direction,
    };
    // crossings need a generic direction; the development uses the exact one
    let labels = generic_labels(mesh, &u, tol)?;
    let crossings = find_crossings(&g.path, &labels, tol.merge_rel);
    let mut developments =
        vec![NamedDevelopment { name: "direction".into(), development: develop_in_direction(g.path.line(), &u, tol.dev_rel)? }];
    let centre = mesh.centroid();
    if let Ok(d) = develop_about_point(g.path.line(), &centre, tol.axis_rel * mesh.diameter()) {
        developments.push(NamedDevelopment { name: "centroid".into(), development: d });
    }
    let bundle = Bundle {
        schema_version: BUNDLE_VERSION,
        mesh: Some(MeshDescriptor::of(mesh)),
        path: Some(path_record(g)),
        crossings: vec![crossings],
        developments,
        ..Default::default()
    };
    let certified = g.certificate.certified;
    emit(&a.path.out, loaded.manifest, "bundle.json", &to_json(&bundle)?)?;
    pass_if(certified)
}

fn verify(a: VerifyArgs) -> Outcome {
    let checks = CheckSet::parse(&a.checks)?;
    let direction = parse_direction(&a.direction)?;
    let mut loaded = load_path(&a.path, "verify", serde_json::json!({ "checks": a.checks, "direction": a.direction }))?;
    loaded.manifest.phase("checks");
    let (mesh, g, tol) = (&loaded.mesh, &loaded.geodesic, &loaded.tolerances);
    let directions = match direction {
        Some(u) => vec![u],
        None => grid_directions(),
    };
    let reports = if g.certificate.certified { run_checks(&g.path, mesh, &directions, tol, &checks) } else { Vec::new() };
    let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    let verdict = if !g.certificate.certified {
        Verdict::Inconclusive
    } else if failed {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let bundle = Bundle {
        schema_version: BUNDLE_VERSION,
        mesh: Some(MeshDescriptor::of(mesh)),
        path: Some(path_record(g)),
        reports,
        verdict: Some(verdict),
        ..Default::default()
    };
    emit(&a.path.out, loaded.manifest, "bundle.json", &to_json(&bundle)?)?;
    if !g.certificate.certified {
        eprintln!("geodesic is not certified; checks were not run");
    }
    pass_if(verdict == Verdict::Pass)
}

fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var("GEOLAB_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("GEOLAB_THREADS must be a positive integer, got `{v}`"))?)),
        Err(_) => Ok(None),
    }
}

fn sweep(a: SweepArgs) -> Outcome {
    if a.print_default_config {
        print!("{}", to_json(&SweepConfig::default())?);
        return pass_if(true);
    }
    let mut manifest = RunManifest::new("sweep", serde_json::Value::Null);
    manifest.phase("load");
    let mut config: SweepConfig = match &a.config {
        Some(p) => {
            let bytes = manifest.input(p)?;
            serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SweepConfig::default(),
    };
    if let Some(seed) = a.seed {
        config.master_seed = seed;
    }
    manifest.config = serde_json::to_value(&config)?;
    manifest.phase("sweep");
    let outcome = match threads_from_env()? {
        Some(n) => run_sweep_with_threads(&config, n)?,
        None => run_sweep(&config)?,
    };
    manifest.phase("write");
    let aggregate = outcome.aggregate.to_json() + "\n";
    match &a.out {
        Some(dir) => {
            manifest.write(dir.join("aggregate.json"), aggregate.as_bytes())?;
            manifest.write(dir.join("instances.json"), to_json(&outcome.instances)?.as_bytes())?;
            manifest.finish(dir)?;
        }
        None => print!("{aggregate}"),
    }
    pass_if(outcome.aggregate.verdict != Verdict::Fail)
}

fn report(a: ReportArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.bundle).with_context(|| format!("reading {}", a.bundle.display()))?;
    let bundle: Bundle = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.bundle.display()))?;
    let mut files: Vec<(String, String)> = Vec::new();
    for (k, d) in bundle.developments.iter().enumerate() {
        files.push((format!("development-{k}-{}.svg", sanitize(&d.name)), development_svg(&d.development)));
    }
    for (k, c) in bundle.crossings.iter().enumerate() {
        files.push((format!("staircase-{k}.svg"), staircase_svg(&c.signs())));
    }
    if files.is_empty() {
        return pass_if(true);
    }
    let mut manifest = RunManifest::new("report", serde_json::json!({ "bundle": a.bundle.display().to_string() }));
    manifest.input(&a.bundle)?;
    manifest.phase("render");
    for (name, svg) in &files {
        manifest.write(a.out.join(name), svg.as_bytes())?;
    }
    manifest.finish(&a.out)?;
    for (name, _) in &files {
        println!("{}", Path::new(&a.out).join(name).display());
    }
    pass_if(true)
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}
