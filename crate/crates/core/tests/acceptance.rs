//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use geolab::curve::{eps_straight_bound, total_curvature};
use geolab::geodesic::{shortest_path, trace_geodesic, ShortestPathOptions};
use geolab::lab::{
    check_liberman, find_tongues, generic_labels, growth_from_data, nearest_branch, run_sweep, GrowthData, InstanceRecord,
    SweepConfig, SweepOutcome, Verdict,
};
use geolab::mesh::{
    generate_surface, total_defect, ConvexMesh, LipschitzProfile, RadialLaw, SurfaceFamily, SurfaceKind, SurfacePoint,
};
use geolab::spairs::{brute_force_oracle, check_depth_bounds, match_spairs, SignSequence};
use geolab::{ToleranceProfile, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Gate {
    failed: usize,
}

impl Gate {
    fn line(&mut self, id: u32, ok: bool, text: String) {
        if !ok {
            self.failed += 1;
        }
        println!("[{}] {id:>2} {text}", if ok { "PASS" } else { "FAIL" });
    }
}

fn family(kind: SurfaceKind, resolution: usize, seed: u64) -> SurfaceFamily {
    SurfaceFamily { kind, resolution, seed }
}

fn sphere(resolution: usize) -> ConvexMesh {
    generate_surface(&family(SurfaceKind::Ellipsoid { a: 1.0, b: 1.0, c: 1.0 }, resolution, 1)).unwrap()
}

fn options() -> ShortestPathOptions {
    ShortestPathOptions::default()
}

/// Residuals with this name prefix over the given lemma, across all sweep instances.
fn residuals<'a>(records: &'a [InstanceRecord], lemma: &'a str, prefix: &'a str) -> impl Iterator<Item = &'a geolab::lab::Residual> + 'a {
    records
        .iter()
        .flat_map(|r| &r.reports)
        .filter(move |r| r.lemma == lemma)
        .flat_map(|r| &r.residuals)
        .filter(move |r| r.name.starts_with(prefix))
}

fn tally(records: &[InstanceRecord], lemma: &str, prefix: &str) -> (usize, usize, f64) {
    let (mut n, mut bad, mut worst) = (0, 0, f64::NEG_INFINITY);
    for r in residuals(records, lemma, prefix) {
        n += 1;
        if !r.passed() {
            bad += 1;
        }
        worst = worst.max(r.excess - r.tolerance);
    }
    (n, bad, worst)
}

fn gauss_bonnet(gate: &mut Gate) {
    let kinds = [
        (SurfaceKind::Tetrahedron, 4),
        (SurfaceKind::Cube, 12),
        (SurfaceKind::Ellipsoid { a: 1.0, b: 1.0, c: 1.0 }, 1000),
        (SurfaceKind::Ellipsoid { a: 2.0, b: 1.0, c: 0.5 }, 5000),
        (SurfaceKind::Ellipsoid { a: 1.0, b: 0.8, c: 0.6 }, 20_000),
        (SurfaceKind::Ellipsoid { a: 1.5, b: 1.0, c: 0.7 }, 50_000),
        (SurfaceKind::RandomHull { points: 2000, radial: RadialLaw::UniformSphere }, 4000),
        (SurfaceKind::RandomHull { points: 3000, radial: RadialLaw::Shell { inner: 0.5 } }, 4000),
        (
            SurfaceKind::LipschitzGraph { lipschitz: 1.0, profile: LipschitzProfile::SmoothCone { softening: 0.3 }, radius: 1.0 },
            10_000,
        ),
        (SurfaceKind::LipschitzGraph { lipschitz: 0.5, profile: LipschitzProfile::Paraboloid, radius: 1.0 }, 10_000),
    ];
    let (mut worst, mut slowest, mut faces) = (0.0_f64, 0.0_f64, 0);
    for (k, (kind, res)) in kinds.into_iter().enumerate() {
        let t = Instant::now();
        let mesh = generate_surface(&family(kind, res, k as u64)).unwrap();
        worst = worst.max((total_defect(&mesh) - 4.0 * PI).abs());
        slowest = slowest.max(t.elapsed().as_secs_f64());
        faces = faces.max(mesh.num_faces());
    }
    gate.line(
        1,
        worst <= 1e-9 && slowest < 1.0,
        format!("Gauss-Bonnet: max |total defect - 4pi| = {worst:.2e} (tol 1e-9) on 10 meshes up to {faces} faces; slowest {slowest:.3} s (< 1 s)"),
    );
}

/// Bottom-to-top distance on the unit cube through one side face.
fn cube_oracle(p: Vec3, q: Vec3) -> f64 {
    let via = |a: f64, b: f64, c: f64, d: f64| ((a - b).powi(2) + (c + 1.0 + d).powi(2)).sqrt();
    [
        via(p.x, q.x, p.y, q.y),
        via(p.x, q.x, 1.0 - p.y, 1.0 - q.y),
        via(p.y, q.y, p.x, q.x),
        via(p.y, q.y, 1.0 - p.x, 1.0 - q.x),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

fn cube_golden(gate: &mut Gate) {
    let t = Instant::now();
    let cube = ConvexMesh::unit_cube();
    let p = SurfacePoint::new(0, [0.5, 0.0, 0.5]);
    let q = SurfacePoint::new(10, [0.5, 0.0, 0.5]);
    let g = shortest_path(&cube, &p, &q, &options()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let len = g.path.length();
    let tc = total_curvature(g.path.points()).value;
    let oracle = cube_oracle(cube.position(&p), cube.position(&q));
    let ok = (len - 2.0).abs() <= 1e-6
        && (tc - PI).abs() <= 1e-6
        && g.certificate.residual <= 1e-8
        && g.certificate.certified
        && (len - oracle).abs() <= 1e-9
        && secs < 1.0;
    gate.line(
        2,
        ok,
        format!(
            "cube golden geodesic: length {len:.9} (2 +- 1e-6, unfolding oracle {oracle:.9}), tc {tc:.9} (pi +- 1e-6), residual {:.1e} (<= 1e-8), {secs:.3} s",
            g.certificate.residual
        ),
    );
}

fn sphere_convergence(gate: &mut Gate) {
    let mut errs = Vec::new();
    let mut certified = true;
    for res in [1000, 5000, 20_000] {
        let s = sphere(res);
        let p = s.point_toward(&Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let q = s.point_toward(&Vec3::new(0.0, 1.0, 0.0)).unwrap();
        let g = shortest_path(&s, &p, &q, &options()).unwrap();
        certified &= g.certificate.certified;
        let tc = total_curvature(g.path.points()).value;
        errs.push(((g.path.length() - PI / 2.0).abs(), (tc - PI / 2.0).abs()));
    }
    let (len_err, tc_err) = errs[2];
    gate.line(
        3,
        len_err <= 2e-2 && tc_err <= 5e-2 && certified,
        format!(
            "sphere convergence: length error {:.2e}/{:.2e}/{:.2e}, tc error {:.2e}/{:.2e}/{:.2e} at 1k/5k/20k faces (20k tol 2e-2 / 5e-2)",
            errs[0].0, errs[1].0, errs[2].0, errs[0].1, errs[1].1, errs[2].1
        ),
    );
}

fn liberman(gate: &mut Gate) {
    let t = Instant::now();
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut instances, mut runs, mut failures, mut worst) = (0, 0, 0, f64::NEG_INFINITY);
    for m in 0..10 {
        let kind = if m < 5 {
            SurfaceKind::Ellipsoid { a: rng.random_range(0.6..1.6), b: rng.random_range(0.6..1.6), c: rng.random_range(0.6..1.6) }
        } else {
            SurfaceKind::RandomHull { points: 600, radial: RadialLaw::UniformSphere }
        };
        let mesh = generate_surface(&family(kind, 4000, m)).unwrap();
        for k in 0..10 {
            let mut pick = || {
                let d = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                mesh.point_toward(&d).unwrap()
            };
            let (p, q) = (pick(), pick());
            let g = shortest_path(&mesh, &p, &q, &options()).unwrap();
            if !g.certificate.certified {
                continue;
            }
            // mean normal along the path: + makes the middle dark, - bright
            let n: Vec3 = g.path.segment_faces().iter().map(|&f| mesh.face_normal(f)).sum();
            let u = if k % 2 == 0 { n.normalize() } else { -n.normalize() };
            let labels = generic_labels(&mesh, &u, &tol).unwrap();
            let r = check_liberman(&g.path, &labels, &tol).unwrap();
            instances += 1;
            runs += r.residuals.len();
            failures += r.failures().count();
            if let Some(w) = r.worst("") {
                worst = worst.max(w);
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    gate.line(
        4,
        instances == 100 && runs > 0 && failures == 0 && secs < 120.0,
        format!(
            "Liberman: {instances} certified instances, {runs} one-sided runs developed, {failures} sign violations at tau_geo = 1e-8 (worst excess over tol {worst:.2e}); {secs:.1} s"
        ),
    );
}

fn corollary_alternating(gate: &mut Gate, sweep: &SweepOutcome) {
    let certified = sweep.instances.iter().filter(|r| r.certified).count();
    let (n, bad, worst) = tally(&sweep.instances, "global", "alternating-");
    gate.line(
        5,
        bad == 0 && n == 26 * certified && certified == sweep.instances.len(),
        format!(
            "alternating bound tc_u <= 3pi + 2|sum (-1)^n alpha_n| + 1e-4: {n} checks ({certified} certified geodesics x 26 directions), {bad} failures, worst excess over tol {worst:.2e}"
        ),
    );
}

fn tongues(gate: &mut Gate, sweep: &SweepOutcome) {
    let tol = ToleranceProfile::default();
    let mesh = sphere(20_000);
    let labels = generic_labels(&mesh, &Vec3::z(), &tol).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for i in [0.2_f64, 0.5, 1.0] {
        let mut found = None;
        for attempt in 0..5 {
            let s0 = -0.3 - 0.01 * attempt as f64;
            let x = Vec3::new(s0.cos(), s0.sin() * i.cos(), s0.sin() * i.sin());
            let d = Vec3::new(-s0.sin(), s0.cos() * i.cos(), s0.cos() * i.sin());
            let start = mesh.point_toward(&x).unwrap();
            let Ok(path) = trace_geodesic(&mesh, &start, &d, PI + 0.6) else { continue };
            let scan = find_tongues(&path, &mesh, &labels, &tol).unwrap();
            // the hemisphere arc; short tongues appear where the path grazes the polyhedral horizon
            found = scan.tongues.into_iter().filter(|t| t.dark).max_by(|a, b| (a.t1 - a.t0).total_cmp(&(b.t1 - b.t0)));
            if found.is_some() {
                break;
            }
        }
        let Some(t) = found else {
            ok = false;
            lines.push(format!("i={i}: no tongue"));
            continue;
        };
        let d = t.disc();
        let (branch, dist) = nearest_branch(d, t.alpha, t.beta);
        ok &= (d - 2.0 * i).abs() <= 0.05 && branch == 1 && dist <= 0.05;
        lines.push(format!("i={i}: D={d:.4} (2i={:.1}), alpha={:.3}, beta={:.3}, branch -a+b off by {dist:.1e}", 2.0 * i, t.alpha, t.beta));
    }
    let (n_gap, bad_gap, _) = tally(&sweep.instances, "tongue", "angle-gap-");
    let (n_tc, bad_tc, _) = tally(&sweep.instances, "tongue", "directional-tc-");
    let (n_id, bad_id, _) = tally(&sweep.instances, "tongue", "identity-");
    ok &= bad_gap == 0 && bad_tc == 0;
    gate.line(
        6,
        ok,
        format!(
            "tongue lemma: {}; sweep tongues: {n_gap} angle-gap checks ({bad_gap} fail), {n_tc} dark-side tc checks ({bad_tc} fail), identity {n_id} checks ({bad_id} fail)",
            lines.join("; ")
        ),
    );
}

fn eps_straight(gate: &mut Gate, sweep: &SweepOutcome) {
    let (n, bad, _) = tally(&sweep.instances, "eps-straight", "count-");
    let (nd, badd, worst) = tally(&sweep.instances, "global", "diameter");
    gate.line(
        7,
        bad == 0 && badd == 0 && n > 0 && nd > 0,
        format!(
            "eps-straight: {n} subdivision counts vs ceil(2/eps)+1 (bounds {}/{}/{} for eps 0.5/0.2/0.1), {bad} failures; diam >= l/10 - 1e-6 on {nd} geodesics, {badd} failures (worst {worst:.2e})",
            eps_straight_bound(0.5),
            eps_straight_bound(0.2),
            eps_straight_bound(0.1)
        ),
    );
}

fn signs_of(bits: u32, len: usize) -> SignSequence {
    SignSequence::new((0..len).map(|k| if bits >> k & 1 == 1 { 1 } else { -1 }).collect()).unwrap()
}

fn spairs(gate: &mut Gate, sweep: &SweepOutcome) {
    let t = Instant::now();
    let mut mismatches = 0;
    for bits in 0..1u32 << 12 {
        let s = signs_of(bits, 12);
        if brute_force_oracle(&s).unwrap() != match_spairs(&s) {
            mismatches += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let s = signs_of(rng.random::<u32>(), 24);
        if brute_force_oracle(&s).unwrap() != match_spairs(&s) {
            mismatches += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let (n1, bad1, _) = tally(&sweep.instances, "crossing-depth", "");
    let (n2, bad2, _) = tally(&sweep.instances, "drift-depth", "");
    gate.line(
        8,
        mismatches == 0 && bad1 + bad2 == 0 && secs < 30.0,
        format!(
            "s-pairs: {mismatches} oracle mismatches over 4096 length-12 and 1000 length-24 sequences ({secs:.2} s); depth bounds on sweep crossing data: {} checks, {} failures",
            n1 + n2,
            bad1 + bad2
        ),
    );
}

fn usov(gate: &mut Gate) {
    let tol = ToleranceProfile::default();
    let kinds = [
        LipschitzProfile::SmoothCone { softening: 0.3 },
        LipschitzProfile::SmoothCone { softening: 0.1 },
        LipschitzProfile::Paraboloid,
    ];
    let (mut n, mut bad, mut max_tc, mut skipped) = (0, 0, 0.0_f64, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (m, profile) in kinds.into_iter().enumerate() {
        let mesh = generate_surface(&family(SurfaceKind::LipschitzGraph { lipschitz: 1.0, profile, radius: 1.0 }, 10_000, m as u64)).unwrap();
        let region = mesh.graph_region().unwrap().to_vec();
        let mut done = 0;
        while done < 10 {
            let mut pick = || {
                let r = 0.7 * rng.random::<f64>().sqrt();
                let a = rng.random_range(0.0..2.0 * PI);
                mesh.ray_exit(&Vec3::new(r * a.cos(), r * a.sin(), mesh.centroid().z), &-Vec3::z()).unwrap()
            };
            let (p, q) = (pick(), pick());
            let g = shortest_path(&mesh, &p, &q, &ShortestPathOptions { tolerances: tol, ..options() }).unwrap();
            if !g.certificate.certified || !g.path.segment_faces().iter().all(|&f| region[f as usize]) {
                skipped += 1;
                continue;
            }
            done += 1;
            n += 1;
            let tc = total_curvature(g.path.points()).value;
            max_tc = max_tc.max(tc);
            if tc > 2.0 + 1e-3 {
                bad += 1;
            }
        }
    }
    gate.line(
        9,
        n == 30 && bad == 0,
        format!("Usov bound: {n} certified geodesics inside the graph region of lipschitz(1) meshes, max tc {max_tc:.4} (<= 2 + 1e-3), {bad} failures, {skipped} draws left the region"),
    );
}

fn frames(gate: &mut Gate, sweep: &SweepOutcome) {
    let (ni, badi, worst_id) = tally(&sweep.instances, "drift-frame", "identity");
    let (nc, badc, _) = tally(&sweep.instances, "drift-frame", "phi-");
    let (ns, bads, _) = tally(&sweep.instances, "drift-frame", "section-bound");
    let growth_fail = sweep
        .instances
        .iter()
        .flat_map(|r| &r.reports)
        .filter(|r| r.lemma == "growth" && r.verdict == Verdict::Fail)
        .count();
    let growth_triggered = sweep
        .instances
        .iter()
        .flat_map(|r| &r.reports)
        .filter(|r| r.lemma == "growth" && r.verdict != Verdict::Inconclusive)
        .count();

    let mut negative = SignSequence::new(vec![1, -1]).unwrap().with_data(vec![0.3, -0.2], vec![0.1, 0.5]).unwrap();
    let depth_control = check_depth_bounds(&negative, 1e-4).unwrap().verdict == Verdict::Fail;
    negative.theta = Some(vec![0.0, 0.0]);
    let depth_sane = check_depth_bounds(&negative, 1e-4).unwrap().verdict == Verdict::Pass;
    let data = GrowthData { signs: vec![1; 6], theta: vec![0.0; 6], phi: vec![0.1; 6], psi_between: vec![0.0; 5], tc_j: 1.0 };
    let growth_control = growth_from_data(&data, &ToleranceProfile::default()).verdict == Verdict::Fail;

    gate.line(
        10,
        badi + badc + bads + growth_fail == 0 && ni > 0 && depth_control && depth_sane && growth_control,
        format!(
            "frames: identity on {ni} paths (worst {worst_id:.1e} over 1e-9 tol), {nc} phi checks, {ns} section-bound checks, {} failures; growth {growth_triggered} triggered, {growth_fail} failures; negative controls fail as designed: depth {depth_control}, growth {growth_control}",
            badi + badc + bads
        ),
    );
}

fn determinism(gate: &mut Gate, first: &SweepOutcome, secs: f64) {
    let t = Instant::now();
    let again = run_sweep(&SweepConfig::default()).unwrap();
    let secs2 = t.elapsed().as_secs_f64();
    let (a, b) = (first.aggregate.to_json(), again.aggregate.to_json());
    let fails = first.aggregate.totals.fail;
    gate.line(
        11,
        a == b && secs.max(secs2) < 600.0 && first.aggregate.verdict == Verdict::Pass,
        format!(
            "determinism: default sweep (seed 42, {} instances, {} reports, {fails} fail) byte-identical on rerun: {}; {secs:.1} s / {secs2:.1} s (<= 600 s); max tc {:.4}",
            first.aggregate.instances,
            first.aggregate.totals.pass + first.aggregate.totals.fail + first.aggregate.totals.inconclusive,
            a == b,
            first.aggregate.max_tc.unwrap_or(f64::NAN)
        ),
    );
}

fn main() {
    let mut gate = Gate { failed: 0 };
    gauss_bonnet(&mut gate);
    cube_golden(&mut gate);
    sphere_convergence(&mut gate);
    liberman(&mut gate);
    let t = Instant::now();
    let sweep = run_sweep(&SweepConfig::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    corollary_alternating(&mut gate, &sweep);
    tongues(&mut gate, &sweep);
    eps_straight(&mut gate, &sweep);
    spairs(&mut gate, &sweep);
    usov(&mut gate);
    frames(&mut gate, &sweep);
    determinism(&mut gate, &sweep, secs);
    println!("acceptance: {} of 11 criteria failed", gate.failed);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}
