//! Deterministic generators for closed convex surfaces.

use std::f64::consts::PI;

use nalgebra::{Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{convex_hull, ConvexMesh, Provenance};
use crate::{GeoError, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialLaw {
    /// All samples on the unit sphere.
    UniformSphere,
    /// Radius uniform in `[inner, 1]`; interior samples are discarded by the hull.
    Shell { inner: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "profile")]
pub enum LipschitzProfile {
    /// `f(r) = ℓ·sqrt(r² + (s·R)²)`: a cone rounded at the apex.
    SmoothCone { softening: f64 },
    /// `f(r) = ℓ·r²/(2R)`, whose slope reaches `ℓ` on the disc boundary.
    Paraboloid,
}

impl LipschitzProfile {
    fn value(&self, lipschitz: f64, radius: f64, r: f64) -> f64 {
        match *self {
            LipschitzProfile::SmoothCone { softening } => lipschitz * (r * r + (softening * radius).powi(2)).sqrt(),
            LipschitzProfile::Paraboloid => lipschitz * r * r / (2.0 * radius),
        }
    }
    fn inverse(&self, lipschitz: f64, radius: f64, z: f64) -> f64 {
        match *self {
            LipschitzProfile::SmoothCone { softening } => ((z / lipschitz).powi(2) - (softening * radius).powi(2)).max(0.0).sqrt(),
            LipschitzProfile::Paraboloid => (2.0 * radius * z / lipschitz).max(0.0).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SurfaceKind {
    Ellipsoid { a: f64, b: f64, c: f64 },
    RandomHull { points: usize, radial: RadialLaw },
    LipschitzGraph { lipschitz: f64, profile: LipschitzProfile, radius: f64 },
    Cube,
    Tetrahedron,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFamily {
    #[serde(flatten)]
    pub kind: SurfaceKind,
    /// Target triangle count.
    pub resolution: usize,
    pub seed: u64,
}

const HULL_RETRIES: usize = 8;

/// Generates the mesh of a surface family. The same family always yields a
/// bit-identical mesh.
pub fn generate_surface(family: &SurfaceFamily) -> Result<ConvexMesh> {
    if family.resolution < 4 {
        return Err(GeoError::Precondition(format!("resolution must be at least 4, got {}", family.resolution)));
    }
    let provenance = Provenance {
        generator: "generate_surface".into(),
        params: serde_json::to_value(family)?,
        seed: Some(family.seed),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(family.seed);
    let mut mesh = match family.kind {
        SurfaceKind::Cube => ConvexMesh::unit_cube(),
        SurfaceKind::Tetrahedron => ConvexMesh::tetrahedron(),
        SurfaceKind::Ellipsoid { a, b, c } => {
            if !(a > 0.0 && b > 0.0 && c > 0.0) {
                return Err(GeoError::Precondition(format!("ellipsoid semi-axes must be positive, got {a},{b},{c}")));
            }
            let n = family.resolution / 2 + 2;
            let rot = random_rotation(&mut rng);
            let sphere: Vec<Vec3> = fibonacci_sphere(n).into_iter().map(|p| rot * p).collect();
            let hull = convex_hull(&sphere)?;
            let (verts, tris, _) = hull.compact(&sphere);
            let verts = verts.into_iter().map(|p| Vec3::new(a * p.x, b * p.y, c * p.z)).collect();
            ConvexMesh::new(verts, tris, provenance.clone())?
        }
        SurfaceKind::RandomHull { points, radial } => {
            if points < 4 {
                return Err(GeoError::Precondition(format!("random hull needs at least 4 points, got {points}")));
            }
            let mut last_err = None;
            let mut built = None;
            for _ in 0..HULL_RETRIES {
                let pts: Vec<Vec3> = (0..points)
                    .map(|_| {
                        let r = match radial {
                            RadialLaw::UniformSphere => 1.0,
                            RadialLaw::Shell { inner } => rng.random_range(inner.clamp(0.0, 1.0)..=1.0),
                        };
                        uniform_on_sphere(&mut rng) * r
                    })
                    .collect();
                match convex_hull(&pts) {
                    Ok(hull) => {
                        let (verts, tris, _) = hull.compact(&pts);
                        built = Some(ConvexMesh::new(verts, tris, provenance.clone())?);
                        break;
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            match built {
                Some(m) => m,
                None => return Err(last_err.unwrap_or_else(|| GeoError::Degenerate("random hull".into()))),
            }
        }
        SurfaceKind::LipschitzGraph { lipschitz, profile, radius } => {
            if !(lipschitz > 0.0 && radius > 0.0) {
                return Err(GeoError::Precondition(format!(
                    "lipschitz constant and radius must be positive, got {lipschitz} and {radius}"
                )));
            }
            lipschitz_graph(lipschitz, profile, radius, family.resolution, &mut rng, provenance.clone())?
        }
    };
    mesh.set_provenance(provenance);
    Ok(mesh)
}

/// Graph of a convex radial profile over a disc, closed by its mirror image
/// in a horizontal plane above the disc boundary. The closed body is the
/// intersection of an epigraph and a hypograph, hence convex.
fn lipschitz_graph(
    lipschitz: f64,
    profile: LipschitzProfile,
    radius: f64,
    resolution: usize,
    rng: &mut ChaCha8Rng,
    provenance: Provenance,
) -> Result<ConvexMesh> {
    let f = |r: f64| profile.value(lipschitz, radius, r);
    let lid = f(radius) + 0.25 * lipschitz * radius;
    let rim = profile.inverse(lipschitz, radius, lid);
    // rings of 6k points, two sheets: about 6 (rim/Δ)² points
    let target_points = (resolution / 2 + 2) as f64;
    let spacing = rim * (6.0 / target_points).sqrt();
    let rings = ((rim / spacing).ceil() as usize).max(2);
    let spacing = rim / rings as f64;

    let mut pts = Vec::new();
    let mut lower = Vec::new();
    for sheet in 0..2 {
        for k in 0..=rings {
            if sheet == 1 && k == rings {
                continue; // rim ring is shared
            }
            let r = k as f64 * spacing;
            let z_graph = if k == rings { lid } else { f(r) };
            let z = if sheet == 0 { z_graph } else { 2.0 * lid - z_graph };
            let count = (6 * k).max(1);
            let offset = rng.random::<f64>() * 2.0 * PI / count as f64;
            for j in 0..count {
                let a = offset + 2.0 * PI * j as f64 / count as f64;
                pts.push(Vec3::new(r * a.cos(), r * a.sin(), z));
                lower.push(sheet == 0 && r <= radius * (1.0 + 1e-12));
            }
        }
    }
    let hull = convex_hull(&pts)?;
    let (verts, tris, origin) = hull.compact(&pts);
    let region: Vec<bool> = tris
        .iter()
        .map(|t| t.iter().all(|&i| lower[origin[i as usize] as usize]))
        .collect();
    let mut mesh = ConvexMesh::new(verts, tris, provenance)?;
    mesh.set_graph_region(region);
    Ok(mesh)
}

/// Fibonacci lattice of `n` nearly uniform points on the unit sphere.
pub(crate) fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let a = golden * i as f64;
            Vec3::new(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

/// Uniform random point on the unit sphere.
pub fn uniform_on_sphere(rng: &mut impl Rng) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let a: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(r * a.cos(), r * a.sin(), z)
}

/// Uniform random rotation (Shoemake's subgroup algorithm).
fn random_rotation(rng: &mut impl Rng) -> UnitQuaternion<f64> {
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let q = Quaternion::new(
        b * (2.0 * PI * u3).cos(),
        a * (2.0 * PI * u2).sin(),
        a * (2.0 * PI * u2).cos(),
        b * (2.0 * PI * u3).sin(),
    );
    UnitQuaternion::from_quaternion(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{total_defect, validate_convex};

    #[test]
    fn unit_sphere_320_gauss_bonnet() {
        let fam = SurfaceFamily { kind: SurfaceKind::Ellipsoid { a: 1.0, b: 1.0, c: 1.0 }, resolution: 320, seed: 7 };
        let m = generate_surface(&fam).unwrap();
        assert_eq!(m.num_faces(), 320);
        assert!((total_defect(&m) - 4.0 * PI).abs() < 1e-9);
        assert!(validate_convex(&m, 1e-9, 1e-9).passed);
    }

    #[test]
    fn random_hull_is_deterministic() {
        let fam = SurfaceFamily {
            kind: SurfaceKind::RandomHull { points: 100, radial: RadialLaw::UniformSphere },
            resolution: 196,
            seed: 7,
        };
        let a = generate_surface(&fam).unwrap();
        let b = generate_surface(&fam).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.triangles(), b.triangles());
        assert_eq!(a.content_hash(), b.content_hash());
        let other = generate_surface(&SurfaceFamily { seed: 8, ..fam }).unwrap();
        assert_ne!(a.content_hash(), other.content_hash());
    }

    #[test]
    fn lipschitz_graph_slopes() {
        let fam = SurfaceFamily {
            kind: SurfaceKind::LipschitzGraph {
                lipschitz: 1.0,
                profile: LipschitzProfile::SmoothCone { softening: 0.3 },
                radius: 1.0,
            },
            resolution: 3000,
            seed: 3,
        };
        let m = generate_surface(&fam).unwrap();
        let report = validate_convex(&m, 1e-9, 1e-9);
        assert!(report.passed, "{:?}", report.violations);
        let region = m.graph_region().unwrap();
        let count = region.iter().filter(|&&r| r).count();
        assert!(count > 100);
        for (f, &r) in region.iter().enumerate() {
            if r {
                let n = m.face_normal(f as u32);
                assert!(n.z < 0.0, "graph faces face downwards");
                let slope = (n.x * n.x + n.y * n.y).sqrt() / n.z.abs();
                assert!(slope <= 1.0 + 1e-9, "face {f} slope {slope}");
            }
        }
    }

    #[test]
    fn bad_parameters() {
        let fam = SurfaceFamily { kind: SurfaceKind::Ellipsoid { a: 1.0, b: 0.0, c: 1.0 }, resolution: 100, seed: 0 };
        assert!(generate_surface(&fam).is_err());
        let fam = SurfaceFamily { kind: SurfaceKind::Cube, resolution: 3, seed: 0 };
        assert!(generate_surface(&fam).is_err());
    }
}
