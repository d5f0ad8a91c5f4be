use geolab::curve::Polyline;
use geolab::development::{develop_about_point, develop_in_direction};
use geolab::Vec3;
use proptest::prelude::*;

fn polyline() -> impl Strategy<Value = Polyline> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64), 2..20)
        .prop_map(|v| Polyline::new(v.into_iter().map(|(x, y, z)| Vec3::new(x, y, z)).collect()))
}

fn unit() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-2)
        .prop_map(|(x, y, z)| Vec3::new(x, y, z).normalize())
}

proptest! {
    #[test]
    fn direction_development_keeps_lengths_and_heights(line in polyline(), u in unit()) {
        let d = develop_in_direction(&line, &u, 1e-9).unwrap();
        let p = d.planar();
        for (k, x) in line.points().iter().enumerate() {
            prop_assert!((p[k].y - u.dot(x)).abs() < 1e-9);
        }
        for (k, w) in p.windows(2).enumerate() {
            let seg = (line.points()[k + 1] - line.points()[k]).norm();
            prop_assert!(((w[1] - w[0]).norm() - seg).abs() < 1e-9);
            prop_assert!(w[1].x >= w[0].x);
        }
        prop_assert_eq!(d.s.as_slice(), line.arclength());
    }

    #[test]
    fn point_development_keeps_distances(line in polyline(), z in (5.0..6.0f64, -1.0..1.0f64, -1.0..1.0f64)) {
        let z = Vec3::new(z.0, z.1, z.2);
        let d = develop_about_point(&line, &z, 1e-9).unwrap();
        let p = d.planar();
        for (k, x) in line.points().iter().enumerate() {
            prop_assert!((p[k].norm() - (x - z).norm()).abs() < 1e-9);
        }
        for (k, w) in p.windows(2).enumerate() {
            let seg = (line.points()[k + 1] - line.points()[k]).norm();
            prop_assert!(((w[1] - w[0]).norm() - seg).abs() < 1e-9);
        }
    }

    #[test]
    fn development_turning_is_planar_curvature(line in polyline(), u in unit()) {
        let d = develop_in_direction(&line, &u, 1e-9).unwrap();
        let sum: f64 = d.signed_turning().iter().map(|t| t.abs()).sum();
        prop_assert!((sum - d.total_curvature()).abs() < 1e-12);
        prop_assert!(d.signed_turning().iter().all(|t| t.abs() <= std::f64::consts::PI + 1e-12));
    }
}
