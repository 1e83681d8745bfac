use std::f64::consts::PI;

use proptest::prelude::*;
use steklov::geometry::*;

/// Composite Simpson rule over one period, independent of the library quadrature.
fn simpson_periodic(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / n as f64;
    let mut s = f(0.0) + f(2.0 * PI);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn squareish() -> DomainSpec {
    DomainSpec::new(OuterBoundary::Star { c0: 1.0, cos: vec![0.0, 0.0, 0.0, 0.12], sin: vec![] }, 0.0).unwrap()
}

#[test]
fn ellipse_with_hole_area() {
    let spec = DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.1).unwrap();
    let mesh = build_polar_mesh(&spec, 256, 64, DEFAULT_GRADING).unwrap();
    assert!((0..mesh.triangles().len()).all(|t| mesh.signed_area(t) > 0.0));
    let oracle = 0.5 * simpson_periodic(4000, |t| spec.radius(t).powi(2)) - PI * 0.01;
    assert!((oracle - (PI - 0.01 * PI)).abs() < 1e-10);
    assert!((area(&mesh) - oracle).abs() < 1e-3, "{}", area(&mesh));
}

#[test]
fn annulus_area_and_perimeters() {
    let spec = DomainSpec::disk(1.0, 0.5).unwrap();
    let mesh = build_polar_mesh(&spec, 256, 32, 0.9).unwrap();
    assert!((area(&mesh) - 0.75 * PI).abs() / (0.75 * PI) < 1e-3);
    assert!((perimeter(&mesh, BoundaryMarker::Outer) - 2.0 * PI).abs() / (2.0 * PI) < 1e-3);
    assert!((perimeter(&mesh, BoundaryMarker::Inner) - PI).abs() / PI < 1e-3);
}

#[test]
fn unperforated_mesh_has_no_inner_perimeter() {
    let mesh = build_polar_mesh(&DomainSpec::disk(1.0, 0.0).unwrap(), 32, 4, 0.9).unwrap();
    assert_eq!(perimeter(&mesh, BoundaryMarker::Inner), 0.0);
}

#[test]
fn star_shaped_area_matches_quadrature() {
    let spec = squareish();
    let mesh = build_polar_mesh(&spec, 512, 32, 0.95).unwrap();
    let oracle = 0.5 * simpson_periodic(4000, |t| spec.radius(t).powi(2));
    assert!((area(&mesh) / oracle - 1.0).abs() < 1e-4);
}

#[test]
fn ellipse_perimeter_matches_arc_length() {
    let spec = DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.0).unwrap();
    let oracle = simpson_periodic(4000, |t| {
        let (s, c) = t.sin_cos();
        (1.2 * 1.2 * s * s + (5.0 / 6.0f64).powi(2) * c * c).sqrt()
    });
    assert!((oracle - 6.4399).abs() < 1e-4, "{oracle}");
    let mesh = build_polar_mesh(&spec, 256, 16, 0.9).unwrap();
    assert!((perimeter(&mesh, BoundaryMarker::Outer) / oracle - 1.0).abs() < 1e-3);
    let (rm, rp) = spec.equivalent_radii();
    assert!((rm - 1.0).abs() < 1e-12);
    assert!((rp - oracle / (2.0 * PI)).abs() < 1e-9);
    assert!((rp - 1.02495).abs() < 1e-5);
}

#[test]
fn min_boundary_radius_examples() {
    assert_eq!(DomainSpec::disk(1.0, 0.0).unwrap().min_boundary_radius(), 1.0);
    let e = DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.0).unwrap();
    assert!((e.min_boundary_radius() - 5.0 / 6.0).abs() < 1e-10);
    let s = DomainSpec::new(OuterBoundary::Star { c0: 1.0, cos: vec![0.0, 0.0, 0.2], sin: vec![] }, 0.0).unwrap();
    assert!((s.min_boundary_radius() - 0.8).abs() < 1e-10);
}

#[test]
fn area_and_perimeter_converge_quadratically() {
    let spec = DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.0).unwrap();
    let exact_area = PI;
    let exact_perimeter = spec.outer_perimeter();
    let errs: Vec<(f64, f64)> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let mesh = build_polar_mesh(&spec, n, 4, 1.0).unwrap();
            (
                (area(&mesh) - exact_area).abs(),
                (perimeter(&mesh, BoundaryMarker::Outer) - exact_perimeter).abs(),
            )
        })
        .collect();
    for w in errs.windows(2) {
        assert!(w[0].0 / w[1].0 >= 3.0, "area ratio {}", w[0].0 / w[1].0);
        assert!(w[0].1 / w[1].1 >= 3.0, "perimeter ratio {}", w[0].1 / w[1].1);
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(DomainSpec::disk(1.0, 1.0).is_err());
    assert!(DomainSpec::disk(1.0, -0.1).is_err());
    assert!(DomainSpec::new(OuterBoundary::Star { c0: 0.1, cos: vec![0.5], sin: vec![] }, 0.0).is_err());
    let spec = DomainSpec::disk(1.0, 0.5).unwrap();
    assert!(build_polar_mesh(&spec, 7, 2, 1.0).is_err());
    assert!(build_polar_mesh(&spec, 8, 1, 1.0).is_err());
    assert!(build_polar_mesh(&spec, 8, 2, 0.0).is_err());
}

fn star_strategy() -> impl Strategy<Value = DomainSpec> {
    (0.5f64..2.0, -0.15f64..0.15, -0.15f64..0.15, -0.1f64..0.1, 0.0f64..0.6).prop_map(|(c0, a2, b2, a3, hole)| {
        let outer = OuterBoundary::Star { c0, cos: vec![0.0, a2 * c0, a3 * c0], sin: vec![0.0, b2 * c0] };
        let d = DomainSpec { outer, hole_radius: 0.0 };
        let r = hole * d.min_boundary_radius();
        DomainSpec::new(d.outer, r).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mesh_invariants_hold(spec in star_strategy(), rays in 8usize..40, radial in 2usize..8, g in 0.6f64..1.2) {
        let mesh = build_polar_mesh(&spec, rays, radial, g).unwrap();
        prop_assert_eq!(mesh.check_invariants(), Ok(()));
        let r = spec.hole_radius;
        for (p, m) in mesh.vertices().iter().zip(mesh.markers()) {
            let s = p[0].hypot(p[1]);
            match m {
                VertexMarker::Inner => prop_assert!((s - r).abs() <= 1e-12 * r),
                VertexMarker::Outer => {
                    let rho = spec.radius(p[1].atan2(p[0]));
                    prop_assert!((s - rho).abs() <= 1e-12 * rho);
                }
                VertexMarker::Interior => {}
            }
        }
        let inner = mesh.edges_with(BoundaryMarker::Inner).count();
        prop_assert_eq!(inner, if r > 0.0 { rays } else { 0 });
    }

    #[test]
    fn measure_radius_never_exceeds_perimeter_radius(spec in star_strategy()) {
        let (rm, rp) = spec.equivalent_radii();
        prop_assert!(rm <= rp * (1.0 + 1e-9));
    }

    #[test]
    fn scaling_scales_geometry(spec in star_strategy(), t in 0.3f64..3.0) {
        let scaled = spec.scaled(t).unwrap();
        prop_assert!((scaled.outer_area() / (t * t * spec.outer_area()) - 1.0).abs() < 1e-9);
        prop_assert!((scaled.outer_perimeter() / (t * spec.outer_perimeter()) - 1.0).abs() < 1e-9);
        prop_assert!((scaled.min_boundary_radius() / (t * spec.min_boundary_radius()) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn disk_equivalent_radii_are_equal() {
    let (rm, rp) = DomainSpec::disk(1.7, 0.0).unwrap().equivalent_radii();
    assert!((rm - 1.7).abs() < 1e-14 && (rp - 1.7).abs() < 1e-14);
    assert!((measure_equivalent_radius(4.0 * PI / 3.0, 3) - 1.0).abs() < 1e-14);
}
