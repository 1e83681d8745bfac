use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov::discretize::*;
use steklov::eigensolve::*;
use steklov::geometry::*;

fn ellipse_mesh(r: f64, rays: usize, radial: usize) -> Mesh {
    build_polar_mesh(&DomainSpec::ellipse(1.2, 5.0 / 6.0, r).unwrap(), rays, radial, 0.85).unwrap()
}

/// Separated solutions on the annulus `r < |x| < 1`: `ln(ρ/r)` and
/// `(ρ^k − r^{2k} ρ^{-k}) cos kθ`.
fn annulus_eigenvalue(r: f64, k: u32) -> f64 {
    if k == 0 {
        1.0 / (1.0 / r).ln()
    } else {
        let q = r.powi(2 * k as i32);
        k as f64 * (1.0 + q) / (1.0 - q)
    }
}

#[test]
fn annulus_matches_separated_solutions() {
    let r = 0.3;
    let mesh = build_polar_mesh(&DomainSpec::disk(1.0, r).unwrap(), 128, 32, 0.9).unwrap();
    let res = solve_steklov_dirichlet(&mesh, 5).unwrap();
    let expected = [annulus_eigenvalue(r, 0), annulus_eigenvalue(r, 1), annulus_eigenvalue(r, 1), annulus_eigenvalue(r, 2), annulus_eigenvalue(r, 2)];
    for (s, e) in res.eigenvalues.iter().zip(expected) {
        assert!((s - e).abs() / e < 0.01, "{s} vs {e}");
    }
    assert_eq!(res.multiplicities(), vec![1, 2, 2]);
}

#[test]
fn unit_disk_pattern() {
    let mesh = build_polar_mesh(&DomainSpec::disk(1.0, 0.0).unwrap(), 128, 32, 0.85).unwrap();
    let res = solve_steklov(&mesh, 4).unwrap();
    assert!(res.trivial.unwrap().abs() < 1e-9);
    for (s, e) in res.eigenvalues.iter().zip([1.0, 1.0, 2.0, 2.0]) {
        assert!((s - e).abs() / e < 0.01, "{s}");
    }
    assert_eq!(res.multiplicities(), vec![2, 2]);
}

#[test]
fn radius_two_disk_first_value() {
    let mesh = build_polar_mesh(&DomainSpec::disk(2.0, 0.0).unwrap(), 128, 32, 0.85).unwrap();
    let res = solve_steklov(&mesh, 2).unwrap();
    assert!((res.eigenvalues[0] - 0.5).abs() / 0.5 < 0.01);
}

#[test]
fn rayleigh_identity_and_orthogonality() {
    let mesh = ellipse_mesh(0.1, 64, 16);
    let ops = FemOperators::new(&mesh).unwrap();
    let res = solve_steklov_dirichlet(&mesh, 6).unwrap();
    for (i, (s, u)) in res.eigenvalues.iter().zip(&res.eigenfields).enumerate() {
        let b = ops.outer_product(u, u);
        assert!((b - 1.0).abs() < 1e-9);
        assert!((ops.energy(u) / b - s).abs() < 1e-9 * s);
        for v in &res.eigenfields[..i] {
            assert!(ops.outer_product(u, v).abs() < 1e-9);
        }
        for &w in mesh.boundary_vertices(BoundaryMarker::Inner).iter() {
            assert_eq!(u.values[w], 0.0);
        }
    }
    assert!(res.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn first_dirichlet_field_is_positive() {
    let mesh = ellipse_mesh(0.2, 64, 16);
    let res = solve_steklov_dirichlet(&mesh, 1).unwrap();
    let u = &res.eigenfields[0];
    for (v, m) in u.values.iter().zip(mesh.markers()) {
        if *m != VertexMarker::Inner {
            assert!(*v > 0.0);
        }
    }
}

#[test]
fn eigenvalues_scale_inversely() {
    let spec = DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.1).unwrap();
    let a = solve_steklov_dirichlet(&build_polar_mesh(&spec, 64, 16, 0.85).unwrap(), 4).unwrap();
    let b = solve_steklov_dirichlet(&build_polar_mesh(&spec.scaled(2.5).unwrap(), 64, 16, 0.85).unwrap(), 4).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x / 2.5 - y).abs() < 1e-9 * y);
    }
}

/// Largest root of `det(A − λB) = 0` for symmetric 2×2 `A`, `B`.
fn max_ritz_2x2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> f64 {
    let qa = b[0][0] * b[1][1] - b[0][1] * b[0][1];
    let qb = -(a[0][0] * b[1][1] + a[1][1] * b[0][0] - 2.0 * a[0][1] * b[0][1]);
    let qc = a[0][0] * a[1][1] - a[0][1] * a[0][1];
    (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa)
}

#[test]
fn random_subspaces_bound_from_above() {
    let mesh = ellipse_mesh(0.1, 64, 16);
    let ops = FemOperators::new(&mesh).unwrap();
    let res = solve_steklov_dirichlet(&mesh, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inner = mesh.boundary_vertices(BoundaryMarker::Inner);
    let random_field = |rng: &mut ChaCha8Rng| {
        let mut f = Field::new((0..mesh.n_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        for &v in &inner {
            f.values[v] = 0.0;
        }
        f
    };
    for _ in 0..50 {
        let f = random_field(&mut rng);
        let g = random_field(&mut rng);
        assert!(ops.energy(&f) / ops.outer_product(&f, &f) >= res.eigenvalues[0]);
        let a = [
            [ops.energy(&f), ops.stiffness.bilinear_form(&f.values, &g.values)],
            [ops.stiffness.bilinear_form(&f.values, &g.values), ops.energy(&g)],
        ];
        let b = [[ops.outer_product(&f, &f), ops.outer_product(&f, &g)], [ops.outer_product(&f, &g), ops.outer_product(&g, &g)]];
        assert!(max_ritz_2x2(a, b) >= res.eigenvalues[1] * (1.0 - 1e-12));
    }
}

#[test]
fn dirichlet_mode_needs_a_hole() {
    assert!(solve_steklov_dirichlet(&ellipse_mesh(0.0, 16, 4), 2).is_err());
}

#[test]
fn friedrich_constant_on_unit_disk() {
    let mesh = build_polar_mesh(&DomainSpec::disk(1.0, 0.0).unwrap(), 64, 16, 0.85).unwrap();
    let c2 = friedrich_constant(&mesh).unwrap();
    // constant fields give ‖1‖² / ‖1‖²_{∂} = π / 2π
    assert!(c2 >= 0.5 * (1.0 - 1e-3), "{c2}");
}

#[test]
fn friedrich_bounds_random_fields() {
    let mesh = ellipse_mesh(0.2, 64, 16);
    let c2 = friedrich_constant(&mesh).unwrap();
    let ops = FemOperators::new(&mesh).unwrap();
    let full = assemble_full_boundary_mass(&mesh);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let f = Field::new((0..mesh.n_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let rhs = ops.energy(&f) + full.quadratic_form(&f.values);
        assert!(ops.l2_sq(&f) <= c2 * rhs * (1.0 + 1e-9));
    }
}

#[test]
fn friedrich_constant_is_stable_under_refinement() {
    let coarse = friedrich_constant(&ellipse_mesh(0.2, 64, 16)).unwrap();
    let fine = friedrich_constant(&ellipse_mesh(0.2, 128, 32)).unwrap();
    assert!((coarse - fine).abs() / fine <= 0.02, "{coarse} {fine}");
}

#[test]
fn repeated_solves_are_bitwise_identical() {
    let mesh = ellipse_mesh(0.05, 64, 16);
    let a = solve_steklov_dirichlet(&mesh, 4).unwrap();
    let b = solve_steklov_dirichlet(&mesh, 4).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.eigenfields, b.eigenfields);
}
