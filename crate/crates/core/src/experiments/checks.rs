use std::f64::consts::PI;

use rayon::prelude::*;

use super::report::{fmt_list, strictly_decreasing, Cell, ExperimentReport, Table, Verdict, VerdictLine};
use super::{Resolution, Tolerances};
use crate::discretize::{assemble_domain_mass, assemble_full_boundary_mass, assemble_stiffness, Field};
use crate::eigensolve::{friedrich_constant, solve_steklov_dirichlet};
use crate::geometry::{build_polar_mesh, DomainSpec, Mesh};
use crate::quadrature::periodic_trapezoid;
use crate::shells::{
    corrector_norms, radial_profile_1, sigma1_shell, sigma2_shell, unit_sphere_area, CorrectorSpec, ShellSpec,
};
use crate::{Error, Result};

/// Boundary samples of the arc-length quadrature.
const ARC_SAMPLES: usize = 8192;
/// Gauss points of the corrector quadrature.
const CORRECTOR_POINTS: usize = 256;
/// Absolute agreement of the corrector gradient norm with its closed form.
const CORRECTOR_TOL: f64 = 1e-10;

/// Annulus solves over a resolution ladder against the closed-form `σ₁` and `σ₂`.
pub fn run_shell_validation(resolutions: &[Resolution], shell: &ShellSpec, tol: &Tolerances) -> Result<ExperimentReport> {
    const CHECK: &str = "SHELL_VALIDATION";
    if shell.n != 2 {
        return Err(Error::InvalidSpec(format!("finite elements cover n = 2 only, got n = {}", shell.n)));
    }
    if resolutions.is_empty() {
        return Err(Error::InvalidPlan("empty resolution ladder".into()));
    }
    let exact1 = sigma1_shell(shell)?;
    let exact2 = sigma2_shell(shell);
    let domain = DomainSpec::disk(shell.outer, shell.r)?;
    let solves = resolutions
        .par_iter()
        .map(|res| {
            let mesh = build_polar_mesh(&domain, res.n_rays, res.n_radial, res.grading)?;
            solve_steklov_dirichlet(&mesh, 4)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "n_rays",
        "n_radial",
        "grading",
        "sigma1",
        "sigma1_exact",
        "sigma1_rel_error",
        "sigma1_error_ratio",
        "sigma2_cluster_size",
        "sigma2_mean",
        "sigma2_exact",
        "sigma2_rel_error",
    ]);
    let mut err1 = Vec::new();
    let mut err2 = Vec::new();
    let mut sizes = Vec::new();
    for (res, s) in resolutions.iter().zip(&solves) {
        let e1 = (s.eigenvalues[0] / exact1 - 1.0).abs();
        let cluster = s.clusters.get(1).cloned().unwrap_or_default();
        let mean2 = cluster.iter().map(|&k| s.eigenvalues[k]).sum::<f64>() / cluster.len().max(1) as f64;
        let e2 = (mean2 / exact2 - 1.0).abs();
        let ratio = err1.last().map(|prev: &f64| Cell::Num(prev / e1)).unwrap_or(Cell::Text(String::new()));
        table.push(vec![
            res.n_rays.into(),
            res.n_radial.into(),
            res.grading.into(),
            s.eigenvalues[0].into(),
            exact1.into(),
            e1.into(),
            ratio,
            cluster.len().into(),
            mean2.into(),
            exact2.into(),
            e2.into(),
        ]);
        err1.push(e1);
        err2.push(e2);
        sizes.push(cluster.len());
    }
    let ratios: Vec<f64> = err1.windows(2).map(|w| w[0] / w[1]).collect();
    let finest1 = *err1.last().unwrap_or(&f64::INFINITY);
    let finest2 = *err2.last().unwrap_or(&f64::INFINITY);
    let verdicts = vec![
        VerdictLine::new(
            CHECK,
            "sigma1_accuracy",
            Verdict::from_bool(finest1 <= tol.eigenvalue),
            format!("finest relative error {finest1:.6e}"),
        ),
        VerdictLine::new(
            CHECK,
            "sigma1_convergence",
            if ratios.is_empty() {
                Verdict::NotApplicable
            } else {
                Verdict::from_bool(ratios.iter().all(|&q| q >= tol.convergence_ratio))
            },
            format!("error ratios [{}]", fmt_list(&ratios)),
        ),
        VerdictLine::new(
            CHECK,
            "sigma2_multiplicity",
            Verdict::from_bool(sizes.iter().all(|&m| m == shell.n as usize)),
            format!("cluster sizes {sizes:?}"),
        ),
        VerdictLine::new(
            CHECK,
            "sigma2_accuracy",
            Verdict::from_bool(finest2 <= tol.eigenvalue),
            format!("finest relative error {finest2:.6e}"),
        ),
    ];
    Ok(ExperimentReport { name: "shell_validation".into(), table, verdicts })
}

/// Normalized-profile boundary integral with the enclosing radius `1.5·max ρ`.
pub fn run_lemma33_check(domain: &DomainSpec, radii: &[f64]) -> Result<ExperimentReport> {
    run_lemma33_check_enclosed(domain, radii, 1.5 * domain.max_boundary_radius())
}

/// `∫_{∂Ω₀} v_r² dH¹` for the first shell eigenfunction `v_r` normalized to unit
/// `L²` norm on the circle of radius `R_M`, compared with its limit `P(Ω₀)/(2πR_M)`.
pub fn run_lemma33_check_enclosed(domain: &DomainSpec, radii: &[f64], enclosing: f64) -> Result<ExperimentReport> {
    const CHECK: &str = "LEMMA33";
    let max_radius = domain.max_boundary_radius();
    if !(enclosing > max_radius) {
        return Err(Error::InvalidEnclosure { enclosing, max_radius });
    }
    let r_min = domain.min_boundary_radius();
    let (radius_measure, _) = domain.equivalent_radii();
    let perimeter = domain.outer_perimeter();
    let target = perimeter / (2.0 * PI * radius_measure);
    let mut table = Table::new(&["r", "boundary_integral", "limit", "abs_error"]);
    let mut errors = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0 && r < r_min) {
            return Err(Error::OutOfRange { value: r, lower: 0.0, upper: r_min });
        }
        let scale = radial_profile_1(2, r, radius_measure) * (2.0 * PI * radius_measure).sqrt();
        let value = periodic_trapezoid(ARC_SAMPLES, |t| {
            let rho = domain.radius(t);
            let v = radial_profile_1(2, r, rho) / scale;
            v * v * rho.hypot(domain.radius_derivative(t))
        });
        let err = (value - target).abs();
        table.push(vec![r.into(), value.into(), target.into(), err.into()]);
        errors.push(err);
    }
    let exact = errors.iter().all(|&e| e <= 1e-12 * target);
    let verdicts = vec![
        VerdictLine::new(
            CHECK,
            "error_decreasing",
            if exact {
                Verdict::NotApplicable
            } else {
                Verdict::from_bool(strictly_decreasing(&errors))
            },
            if exact {
                "integral equals its limit at every radius".to_string()
            } else {
                format!("errors [{}]", fmt_list(&errors))
            },
        ),
        VerdictLine::new(
            CHECK,
            "approaches_limit",
            Verdict::from_bool(exact || errors.last() < errors.first()),
            format!("P/(2 pi R_M) = {target:.10e}, enclosing radius {enclosing:.6e}"),
        ),
    ];
    Ok(ExperimentReport { name: "lemma33".into(), table, verdicts })
}

/// Closed-form `‖∇ω^ε‖²`: `2π/ln(ε/r_ε)` in the plane, `|S^{n-1}|(n−2)/(r_ε^{2−n} − ε^{2−n})` above.
fn corrector_gradient_reference(c: &CorrectorSpec) -> f64 {
    let r = c.hole_radius();
    if c.n == 2 {
        2.0 * PI / (c.eps / r).ln()
    } else {
        let m = (c.n - 2) as i32;
        unit_sphere_area(c.n) * m as f64 / (r.powi(-m) - c.eps.powi(-m))
    }
}

/// Corrector norms along a schedule of decreasing `ε` in one dimension.
pub fn run_corrector_check(schedule: &[CorrectorSpec], domain_area: f64) -> Result<ExperimentReport> {
    const CHECK: &str = "CORRECTOR";
    let specs = schedule
        .iter()
        .map(|c| CorrectorSpec::new(c.n, c.eps, c.rate))
        .collect::<Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(Error::InvalidPlan("empty corrector schedule".into()));
    }
    if specs.iter().any(|c| c.n != specs[0].n) {
        return Err(Error::InvalidPlan("corrector schedule mixes dimensions".into()));
    }
    if specs.windows(2).any(|w| w[1].eps >= w[0].eps) {
        return Err(Error::InvalidPlan("corrector eps schedule is not strictly decreasing".into()));
    }
    let mut table = Table::new(&[
        "n",
        "eps",
        "rate",
        "hole_radius",
        "l2_sq",
        "area_gap",
        "grad_l2_sq",
        "grad_reference",
    ]);
    let mut gaps = Vec::new();
    let mut grads = Vec::new();
    let mut deviation: f64 = 0.0;
    for c in &specs {
        let norms = corrector_norms(c, domain_area, CORRECTOR_POINTS)?;
        let reference = corrector_gradient_reference(c);
        deviation = deviation.max((norms.grad_l2_sq - reference).abs());
        let gap = domain_area - norms.l2_sq;
        table.push(vec![
            (c.n as usize).into(),
            c.eps.into(),
            c.rate.into(),
            c.hole_radius().into(),
            norms.l2_sq.into(),
            gap.into(),
            norms.grad_l2_sq.into(),
            reference.into(),
        ]);
        gaps.push(gap.abs());
        grads.push(norms.grad_l2_sq);
    }
    let tail = |v: &[f64]| strictly_decreasing(&v[1.min(v.len())..]) && v.last() <= v.first();
    let verdicts = vec![
        VerdictLine::new(
            CHECK,
            "l2_to_area",
            Verdict::from_bool(tail(&gaps)),
            format!("|area - l2_sq| = [{}]", fmt_list(&gaps)),
        ),
        VerdictLine::new(
            CHECK,
            "gradient_to_zero",
            Verdict::from_bool(tail(&grads)),
            format!("grad_l2_sq = [{}]", fmt_list(&grads)),
        ),
        VerdictLine::new(
            CHECK,
            "gradient_closed_form",
            Verdict::from_bool(deviation <= CORRECTOR_TOL),
            format!("max deviation {deviation:.3e}"),
        ),
    ];
    Ok(ExperimentReport { name: "corrector".into(), table, verdicts })
}

/// Deterministic smooth fields used to probe the Friedrich inequality.
pub fn friedrich_probe_fields(mesh: &Mesh) -> Vec<Field> {
    let mut out = vec![
        Field::constant(mesh, 1.0),
        Field::from_fn(mesh, |[x, _]| x),
        Field::from_fn(mesh, |[_, y]| y),
        Field::from_fn(mesh, |[x, y]| x * x - y * y),
        Field::from_fn(mesh, |[x, y]| x.hypot(y)),
    ];
    for k in 1..=4 {
        for l in 0..=3 {
            let (a, b) = (k as f64, l as f64 * 0.7);
            out.push(Field::from_fn(mesh, move |[x, y]| (a * x + b * y + 0.3 * a).cos()));
        }
    }
    out
}

/// Best Friedrich constant at the plan resolution and one step coarser, probed on
/// [`friedrich_probe_fields`].
pub fn run_friedrich_check(domain: &DomainSpec, resolution: &Resolution, tol: &Tolerances) -> Result<ExperimentReport> {
    const CHECK: &str = "FRIEDRICH";
    let coarse = resolution
        .coarsened(1)
        .ok_or_else(|| Error::InvalidPlan("resolution cannot be halved".into()))?;
    let levels = [coarse, *resolution];
    let results = levels
        .par_iter()
        .map(|res| {
            let mesh = build_polar_mesh(domain, res.n_rays, res.n_radial, res.grading)?;
            let c = friedrich_constant(&mesh)?;
            Ok((mesh, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["n_rays", "n_radial", "grading", "constant", "max_probe_ratio"]);
    let mut worst_overall: f64 = 0.0;
    for (res, (mesh, c)) in levels.iter().zip(&results) {
        let stiffness = assemble_stiffness(mesh)?;
        let mass = assemble_domain_mass(mesh);
        let boundary = assemble_full_boundary_mass(mesh);
        let worst = friedrich_probe_fields(mesh)
            .iter()
            .map(|f| {
                let lhs = mass.quadratic_form(&f.values);
                let rhs = stiffness.quadratic_form(&f.values) + boundary.quadratic_form(&f.values);
                lhs / (c * rhs)
            })
            .fold(0.0, f64::max);
        worst_overall = worst_overall.max(worst);
        table.push(vec![res.n_rays.into(), res.n_radial.into(), res.grading.into(), (*c).into(), worst.into()]);
    }
    let (c0, c1) = (results[0].1, results[1].1);
    let change = (c1 / c0 - 1.0).abs();
    let verdicts = vec![
        VerdictLine::new(
            CHECK,
            "inequality_on_probes",
            Verdict::from_bool(worst_overall <= 1.0 + 1e-9),
            format!("max ||u||^2 / (C (||grad u||^2 + ||u||^2_bd)) = {worst_overall:.12e}"),
        ),
        VerdictLine::new(
            CHECK,
            "refinement_stability",
            Verdict::from_bool(change <= tol.friedrich_stability),
            format!("constants {c0:.10e} -> {c1:.10e}, relative change {change:.3e}"),
        ),
    ];
    Ok(ExperimentReport { name: "friedrich".into(), table, verdicts })
}
