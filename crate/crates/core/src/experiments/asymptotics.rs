use std::f64::consts::PI;

use rayon::prelude::*;

use super::report::{fmt_list, strictly_decreasing, ExperimentReport, Table, Verdict, VerdictLine};
use super::{is_centered_disk, transition_layers, Check, ExperimentPlan, Tolerances};
use crate::analysis::{count_nodal_domains, hole_adjacency_check, nodal_bound_check, nodal_report};
use crate::discretize::{element_gradients, FemOperators, Field};
use crate::eigensolve::{solve_steklov, solve_steklov_dirichlet, SpectralResult};
use crate::geometry::{build_polar_mesh, DomainSpec, Mesh, PointLocator};
use crate::shells::{sigma1_shell, sigma2_shell, ShellSpec};
use crate::{Error, Result};

/// Clusters examined by the nodal bound.
const NODAL_BOUND_CLUSTERS: usize = 4;

/// Solver output and reference values for one hole radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusRow {
    pub r: f64,
    pub sigma1: f64,
    pub sigma2_cluster: Vec<f64>,
    /// Shell values at `(r, R_M)`, `(r, R_m)` and `(r, R_P)`.
    pub shell_sigma1_measure: f64,
    pub shell_sigma2_measure: f64,
    pub shell_sigma1_min: f64,
    pub shell_sigma2_min: f64,
    pub shell_sigma2_perimeter: f64,
    /// `‖u₁ − c_{Ω₀}‖_{H¹(Ω₀)}` with `u₁` extended by zero into the hole.
    pub h1_error_u1: f64,
    /// `‖u₂ − ū‖_{H¹(Ω₀)}` after aligning `u₂` inside its cluster.
    pub h1_error_u2: f64,
    pub nodal_u1: usize,
    pub nodal_sigma2: Vec<usize>,
    pub hole_adjacency: Verdict,
    pub nodal_bound: Verdict,
}

impl RadiusRow {
    pub fn sigma2(&self) -> f64 {
        self.sigma2_cluster[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub domain: DomainSpec,
    pub area: f64,
    pub perimeter: f64,
    pub radius_measure: f64,
    pub radius_perimeter: f64,
    pub radius_min: f64,
    /// `σ̄₁(Ω₀)` from the pure Steklov solve, and its multiplicity.
    pub steklov_sigma1: f64,
    pub steklov_multiplicity: usize,
    /// Nodal counts of the `σ̄₁(Ω₀)` eigenfields.
    pub steklov_nodal: Vec<usize>,
    /// `1/√P(Ω₀)`.
    pub c_omega0: f64,
    pub rows: Vec<RadiusRow>,
    pub slack: f64,
    pub verdicts: Vec<VerdictLine>,
}

impl AsymptoticsReport {
    fn inequality(&self, lhs: f64, rhs: f64) -> Verdict {
        if is_centered_disk(&self.domain) {
            Verdict::NotApplicable
        } else {
            Verdict::from_bool(lhs <= rhs * (1.0 + self.slack))
        }
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&[
            "r",
            "sigma1",
            "sigma2",
            "sigma2_cluster_size",
            "sigma2_cluster_max",
            "steklov_sigma1",
            "sigma2_gap",
            "shell_sigma1_RM",
            "shell_sigma2_RM",
            "shell_sigma1_Rm",
            "shell_sigma2_Rm",
            "shell_sigma2_RP",
            "c_omega0",
            "h1_error_u1",
            "h1_error_u2",
            "nodal_u1",
            "nodal_sigma2_max",
            "hole_adjacency",
            "nodal_bound",
            "ineq_sigma1_RM",
            "ineq_sigma2_RM",
            "ineq_sigma2_RP",
        ]);
        for row in &self.rows {
            let max2 = row.sigma2_cluster.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            t.push(vec![
                row.r.into(),
                row.sigma1.into(),
                row.sigma2().into(),
                row.sigma2_cluster.len().into(),
                max2.into(),
                self.steklov_sigma1.into(),
                (row.sigma2() - self.steklov_sigma1).abs().into(),
                row.shell_sigma1_measure.into(),
                row.shell_sigma2_measure.into(),
                row.shell_sigma1_min.into(),
                row.shell_sigma2_min.into(),
                row.shell_sigma2_perimeter.into(),
                self.c_omega0.into(),
                row.h1_error_u1.into(),
                row.h1_error_u2.into(),
                row.nodal_u1.into(),
                row.nodal_sigma2.iter().copied().max().unwrap_or(0).into(),
                row.hole_adjacency.into(),
                row.nodal_bound.into(),
                self.inequality(row.sigma1, row.shell_sigma1_measure).into(),
                self.inequality(row.sigma2(), row.shell_sigma2_measure).into(),
                self.inequality(row.sigma2(), row.shell_sigma2_perimeter).into(),
            ]);
        }
        t
    }

    pub fn to_experiment_report(&self) -> ExperimentReport {
        ExperimentReport { name: "asymptotics".into(), table: self.to_table(), verdicts: self.verdicts.clone() }
    }

    pub fn all_pass(&self) -> bool {
        !self.verdicts.iter().any(|v| v.verdict.is_fail())
    }

    pub fn verdict(&self, criterion: &str) -> Option<Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion).map(|v| v.verdict)
    }
}

/// Shrinking-hole sweep restricted to its own verdicts.
pub fn run_shrinking_hole(plan: &ExperimentPlan) -> Result<AsymptoticsReport> {
    let mut p = plan.clone();
    p.checks = [Check::ShrinkingHole].into_iter().collect();
    run_asymptotics(&p)
}

/// Isoperimetric comparison (measure and perimeter) over the schedule.
pub fn run_isoperimetric_check(plan: &ExperimentPlan) -> Result<AsymptoticsReport> {
    let mut p = plan.clone();
    p.checks = [Check::IsoperimetricM, Check::IsoperimetricP].into_iter().collect();
    run_asymptotics(&p)
}

/// Solves Ω₀ once and every `Ω_r` of the schedule in parallel, then attaches the
/// verdicts of the schedule-based checks present in the plan.
pub fn run_asymptotics(plan: &ExperimentPlan) -> Result<AsymptoticsReport> {
    plan.validate()?;
    if plan.radius_schedule.is_empty() {
        return Err(Error::InvalidPlan("radius schedule is empty".into()));
    }
    let domain = plan.outer_domain();
    let res = plan.resolution;
    for &r in &plan.radius_schedule {
        let layers = transition_layers(&domain, r, &res);
        if layers < 2 {
            return Err(Error::ScheduleTooCoarse { radius: r, layers });
        }
    }
    let area = domain.outer_area();
    let perimeter = domain.outer_perimeter();
    let (radius_measure, radius_perimeter) = domain.equivalent_radii();
    let radius_min = domain.min_boundary_radius();
    let tol = plan.tolerances;

    let mesh0 = build_polar_mesh(&domain, res.n_rays, res.n_radial, res.grading)?;
    let steklov = solve_steklov(&mesh0, plan.eigen_count.min(4))?;
    let ubar = &steklov.eigenfields[0];
    let steklov_members = steklov.clusters.first().cloned().unwrap_or_default();
    let steklov_nodal = steklov_members
        .iter()
        .map(|&k| count_nodal_domains(&mesh0, &steklov.eigenfields[k], tol.nodal_zero).map(|e| e.nodal_count))
        .collect::<Result<Vec<_>>>()?;
    let hole_probe = HoleProbe::new(&mesh0, ubar)?;
    let locator = PointLocator::new(&mesh0);
    let c_omega0 = 1.0 / perimeter.sqrt();

    let rows = plan
        .radius_schedule
        .par_iter()
        .map(|&r| {
            let refs = References {
                measure: radius_measure,
                perimeter: radius_perimeter,
                min: radius_min,
            };
            solve_radius(&domain, r, plan, &refs, c_omega0, ubar, &locator, &hole_probe)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = AsymptoticsReport {
        domain,
        area,
        perimeter,
        radius_measure,
        radius_perimeter,
        radius_min,
        steklov_sigma1: steklov.eigenvalues[0],
        steklov_multiplicity: steklov_members.len(),
        steklov_nodal,
        c_omega0,
        rows,
        slack: tol.inequality_slack,
        verdicts: Vec::new(),
    };
    let mut verdicts = Vec::new();
    if plan.checks.contains(&Check::ShrinkingHole) {
        verdicts.extend(shrinking_verdicts(&report, &tol));
    }
    if plan.checks.contains(&Check::IsoperimetricM) {
        verdicts.extend(isoperimetric_verdicts(&report, &tol, true));
    }
    if plan.checks.contains(&Check::IsoperimetricP) {
        verdicts.extend(isoperimetric_verdicts(&report, &tol, false));
    }
    if plan.checks.contains(&Check::Nodal) {
        verdicts.extend(nodal_verdicts(&report));
    }
    report.verdicts = verdicts;
    Ok(report)
}

struct References {
    measure: f64,
    perimeter: f64,
    min: f64,
}

/// Value and gradient of `ū` at the origin, used for `‖ū‖²_{H¹(B_r)} ≈ πr²(|∇ū(0)|² + ū(0)²)`.
struct HoleProbe {
    value: f64,
    gradient_sq: f64,
}

impl HoleProbe {
    fn new(mesh0: &Mesh, ubar: &Field) -> Result<Self> {
        let center = mesh0
            .vertices()
            .iter()
            .position(|p| p[0] == 0.0 && p[1] == 0.0)
            .ok_or_else(|| Error::InvalidPlan("mesh of the outer domain has no central vertex".into()))?;
        let mut grad = [0.0; 2];
        let mut count = 0.0;
        for (t, tri) in mesh0.triangles().iter().enumerate() {
            if !tri.contains(&center) {
                continue;
            }
            let (g, _) = element_gradients(mesh0, t)?;
            for (i, &v) in tri.iter().enumerate() {
                grad[0] += g[i][0] * ubar.values[v];
                grad[1] += g[i][1] * ubar.values[v];
            }
            count += 1.0;
        }
        let (gx, gy) = (grad[0] / count, grad[1] / count);
        Ok(Self { value: ubar.values[center], gradient_sq: gx * gx + gy * gy })
    }

    fn h1_sq(&self, r: f64) -> f64 {
        PI * r * r * (self.gradient_sq + self.value * self.value)
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_radius(
    domain: &DomainSpec,
    r: f64,
    plan: &ExperimentPlan,
    refs: &References,
    c_omega0: f64,
    ubar: &Field,
    locator: &PointLocator,
    hole: &HoleProbe,
) -> Result<RadiusRow> {
    let res = plan.resolution;
    let tol = plan.tolerances;
    let mesh = build_polar_mesh(&domain.with_hole(r)?, res.n_rays, res.n_radial, res.grading)?;
    let spectral = solve_steklov_dirichlet(&mesh, plan.eigen_count)?;
    let ops = FemOperators::new(&mesh)?;
    let hole_area = PI * r * r;

    let u1 = &spectral.eigenfields[0];
    let h1_error_u1 = ops.h1_distance_to_constant(u1, c_omega0, hole_area).max(0.0).sqrt();

    let second = spectral
        .clusters
        .get(1)
        .cloned()
        .ok_or_else(|| Error::InvalidPlan(format!("radius {r}: fewer than two clusters computed")))?;
    let ubar_on_mesh = Field::new(
        mesh.vertices()
            .iter()
            .map(|&p| locator.interpolate(&ubar.values, p).unwrap_or(0.0))
            .collect(),
    );
    let u2 = align_in_cluster(&spectral, &second, &ubar_on_mesh, &ops);
    let diff = u2.sub(&ubar_on_mesh);
    let h1_error_u2 = (ops.energy(&diff) + ops.l2_sq(&diff) + hole.h1_sq(r)).max(0.0).sqrt();

    let nodal = nodal_report(&mesh, &spectral, tol.nodal_zero)?;
    let nodal_sigma2: Vec<usize> = second.iter().map(|&k| nodal.entries[k].nodal_count).collect();
    let adjacency: Vec<bool> = second
        .iter()
        .map(|&k| hole_adjacency_check(&nodal.entries[k]).unwrap_or(false))
        .collect();
    let bounds = nodal_bound_check(&spectral, &nodal);
    let bound_ok = bounds.iter().take(NODAL_BOUND_CLUSTERS).all(|b| b.pass);

    let shell = |outer: f64| ShellSpec::new(2, r, outer);
    Ok(RadiusRow {
        r,
        sigma1: spectral.eigenvalues[0],
        sigma2_cluster: second.iter().map(|&k| spectral.eigenvalues[k]).collect(),
        shell_sigma1_measure: sigma1_shell(&shell(refs.measure)?)?,
        shell_sigma2_measure: sigma2_shell(&shell(refs.measure)?),
        shell_sigma1_min: sigma1_shell(&shell(refs.min)?)?,
        shell_sigma2_min: sigma2_shell(&shell(refs.min)?),
        shell_sigma2_perimeter: sigma2_shell(&shell(refs.perimeter)?),
        h1_error_u1,
        h1_error_u2,
        nodal_u1: nodal.entries[0].nodal_count,
        nodal_sigma2,
        hole_adjacency: Verdict::from_bool(adjacency.iter().all(|&a| a)),
        nodal_bound: Verdict::from_bool(bound_ok),
    })
}

/// Unit-norm element of the cluster span closest to `target` in the outer-boundary
/// inner product; a simple cluster reduces to a sign flip.
fn align_in_cluster(spectral: &SpectralResult, cluster: &[usize], target: &Field, ops: &FemOperators) -> Field {
    let coeffs: Vec<f64> = cluster
        .iter()
        .map(|&k| ops.outer_product(&spectral.eigenfields[k], target))
        .collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return spectral.eigenfields[cluster[0]].clone();
    }
    let mut out = Field::new(vec![0.0; target.len()]);
    for (&k, c) in cluster.iter().zip(&coeffs) {
        out.add_scaled(c / norm, &spectral.eigenfields[k]);
    }
    out
}

fn shrinking_verdicts(rep: &AsymptoticsReport, tol: &Tolerances) -> Vec<VerdictLine> {
    const CHECK: &str = "SHRINKING_HOLE";
    let mut out = Vec::new();
    let gaps: Vec<f64> = rep.rows.iter().map(|r| (r.sigma2() - rep.steklov_sigma1).abs()).collect();
    out.push(VerdictLine::new(
        CHECK,
        "sigma2_gap_decreasing",
        Verdict::from_bool(strictly_decreasing(&gaps)),
        format!("|sigma2 - steklov sigma1| = [{}]", fmt_list(&gaps)),
    ));
    let last = *gaps.last().unwrap_or(&f64::INFINITY);
    out.push(VerdictLine::new(
        CHECK,
        "sigma2_gap_final",
        Verdict::from_bool(last < tol.limit_gap * rep.steklov_sigma1),
        format!("final gap {:.6e} vs {:.6e}", last, tol.limit_gap * rep.steklov_sigma1),
    ));
    let s1: Vec<f64> = rep.rows.iter().map(|r| r.sigma1).collect();
    out.push(VerdictLine::new(
        CHECK,
        "sigma1_decreasing",
        Verdict::from_bool(strictly_decreasing(&s1) && s1.iter().all(|&s| s > 0.0)),
        format!("sigma1 = [{}]", fmt_list(&s1)),
    ));
    let worst = rep
        .rows
        .iter()
        .map(|r| r.sigma1 / r.shell_sigma1_min)
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(VerdictLine::new(
        CHECK,
        "sigma1_below_inner_shell",
        Verdict::from_bool(worst <= 1.0 + tol.domain_monotonicity),
        format!("max sigma1 / sigma1(A_(r,Rm)) = {worst:.6e}"),
    ));
    let e1: Vec<f64> = rep.rows.iter().map(|r| r.h1_error_u1).collect();
    out.push(VerdictLine::new(
        CHECK,
        "h1_error_u1_decreasing",
        Verdict::from_bool(strictly_decreasing(&e1)),
        format!("c = {:.6e}; errors = [{}]", rep.c_omega0, fmt_list(&e1)),
    ));
    let e2: Vec<f64> = rep.rows.iter().map(|r| r.h1_error_u2).collect();
    out.push(VerdictLine::new(
        CHECK,
        "h1_error_u2_decreasing",
        Verdict::from_bool(strictly_decreasing(&e2)),
        format!("errors = [{}]", fmt_list(&e2)),
    ));
    if is_centered_disk(&rep.domain) {
        let rel1 = rep.rows.iter().map(|r| (r.sigma1 / r.shell_sigma1_measure - 1.0).abs()).fold(0.0, f64::max);
        let rel2 = rep.rows.iter().map(|r| (r.sigma2() / r.shell_sigma2_measure - 1.0).abs()).fold(0.0, f64::max);
        out.push(VerdictLine::new(
            CHECK,
            "sigma1_closed_form",
            Verdict::from_bool(rel1 <= tol.eigenvalue),
            format!("max relative deviation {rel1:.6e}"),
        ));
        out.push(VerdictLine::new(
            CHECK,
            "sigma2_closed_form",
            Verdict::from_bool(rel2 <= tol.eigenvalue),
            format!("max relative deviation {rel2:.6e}"),
        ));
    }
    out
}

/// Largest scheduled radius below which every row passes `ok`.
fn observed_threshold(rep: &AsymptoticsReport, ok: impl Fn(&RadiusRow) -> bool) -> Option<f64> {
    let mut threshold = None;
    for row in rep.rows.iter().rev() {
        if !ok(row) {
            break;
        }
        threshold = Some(row.r);
    }
    threshold
}

fn threshold_text(t: Option<f64>) -> String {
    match t {
        Some(r) => format!("holds for all scheduled r <= {r}"),
        None => "fails at the smallest scheduled radius".into(),
    }
}

fn isoperimetric_verdicts(rep: &AsymptoticsReport, tol: &Tolerances, measure: bool) -> Vec<VerdictLine> {
    let check = if measure { "ISOPERIMETRIC_M" } else { "ISOPERIMETRIC_P" };
    let slack = 1.0 + tol.inequality_slack;
    let sigma_bar = rep.steklov_sigma1;
    let mut out = Vec::new();
    if is_centered_disk(&rep.domain) {
        let eq = |a: f64, b: f64| (a / b - 1.0).abs();
        let dev: Vec<f64> = if measure {
            rep.rows
                .iter()
                .flat_map(|r| [eq(r.sigma1, r.shell_sigma1_measure), eq(r.sigma2(), r.shell_sigma2_measure)])
                .chain([eq(sigma_bar, 1.0 / rep.radius_measure)])
                .collect()
        } else {
            rep.rows
                .iter()
                .map(|r| eq(r.sigma2(), r.shell_sigma2_perimeter))
                .chain([eq(sigma_bar * rep.perimeter, 2.0 * PI)])
                .collect()
        };
        let worst = dev.iter().copied().fold(0.0, f64::max);
        out.push(VerdictLine::new(
            check,
            "disk_equality",
            Verdict::from_bool(worst <= tol.eigenvalue),
            format!("max relative deviation from equality {worst:.6e}"),
        ));
        return out;
    }
    if measure {
        let ok1 = |r: &RadiusRow| r.sigma1 <= r.shell_sigma1_measure * slack;
        let ok2 = |r: &RadiusRow| r.sigma2() <= r.shell_sigma2_measure * slack;
        out.push(VerdictLine::new(
            check,
            "sigma1_vs_measure_shell",
            Verdict::from_bool(rep.rows.iter().all(ok1)),
            threshold_text(observed_threshold(rep, ok1)),
        ));
        out.push(VerdictLine::new(
            check,
            "sigma2_vs_measure_shell",
            Verdict::from_bool(rep.rows.iter().all(ok2)),
            threshold_text(observed_threshold(rep, ok2)),
        ));
        let ball = 1.0 / rep.radius_measure;
        out.push(VerdictLine::new(
            check,
            "brock",
            Verdict::from_bool(sigma_bar <= ball * slack),
            format!("steklov sigma1 {sigma_bar:.6e} vs ball {ball:.6e}"),
        ));
    } else {
        let ok = |r: &RadiusRow| r.sigma2() <= r.shell_sigma2_perimeter * slack;
        out.push(VerdictLine::new(
            check,
            "sigma2_vs_perimeter_shell",
            Verdict::from_bool(rep.rows.iter().all(ok)),
            threshold_text(observed_threshold(rep, ok)),
        ));
        let product = sigma_bar * rep.perimeter;
        out.push(VerdictLine::new(
            check,
            "weinstock",
            Verdict::from_bool(product <= 2.0 * PI * slack),
            format!("steklov sigma1 * perimeter = {product:.6e} vs 2pi"),
        ));
    }
    out
}

fn nodal_verdicts(rep: &AsymptoticsReport) -> Vec<VerdictLine> {
    const CHECK: &str = "NODAL";
    let rows = &rep.rows;
    let list = |f: &dyn Fn(&RadiusRow) -> String| rows.iter().map(f).collect::<Vec<_>>().join(" ");
    vec![
        VerdictLine::new(
            CHECK,
            "u1_one_domain",
            Verdict::from_bool(rows.iter().all(|r| r.nodal_u1 == 1)),
            list(&|r| format!("{}", r.nodal_u1)),
        ),
        VerdictLine::new(
            CHECK,
            "sigma2_two_domains",
            Verdict::from_bool(rows.iter().all(|r| r.nodal_sigma2.iter().all(|&c| c == 2))),
            list(&|r| format!("{:?}", r.nodal_sigma2)),
        ),
        VerdictLine::new(
            CHECK,
            "hole_adjacency",
            Verdict::from_bool(rows.iter().all(|r| r.hole_adjacency == Verdict::Pass)),
            list(&|r| r.hole_adjacency.as_str().to_string()),
        ),
        VerdictLine::new(
            CHECK,
            "nodal_bound",
            Verdict::from_bool(rows.iter().all(|r| r.nodal_bound == Verdict::Pass)),
            format!("first {NODAL_BOUND_CLUSTERS} clusters"),
        ),
        VerdictLine::new(
            CHECK,
            "steklov_first_cluster_two_domains",
            Verdict::from_bool(rep.steklov_nodal.iter().all(|&c| c == 2)),
            format!("{:?}", rep.steklov_nodal),
        ),
    ]
}
