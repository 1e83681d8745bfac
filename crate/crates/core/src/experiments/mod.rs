//! Experiment drivers: radius and resolution sweeps that turn solver output into
//! tables and pass/fail verdicts.

mod asymptotics;
mod checks;
mod report;
pub mod svg;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::{DomainSpec, OuterBoundary, DEFAULT_GRADING};
use crate::shells::{CorrectorSpec, ShellSpec};
use crate::{Error, Result};

pub use asymptotics::{run_asymptotics, run_isoperimetric_check, run_shrinking_hole, AsymptoticsReport, RadiusRow};
pub use checks::{
    friedrich_probe_fields, run_corrector_check, run_friedrich_check, run_lemma33_check,
    run_lemma33_check_enclosed, run_shell_validation,
};
pub use report::{
    strictly_decreasing, strictly_increasing, summary_json, Cell, ExperimentReport, Table, Verdict, VerdictLine,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Check {
    ShellValidation,
    ShrinkingHole,
    IsoperimetricM,
    IsoperimetricP,
    Corrector,
    Lemma33,
    Friedrich,
    Nodal,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::ShellValidation,
        Check::ShrinkingHole,
        Check::IsoperimetricM,
        Check::IsoperimetricP,
        Check::Corrector,
        Check::Lemma33,
        Check::Friedrich,
        Check::Nodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ShellValidation => "SHELL_VALIDATION",
            Check::ShrinkingHole => "SHRINKING_HOLE",
            Check::IsoperimetricM => "ISOPERIMETRIC_M",
            Check::IsoperimetricP => "ISOPERIMETRIC_P",
            Check::Corrector => "CORRECTOR",
            Check::Lemma33 => "LEMMA33",
            Check::Friedrich => "FRIEDRICH",
            Check::Nodal => "NODAL",
        }
    }

    pub fn needs_schedule(self) -> bool {
        self.uses_schedule_solves() || matches!(self, Check::Lemma33 | Check::Friedrich)
    }

    fn uses_schedule_solves(self) -> bool {
        matches!(self, Check::ShrinkingHole | Check::IsoperimetricM | Check::IsoperimetricP | Check::Nodal)
    }
}

/// Mesh resolution of a single solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Resolution {
    pub n_rays: usize,
    pub n_radial: usize,
    pub grading: f64,
}

impl Default for Resolution {
    fn default() -> Self {
        Self { n_rays: 256, n_radial: 64, grading: DEFAULT_GRADING }
    }
}

impl Resolution {
    pub fn new(n_rays: usize, n_radial: usize, grading: f64) -> Self {
        Self { n_rays, n_radial, grading }
    }

    /// Halves both counts `steps` times; the per-cell ratio is squared each time so the
    /// coarse radial nodes stay at the same positions.
    pub fn coarsened(&self, steps: u32) -> Option<Self> {
        let f = 1usize << steps;
        if !self.n_rays.is_multiple_of(f) || !self.n_radial.is_multiple_of(f) {
            return None;
        }
        let c = Self::new(self.n_rays / f, self.n_radial / f, self.grading.powi(f as i32));
        (c.n_rays >= 8 && c.n_radial >= 2).then_some(c)
    }

    /// `levels` resolutions ending at `self`, each doubling the previous one.
    pub fn ladder(&self, levels: u32) -> Result<Vec<Self>> {
        (0..levels)
            .rev()
            .map(|s| {
                self.coarsened(s).ok_or_else(|| {
                    Error::InvalidPlan(format!(
                        "{}x{} cannot be halved {s} times",
                        self.n_rays, self.n_radial
                    ))
                })
            })
            .collect()
    }
}

/// Tolerances of every check, all relative unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Solver value against a closed form.
    pub eigenvalue: f64,
    /// Slack added to the right-hand side of inequality verdicts.
    pub inequality_slack: f64,
    /// Slack of `σ₁(Ω_r) ≤ σ₁(A_{r,R_m})`.
    pub domain_monotonicity: f64,
    /// Final `|σ₂(Ω_r) − σ̄₁(Ω₀)|` relative to `σ̄₁(Ω₀)`.
    pub limit_gap: f64,
    /// Minimum error ratio per resolution doubling.
    pub convergence_ratio: f64,
    /// Change of the Friedrich constant under one refinement.
    pub friedrich_stability: f64,
    /// Relative zero threshold of the nodal classifier.
    pub nodal_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eigenvalue: 0.01,
            inequality_slack: 0.005,
            domain_monotonicity: 0.02,
            limit_gap: 0.02,
            convergence_ratio: 3.0,
            friedrich_stability: 0.02,
            nodal_zero: crate::analysis::DEFAULT_ZERO_TOL,
        }
    }
}

fn default_eigen_count() -> usize {
    8
}

fn default_shell() -> ShellSpec {
    ShellSpec { n: 2, r: 0.5, outer: 1.0 }
}

fn default_corrector_schedule() -> Vec<CorrectorSpec> {
    [0.1, 0.05, 0.01].iter().map(|&eps| CorrectorSpec { n: 2, eps, rate: 2.0 }).collect()
}

/// A full experiment: domain, hole radii, resolution and the checks to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    /// Ω₀; its hole radius is ignored.
    pub domain: DomainSpec,
    pub radius_schedule: Vec<f64>,
    #[serde(default)]
    pub resolution: Resolution,
    pub checks: BTreeSet<Check>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_eigen_count")]
    pub eigen_count: usize,
    /// Annulus used by the shell validation ladder.
    #[serde(default = "default_shell")]
    pub shell: ShellSpec,
    #[serde(default = "default_corrector_schedule")]
    pub corrector_schedule: Vec<CorrectorSpec>,
}

impl ExperimentPlan {
    pub fn new(domain: DomainSpec, radius_schedule: Vec<f64>, checks: impl IntoIterator<Item = Check>) -> Self {
        Self {
            domain: DomainSpec { hole_radius: 0.0, ..domain },
            radius_schedule,
            resolution: Resolution::default(),
            checks: checks.into_iter().collect(),
            tolerances: Tolerances::default(),
            eigen_count: default_eigen_count(),
            shell: default_shell(),
            corrector_schedule: default_corrector_schedule(),
        }
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    /// Ω₀ with the hole removed.
    pub fn outer_domain(&self) -> DomainSpec {
        DomainSpec { outer: self.domain.outer.clone(), hole_radius: 0.0 }
    }

    /// Every violated invariant, empty for a valid plan.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let domain = self.outer_domain();
        if let Err(e) = domain.validate() {
            out.push(e.to_string());
            return out;
        }
        let r_min = domain.min_boundary_radius();
        for (i, &r) in self.radius_schedule.iter().enumerate() {
            if !(r > 0.0 && r.is_finite()) {
                out.push(format!("radius #{i} = {r} is not positive"));
            } else if r >= r_min {
                out.push(format!("radius #{i} = {r} does not fit inside min boundary radius {r_min}"));
            }
        }
        if self.radius_schedule.windows(2).any(|w| w[1] >= w[0]) {
            out.push("radius schedule is not strictly decreasing".into());
        }
        let res = &self.resolution;
        if res.n_rays < 8 {
            out.push(format!("n_rays = {} < 8", res.n_rays));
        }
        if res.n_radial < 2 {
            out.push(format!("n_radial = {} < 2", res.n_radial));
        }
        if !(res.grading > 0.0 && res.grading.is_finite()) {
            out.push(format!("grading = {} must be positive", res.grading));
        }
        if self.eigen_count < 3 {
            out.push(format!("eigen_count = {} < 3", self.eigen_count));
        }
        if self.checks.contains(&Check::ShellValidation) {
            if self.shell.n != 2 {
                out.push(format!("shell validation needs n = 2, got {}", self.shell.n));
            }
            if let Err(e) = ShellSpec::new(self.shell.n, self.shell.r, self.shell.outer) {
                out.push(e.to_string());
            } else if self.shell.r <= 0.0 {
                out.push("shell validation needs a hole".into());
            }
            if res.ladder(3).is_err() {
                out.push(format!("resolution {}x{} cannot be halved twice", res.n_rays, res.n_radial));
            }
        }
        if self.checks.contains(&Check::Friedrich) && res.coarsened(1).is_none() {
            out.push(format!("resolution {}x{} cannot be halved", res.n_rays, res.n_radial));
        }
        if self.checks.contains(&Check::Corrector) {
            if self.corrector_schedule.is_empty() {
                out.push("corrector schedule is empty".into());
            }
            for (i, c) in self.corrector_schedule.iter().enumerate() {
                if let Err(e) = CorrectorSpec::new(c.n, c.eps, c.rate) {
                    out.push(format!("corrector #{i}: {e}"));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidPlan(v.join("; ")))
        }
    }
}

/// Runs every check of the plan in a fixed order.
pub fn run_plan(plan: &ExperimentPlan) -> Result<PlanOutcome> {
    plan.validate()?;
    if plan.radius_schedule.is_empty() && plan.checks.iter().any(|c| c.needs_schedule()) {
        return Err(Error::InvalidPlan("radius schedule is empty".into()));
    }
    let mut reports = Vec::new();
    let mut asymptotics = None;
    if plan.checks.contains(&Check::ShellValidation) {
        reports.push(run_shell_validation(&plan.resolution.ladder(3)?, &plan.shell, &plan.tolerances)?);
    }
    if plan.checks.iter().any(|c| c.uses_schedule_solves()) {
        let a = run_asymptotics(plan)?;
        reports.push(a.to_experiment_report());
        asymptotics = Some(a);
    }
    if plan.checks.contains(&Check::Lemma33) {
        reports.push(run_lemma33_check(&plan.outer_domain(), &plan.radius_schedule)?);
    }
    if plan.checks.contains(&Check::Corrector) {
        for group in corrector_groups(&plan.corrector_schedule) {
            let n = group[0].n;
            let area = if n == 2 {
                plan.outer_domain().outer_area()
            } else {
                crate::shells::unit_ball_volume(n)
            };
            let mut rep = run_corrector_check(&group, area)?;
            rep.name = format!("corrector_n{n}");
            reports.push(rep);
        }
    }
    if plan.checks.contains(&Check::Friedrich) {
        let domain = plan.outer_domain().with_hole(plan.radius_schedule[0])?;
        reports.push(run_friedrich_check(&domain, &plan.resolution, &plan.tolerances)?);
    }
    Ok(PlanOutcome { reports, asymptotics })
}

/// Splits a corrector schedule by dimension, keeping first-appearance order.
fn corrector_groups(schedule: &[CorrectorSpec]) -> Vec<Vec<CorrectorSpec>> {
    let mut groups: Vec<Vec<CorrectorSpec>> = Vec::new();
    for c in schedule {
        match groups.iter_mut().find(|g| g[0].n == c.n) {
            Some(g) => g.push(*c),
            None => groups.push(vec![*c]),
        }
    }
    groups
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub reports: Vec<ExperimentReport>,
    pub asymptotics: Option<AsymptoticsReport>,
}

impl PlanOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(ExperimentReport::all_pass)
    }
}

/// Number of rings of the polar mesh of `Ω_r` strictly inside `(r, 2r]` along the shortest ray.
pub fn transition_layers(domain: &DomainSpec, r: f64, resolution: &Resolution) -> usize {
    let r_min = domain.min_boundary_radius();
    crate::geometry::graded_fractions(resolution.n_radial, resolution.grading)
        .iter()
        .skip(1)
        .map(|f| r + (r_min - r) * f)
        .filter(|&s| s > r && s <= 2.0 * r)
        .count()
}

pub(crate) fn is_centered_disk(domain: &DomainSpec) -> bool {
    matches!(domain.outer, OuterBoundary::Disk(_))
}
