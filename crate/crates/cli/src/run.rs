use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use steklov::discretize::Field;
use steklov::eigensolve::{solve_steklov, solve_steklov_dirichlet, SpectralResult};
use steklov::experiments::{run_plan, summary_json, svg, Cell, ExperimentReport, Table};
use steklov::geometry::build_polar_mesh;
use steklov::io::{field_to_text, mesh_to_text};
use steklov::shells::{sigma1_shell, sigma2_shell, sigma2_shell_derivative, ShellSpec};
use thiserror::Error;

use crate::config::{Config, ConfigError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Write the polar mesh of every scheduled domain.
    Mesh,
    /// Tabulate closed-form shell eigenvalues over the schedule.
    Shell,
    /// Solve the eigenproblem on every scheduled domain.
    Solve,
    /// Run the configured checks and write reports.
    Experiment,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] steklov::Error),
    #[error("io: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Overall result of a run: whether every verdict passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

pub struct Invocation {
    pub command: Command,
    pub format: Format,
    pub plots: bool,
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), RunError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| RunError::Io { path, source })
}

fn table_json(table: &Table) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|c| match c {
                        Cell::Num(x) => json!(x),
                        Cell::Int(i) => json!(i),
                        Cell::Text(s) => json!(s),
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "columns": table.columns, "rows": rows })
}

fn write_table(dir: &Path, stem: &str, table: &Table, format: Format) -> Result<(), RunError> {
    match format {
        Format::Csv => write(dir, &format!("{stem}.csv"), &table.to_csv()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table_json(table)).expect("table serializes");
            s.push('\n');
            write(dir, &format!("{stem}.json"), &s)
        }
    }
}

/// Output directory as an absolute path, created if missing.
pub fn prepare_output_dir(config: &Config) -> Result<PathBuf, RunError> {
    let dir = if config.output_dir.is_absolute() {
        config.output_dir.clone()
    } else {
        std::env::current_dir()
            .map_err(|source| RunError::Io { path: config.output_dir.clone(), source })?
            .join(&config.output_dir)
    };
    fs::create_dir_all(&dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
    Ok(dir)
}

pub fn dispatch(config: &Config, inv: &Invocation) -> Result<Outcome, RunError> {
    let dir = prepare_output_dir(config)?;
    match inv.command {
        Command::Mesh => run_mesh(config, &dir),
        Command::Shell => run_shell(config, &dir, inv.format),
        Command::Solve => run_solve(config, &dir, inv.format),
        Command::Experiment => run_experiment(config, &dir, inv),
    }
}

/// Hole radii of the schedule, or the bare outer domain when it is empty.
fn radii(config: &Config) -> Vec<f64> {
    if config.schedule.is_empty() {
        vec![0.0]
    } else {
        config.schedule.clone()
    }
}

fn run_mesh(config: &Config, dir: &Path) -> Result<Outcome, RunError> {
    let res = config.resolution;
    for (i, r) in radii(config).into_iter().enumerate() {
        let mesh = build_polar_mesh(&config.outer_domain().with_hole(r)?, res.n_rays, res.n_radial, res.grading)?;
        write(dir, &format!("mesh_{i}.txt"), &mesh_to_text(&mesh))?;
    }
    Ok(Outcome::Pass)
}

fn run_shell(config: &Config, dir: &Path, format: Format) -> Result<Outcome, RunError> {
    let radii = if config.schedule.is_empty() { vec![config.shell.r] } else { config.schedule.clone() };
    let mut table = Table::new(&["n", "r", "R", "sigma1", "sigma2", "sigma2_derivative"]);
    for r in radii {
        let s = ShellSpec::new(config.shell.n, r, config.shell.outer)?;
        let sigma1 = if r > 0.0 { Cell::Num(sigma1_shell(&s)?) } else { Cell::Text(String::new()) };
        table.push(vec![
            (s.n as usize).into(),
            r.into(),
            s.outer.into(),
            sigma1,
            sigma2_shell(&s).into(),
            sigma2_shell_derivative(&s).into(),
        ]);
    }
    write_table(dir, "shell", &table, format)?;
    Ok(Outcome::Pass)
}

fn run_solve(config: &Config, dir: &Path, format: Format) -> Result<Outcome, RunError> {
    let res = config.resolution;
    let mut table = Table::new(&["r", "mode", "index", "cluster", "sigma"]);
    for (i, r) in radii(config).into_iter().enumerate() {
        let mesh = build_polar_mesh(&config.outer_domain().with_hole(r)?, res.n_rays, res.n_radial, res.grading)?;
        let spectral: SpectralResult = if r > 0.0 {
            solve_steklov_dirichlet(&mesh, config.eigen_count)?
        } else {
            solve_steklov(&mesh, config.eigen_count)?
        };
        let mode = serde_json::to_value(spectral.mode).expect("mode serializes");
        let mode = mode.as_str().unwrap_or_default().to_string();
        for (k, (sigma, field)) in spectral.eigenvalues.iter().zip(&spectral.eigenfields).enumerate() {
            table.push(vec![
                r.into(),
                Cell::Text(mode.clone()),
                (k + 1).into(),
                spectral.cluster_of(k).map_or(0, |c| c + 1).into(),
                (*sigma).into(),
            ]);
            write_field(dir, i, k, &mesh, field, r, *sigma)?;
        }
        eprintln!("solved r = {r}: {} eigenvalues", spectral.eigenvalues.len());
    }
    write_table(dir, "eigenvalues", &table, format)?;
    Ok(Outcome::Pass)
}

fn write_field(
    dir: &Path,
    radius_index: usize,
    k: usize,
    mesh: &steklov::geometry::Mesh,
    field: &Field,
    r: f64,
    sigma: f64,
) -> Result<(), RunError> {
    let label = format!("r = {r:e}, eigenvalue {} = {sigma:.16e}", k + 1);
    write(dir, &format!("field_{radius_index}_{}.txt", k + 1), &field_to_text(mesh, field, &label))
}

fn run_experiment(config: &Config, dir: &Path, inv: &Invocation) -> Result<Outcome, RunError> {
    let plan = config.plan();
    let outcome = run_plan(&plan)?;
    for report in &outcome.reports {
        let stem = if report.name == "asymptotics" { "report" } else { report.name.as_str() };
        write_table(dir, stem, &report.table, inv.format)?;
        for v in &report.verdicts {
            eprintln!("{:<16} {:<34} {:<14} {}", v.check, v.criterion, v.verdict.as_str(), v.detail);
        }
    }
    write(dir, "summary.json", &summary_json(&outcome.reports))?;
    if inv.plots {
        if let Some(a) = &outcome.asymptotics {
            write(dir, "fig_sigma_vs_r.svg", &svg::sigma_vs_r(a))?;
            write(dir, "fig_error_vs_r.svg", &svg::error_vs_r(a))?;
        }
    }
    Ok(if outcome.reports.iter().all(ExperimentReport::all_pass) { Outcome::Pass } else { Outcome::Fail })
}
