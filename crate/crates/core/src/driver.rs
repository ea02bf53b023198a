//! Time loop, run diagnostics and convergence studies.

use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::euler::{ConsState, NVARS};
use crate::field::Field;
use crate::mesh::{validate_mesh, Mesh, Point};
use crate::output::{write_diagnostics, write_vtk};
use crate::quadrature::triangle_rule;
use crate::cases::make_initial_condition;
use crate::solver::{Solver, StageDiagnostics};
use crate::time::{compute_dt, ssprk33_step, TimeStepper};

/// SSPRK33 weights of the three stage derivatives in the step update.
pub const STAGE_WEIGHTS: [f64; 3] = [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0];

/// Points per direction of the collapsed rule used for error norms.
const ERROR_RULE_POINTS: usize = 8;

/// One row of the diagnostics time series; step 0 is the initial state.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// Integrals of mass, x/y momentum and energy.
    pub totals: ConsState,
    /// `Σ_Z E^Z`.
    pub entropy: f64,
    pub lambda_ed_sum: f64,
    pub lambda_er_sum: f64,
    pub min_rho: f64,
    pub min_p: f64,
    /// Stage-weighted `Σ_Z dE^Z/dt`.
    pub entropy_rate: f64,
    /// Stage-weighted `Σ σ`.
    pub sigma_total: f64,
    /// Stage-weighted boundary entropy inflow.
    pub boundary_entropy_inflow: f64,
    /// Largest per-stage `Σ_Z dE^Z/dt - Σ σ - inflow`.
    pub budget_excess: f64,
    /// Largest per-stage, per-cell `dE^Z/dt + Φ_Z`.
    pub max_cell_excess: f64,
    /// `ΔE - dt · inflow` over the step.
    pub entropy_step_excess: f64,
    /// Largest relative imbalance `|ΔQ + dt · boundary flux| / Σ w|u|` over the variables.
    pub conservation_residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub records: Vec<StepRecord>,
    /// Density L2 error at the final time, when the case has an exact solution.
    pub l2_error: Option<f64>,
}

impl Diagnostics {
    pub fn steps(&self) -> usize {
        self.records.last().map_or(0, |r| r.step)
    }

    fn max_of(&self, f: impl Fn(&StepRecord) -> f64) -> f64 {
        self.records.iter().skip(1).map(f).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_budget_excess(&self) -> f64 {
        self.max_of(|r| r.budget_excess)
    }

    pub fn max_entropy_step_excess(&self) -> f64 {
        self.max_of(|r| r.entropy_step_excess)
    }

    pub fn max_conservation_residual(&self) -> f64 {
        self.max_of(|r| r.conservation_residual)
    }

    pub fn min_rho(&self) -> f64 {
        self.records.iter().map(|r| r.min_rho).fold(f64::INFINITY, f64::min)
    }

    pub fn min_p(&self) -> f64 {
        self.records.iter().map(|r| r.min_p).fold(f64::INFINITY, f64::min)
    }
}

pub struct RunOutput {
    pub diagnostics: Diagnostics,
    pub field: Field,
    pub solver: Solver,
}

fn min_rho_p(solver: &Solver, field: &Field) -> (f64, f64) {
    field.states.iter().fold((f64::INFINITY, f64::INFINITY), |(r, p), u| {
        (r.min(u[0]), p.min(solver.gas.cons_to_prim(u).p))
    })
}

fn initial_record(solver: &Solver, field: &Field) -> StepRecord {
    let (min_rho, min_p) = min_rho_p(solver, field);
    StepRecord {
        t: field.t,
        totals: solver.totals(&field.states),
        entropy: solver.total_entropy(field),
        min_rho,
        min_p,
        ..Default::default()
    }
}

/// Advances `field` by one SSPRK33 step and measures the step's budgets.
pub fn advance(solver: &Solver, field: &Field, dt: f64, previous: &StepRecord) -> Result<(Field, StepRecord)> {
    let mut stages: Vec<StageDiagnostics> = Vec::with_capacity(3);
    let next = ssprk33_step(&solver.gas, field, dt, |f, _| {
        let (r, d) = solver.rhs(f)?;
        stages.push(d);
        Ok(r)
    })?;
    let weighted = |f: &dyn Fn(&StageDiagnostics) -> f64| stages.iter().zip(STAGE_WEIGHTS).map(|(d, b)| b * f(d)).sum::<f64>();
    let max = |f: &dyn Fn(&StageDiagnostics) -> f64| stages.iter().map(f).fold(f64::NEG_INFINITY, f64::max);

    let totals = solver.totals(&next.states);
    let scale = solver.totals(&next.states.iter().map(|u| u.map(f64::abs)).collect::<Vec<_>>());
    let mut conservation_residual: f64 = 0.0;
    for i in 0..NVARS {
        let outflow = weighted(&|d| d.boundary_flux[i]);
        let imbalance = totals[i] - previous.totals[i] + dt * outflow;
        conservation_residual = conservation_residual.max(imbalance.abs() / scale[i].max(f64::MIN_POSITIVE));
    }
    let entropy = solver.total_entropy(&next);
    let inflow = weighted(&|d| d.boundary_entropy_inflow);
    let (min_rho, min_p) = min_rho_p(solver, &next);
    let record = StepRecord {
        step: previous.step + 1,
        t: next.t,
        dt,
        totals,
        entropy,
        lambda_ed_sum: weighted(&|d| d.lambda_ed_sum),
        lambda_er_sum: weighted(&|d| d.lambda_er_sum),
        min_rho,
        min_p,
        entropy_rate: weighted(&|d| d.entropy_rate),
        sigma_total: weighted(&|d| d.sigma_total),
        boundary_entropy_inflow: inflow,
        budget_excess: max(&|d| d.budget_excess()),
        max_cell_excess: max(&|d| d.max_cell_excess),
        entropy_step_excess: entropy - previous.entropy - dt * inflow,
        conservation_residual,
    };
    Ok((next, record))
}

fn snapshot_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("snapshot_{index:04}.vtk"))
}

/// Reads the configured mesh and runs it.
pub fn run_simulation(config: &RunConfig) -> Result<RunOutput> {
    let mesh = Mesh::read(&config.mesh)?;
    run_with_mesh(config, mesh, |_, _| {})
}

/// Startup followed by the time loop. `observer` sees every accepted step.
/// With an output directory, snapshots land at t = 0, at every snapshot
/// time and at the end; the diagnostics CSV is written even when the run
/// aborts.
pub fn run_with_mesh(
    config: &RunConfig,
    mesh: Mesh,
    mut observer: impl FnMut(&StepRecord, &Field),
) -> Result<RunOutput> {
    let report = validate_mesh(&mesh);
    if !report.is_valid() {
        return Err(Error::InvalidMesh(report.problems.join("; ")));
    }
    let gas = config.gas();
    let solver = Solver::new(mesh, config.degree, gas, config.bcs.clone())?;
    let mut field = make_initial_condition(&config.case, &gas, &solver.mesh, &solver.element);
    field.check_physical(&gas, "initial condition")?;
    let stepper = TimeStepper::new(config.cfl, config.t_end, config.snapshots.clone())
        .with_startup(config.startup_cfl, config.startup_steps);
    let out = config.output_dir.as_deref();
    if let Some(dir) = out {
        solver.filter.write_csv(dir.join("operators"))?;
        write_vtk(snapshot_path(dir, 0), &gas, &field, &solver.mesh, &solver.element)?;
    }

    let mut diagnostics = Diagnostics {
        records: vec![initial_record(&solver, &field)],
        l2_error: None,
    };
    let mut snapshot = 1;
    let result = (|| -> Result<()> {
        while field.t < stepper.t_end && config.max_steps.map_or(true, |m| diagnostics.steps() < m) {
            let dt = stepper.clip(field.t, compute_dt(&gas, &field, &solver.mesh, stepper.cfl_at(diagnostics.steps())))?;
            let target = stepper.next_target(field.t);
            let previous = *diagnostics.records.last().expect("initial record");
            let (mut next, record) = advance(&solver, &field, dt, &previous)?;
            if field.t + dt == target {
                next.t = target;
            }
            field = next;
            observer(&record, &field);
            diagnostics.records.push(StepRecord { t: field.t, ..record });
            if let Some(dir) = out {
                if stepper.snapshots.contains(&field.t) {
                    write_vtk(snapshot_path(dir, snapshot), &gas, &field, &solver.mesh, &solver.element)?;
                    snapshot += 1;
                }
            }
        }
        Ok(())
    })();
    if let Some(dir) = out {
        write_diagnostics(dir.join("diagnostics.csv"), &diagnostics.records)?;
    }
    result?;
    if let Some(dir) = out {
        write_vtk(dir.join("final.vtk"), &gas, &field, &solver.mesh, &solver.element)?;
    }
    diagnostics.l2_error = l2_error(&solver, &field, |x| config.case.exact(&gas, x, field.t).map(|u| u[0]));
    Ok(RunOutput {
        diagnostics,
        field,
        solver,
    })
}

/// Quadrature points, weights and basis values of the error rule.
fn error_rule(solver: &Solver) -> Vec<(Point, f64, Vec<f64>)> {
    triangle_rule(ERROR_RULE_POINTS)
        .into_iter()
        .map(|(x, w)| (x, w, solver.element.basis.eval(x)))
        .collect()
}

fn interpolate(phi: &[f64], cell: &[ConsState], var: usize) -> f64 {
    phi.iter().zip(cell).map(|(p, u)| p * u[var]).sum()
}

/// L2 norm of `ρ_h - exact` over the mesh; `None` when `exact` is.
pub fn l2_error(solver: &Solver, field: &Field, exact: impl Fn(Point) -> Option<f64>) -> Option<f64> {
    let rule = error_rule(solver);
    let mut sum = 0.0;
    for c in 0..solver.mesh.n_cells() {
        let cell = field.cell(c);
        for (rs, w, phi) in &rule {
            let e = interpolate(phi, cell, 0) - exact(solver.mesh.map_point(c, *rs))?;
            sum += solver.ops.det[c] * w * e * e;
        }
    }
    Some(sum.sqrt())
}

/// Evaluates variable `var` of the discrete solution at `x`.
pub fn sample(solver: &Solver, field: &Field, x: Point, var: usize) -> Option<f64> {
    let (c, rs) = solver.mesh.locator().locate(x)?;
    Some(interpolate(&solver.element.basis.eval(rs), field.cell(c), var))
}

/// `‖ρ(x) - ρ(-x)‖ / ‖ρ‖` in L2; points whose mirror image leaves the mesh are skipped.
pub fn rotational_asymmetry(solver: &Solver, field: &Field) -> f64 {
    let rule = error_rule(solver);
    let locator = solver.mesh.locator();
    let (mut diff, mut norm) = (0.0, 0.0);
    for c in 0..solver.mesh.n_cells() {
        let cell = field.cell(c);
        for (rs, w, phi) in &rule {
            let x = solver.mesh.map_point(c, *rs);
            let rho = interpolate(phi, cell, 0);
            let Some((m, mrs)) = locator.locate([-x[0], -x[1]]) else {
                continue;
            };
            let mirror = interpolate(&solver.element.basis.eval(mrs), field.cell(m), 0);
            let wd = solver.ops.det[c] * w;
            diff += wd * (rho - mirror).powi(2);
            norm += wd * rho * rho;
        }
    }
    (diff / norm).sqrt()
}

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct EocRow {
    pub triangles: usize,
    pub avg_area: f64,
    /// `√A` of the average cell area.
    pub typical_length: f64,
    pub l2_error: f64,
    /// Order relative to the previous row.
    pub eoc: Option<f64>,
}

/// `log(e₁/e₂) / log(h₁/h₂)` with `h = √A`.
pub fn eoc(e1: f64, e2: f64, h1: f64, h2: f64) -> f64 {
    (e1 / e2).ln() / (h1 / h2).ln()
}

/// Runs `template` on every mesh and tabulates the density errors.
pub fn convergence_study(template: &RunConfig, meshes: &[PathBuf]) -> Result<Vec<EocRow>> {
    let mut rows: Vec<EocRow> = Vec::with_capacity(meshes.len());
    for (i, mesh) in meshes.iter().enumerate() {
        let mut config = template.clone();
        config.mesh = mesh.clone();
        config.output_dir = template.output_dir.as_ref().map(|d| d.join(format!("level_{i}")));
        let run = run_simulation(&config)?;
        let l2 = run.diagnostics.l2_error.ok_or_else(|| {
            Error::Config(format!("case '{}' has no exact solution for a convergence study", config.case))
        })?;
        let triangles = run.solver.mesh.n_cells();
        let avg_area = run.solver.mesh.total_area() / triangles as f64;
        let h = avg_area.sqrt();
        let order = rows.last().map(|prev| eoc(prev.l2_error, l2, prev.typical_length, h));
        rows.push(EocRow {
            triangles,
            avg_area,
            typical_length: h,
            l2_error: l2,
            eoc: order,
        });
    }
    Ok(rows)
}
