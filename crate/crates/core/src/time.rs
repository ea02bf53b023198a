//! Three-stage strong-stability-preserving Runge-Kutta stepping.

use crate::error::{Error, Result};
use crate::euler::{ConsState, Gas};
use crate::field::Field;
use crate::mesh::Mesh;

/// Steps below this signal a blow-up.
pub const DT_MIN: f64 = 1e-14;

pub fn default_cfl(degree: usize) -> f64 {
    if degree >= 3 {
        0.1
    } else {
        0.5
    }
}

/// `CFL · min_Z r_Z / max_{k∈Z} (|v_k| + c_k)` with inradius `r_Z`.
pub fn compute_dt(gas: &Gas, field: &Field, mesh: &Mesh, cfl: f64) -> f64 {
    (0..mesh.n_cells())
        .map(|c| {
            let speed = field
                .cell(c)
                .iter()
                .map(|u| gas.max_signal_speed(u))
                .fold(0.0, f64::max);
            mesh.geometry(c).inradius / speed
        })
        .fold(f64::INFINITY, f64::min)
        * cfl
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeStepper {
    pub cfl: f64,
    pub t_end: f64,
    /// Increasing output times; each is hit exactly.
    pub snapshots: Vec<f64>,
    /// CFL of the first step, raised linearly to `cfl` over `startup_steps`.
    pub startup_cfl: f64,
    pub startup_steps: usize,
}

impl TimeStepper {
    pub fn new(cfl: f64, t_end: f64, mut snapshots: Vec<f64>) -> Self {
        snapshots.retain(|&s| s > 0.0 && s <= t_end);
        snapshots.sort_by(f64::total_cmp);
        snapshots.dedup();
        TimeStepper {
            cfl,
            t_end,
            snapshots,
            startup_cfl: cfl,
            startup_steps: 0,
        }
    }

    pub fn with_startup(mut self, startup_cfl: f64, startup_steps: usize) -> Self {
        self.startup_cfl = startup_cfl;
        self.startup_steps = startup_steps;
        self
    }

    /// CFL number of the step that follows `steps` accepted steps.
    pub fn cfl_at(&self, steps: usize) -> f64 {
        if steps >= self.startup_steps {
            self.cfl
        } else {
            let s = steps as f64 / self.startup_steps as f64;
            self.startup_cfl + (self.cfl - self.startup_cfl) * s
        }
    }

    /// Next stop after `t`: a snapshot or `t_end`.
    pub fn next_target(&self, t: f64) -> f64 {
        self.snapshots
            .iter()
            .copied()
            .find(|&s| s > t)
            .unwrap_or(self.t_end)
            .min(self.t_end)
    }

    /// Clips `dt` so that the step lands on the next target; a step that
    /// would leave a sliver below `1e-12` of the target is stretched onto it.
    pub fn clip(&self, t: f64, dt: f64) -> Result<f64> {
        if !(dt >= DT_MIN) {
            return Err(Error::TimeStepUnderflow { t, dt });
        }
        let target = self.next_target(t);
        let rest = target - t;
        if dt >= rest || rest - dt < 1e-12 * target.abs().max(1.0) {
            Ok(rest)
        } else {
            Ok(dt)
        }
    }
}

/// Shu-Osher SSPRK33. `rhs(field, stage)` evaluates the time derivative;
/// every stage is checked for positivity.
pub fn ssprk33_step<F>(gas: &Gas, field: &Field, dt: f64, mut rhs: F) -> Result<Field>
where
    F: FnMut(&Field, usize) -> Result<Vec<ConsState>>,
{
    let mut u1 = field.clone();
    u1.axpy(dt, &rhs(field, 0)?);
    u1.t = field.t + dt;
    u1.check_physical(gas, "stage 1")?;

    let mut u2 = u1.clone();
    u2.axpy(dt, &rhs(&u1, 1)?);
    u2.combine(0.25, 0.75, field);
    u2.t = field.t + 0.5 * dt;
    u2.check_physical(gas, "stage 2")?;

    let mut u3 = u2.clone();
    u3.axpy(dt, &rhs(&u2, 2)?);
    u3.combine(2.0 / 3.0, 1.0 / 3.0, field);
    u3.t = field.t + dt;
    u3.check_physical(gas, "stage 3")?;
    Ok(u3)
}
