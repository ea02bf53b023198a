//! Run configuration, read from a flat TOML file.
//!
//! ```toml
//! case = "ffs"
//! mesh = "../meshes/ffs"
//! degree = 1
//! t_end = 3.0
//! snapshots = [0.5, 3.0]
//! output_dir = "out/ffs"
//!
//! [bc]
//! 2 = "coupling_fixed:1.4,3,0,1"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::boundary::{BoundaryCondition, BoundaryMap};
use crate::cases::Case;
use crate::error::{Error, Result};
use crate::euler::{Gas, PrimState, DEFAULT_GAMMA};
use crate::reference::check_degree;
use crate::time::default_cfl;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    case: String,
    mesh: PathBuf,
    degree: usize,
    cfl: Option<f64>,
    t_end: Option<f64>,
    #[serde(default)]
    snapshots: Vec<f64>,
    gamma: Option<f64>,
    output_dir: Option<PathBuf>,
    mach: Option<f64>,
    alpha: Option<f64>,
    /// Primitive `[rho, vx, vy, p]` of the free-stream case.
    state: Option<[f64; 4]>,
    max_steps: Option<usize>,
    startup_cfl: Option<f64>,
    #[serde(default)]
    startup_steps: usize,
    #[serde(default)]
    bc: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: Case,
    /// Mesh basename (without `.node`/`.ele`).
    pub mesh: PathBuf,
    pub degree: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    pub gamma: f64,
    pub bcs: BoundaryMap,
    /// Where snapshots and diagnostics go; nothing is written when absent.
    pub output_dir: Option<PathBuf>,
    pub max_steps: Option<usize>,
    /// CFL of the first step; the CFL rises linearly to `cfl` over
    /// `startup_steps` steps.
    pub startup_cfl: f64,
    pub startup_steps: usize,
}

impl RunConfig {
    /// Defaults for `case` on `mesh`.
    pub fn new(case: Case, mesh: impl Into<PathBuf>, degree: usize) -> Self {
        let gas = Gas::new(DEFAULT_GAMMA);
        RunConfig {
            case,
            mesh: mesh.into(),
            degree,
            cfl: default_cfl(degree),
            t_end: case.default_t_end(),
            snapshots: Vec::new(),
            gamma: DEFAULT_GAMMA,
            bcs: case.default_boundary_conditions(&gas),
            output_dir: None,
            max_steps: None,
            startup_cfl: default_cfl(degree),
            startup_steps: 0,
        }
    }

    pub fn gas(&self) -> Gas {
        Gas::new(self.gamma)
    }

    /// Parses TOML text; relative paths are taken relative to `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut case: Case = raw.case.parse()?;
        match (&mut case, raw.mach, raw.alpha, raw.state) {
            (Case::Naca { mach, alpha_deg }, m, a, None) => {
                *mach = m.unwrap_or(*mach);
                *alpha_deg = a.unwrap_or(*alpha_deg);
            }
            (Case::FreeStream(q), None, None, s) => {
                if let Some([rho, vx, vy, p]) = s {
                    *q = PrimState::new(rho, vx, vy, p);
                }
                if !(q.rho > 0.0 && q.p > 0.0) {
                    return Err(Error::Config("free-stream state must have rho > 0 and p > 0".into()));
                }
            }
            (_, None, None, None) => {}
            _ => return Err(Error::Config(format!("mach/alpha/state do not apply to case '{case}'"))),
        }
        check_degree(raw.degree).map_err(|e| Error::Config(e.to_string()))?;
        let gamma = raw.gamma.unwrap_or(DEFAULT_GAMMA);
        if !(gamma > 1.0) {
            return Err(Error::Config(format!("gamma must exceed 1, got {gamma}")));
        }
        let gas = Gas::new(gamma);
        let cfl = raw.cfl.unwrap_or(default_cfl(raw.degree));
        if !(cfl > 0.0) {
            return Err(Error::Config(format!("cfl must be positive, got {cfl}")));
        }
        let startup_cfl = raw.startup_cfl.unwrap_or(cfl);
        if !(startup_cfl > 0.0) {
            return Err(Error::Config(format!("startup_cfl must be positive, got {startup_cfl}")));
        }
        let t_end = raw.t_end.unwrap_or(case.default_t_end());
        if !(t_end > 0.0) {
            return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
        }
        let mut bcs = case.default_boundary_conditions(&gas);
        for (marker, text) in &raw.bc {
            let m: i32 = marker
                .parse()
                .map_err(|_| Error::Config(format!("boundary marker '{marker}' is not an integer")))?;
            bcs.insert(m, BoundaryCondition::parse(text, &gas, Some(case.reference_state(&gas)))?);
        }
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
        Ok(RunConfig {
            case,
            mesh: resolve(raw.mesh),
            degree: raw.degree,
            cfl,
            t_end,
            snapshots: raw.snapshots,
            gamma,
            bcs,
            output_dir: raw.output_dir.map(resolve),
            max_steps: raw.max_steps,
            startup_cfl,
            startup_steps: raw.startup_steps,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, dir)
    }
}
