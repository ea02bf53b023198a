//! Initial data, exact solutions and default boundary conditions of the test cases.

use std::fmt;
use std::str::FromStr;

use crate::boundary::{BoundaryCondition, BoundaryMap};
use crate::error::{Error, Result};
use crate::euler::{ConsState, Gas, PrimState};
use crate::field::Field;
use crate::mesh::{Mesh, Point};
use crate::reference::ReferenceElement;

pub const SEDOV_RADIUS: f64 = 0.08;
pub const NACA_MACH: f64 = 0.8;
pub const NACA_ALPHA_DEG: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case {
    /// Smooth density bump advected through `[-3/2, 3/2] × [-1/2, 1/2]`.
    Accuracy,
    Sedov,
    ForwardFacingStep,
    /// Airfoil in a free stream of the given Mach number and angle of attack (degrees).
    Naca { mach: f64, alpha_deg: f64 },
    /// Constant state everywhere.
    FreeStream(PrimState),
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Case::Accuracy),
            "sedov" => Ok(Case::Sedov),
            "ffs" | "forward_facing_step" => Ok(Case::ForwardFacingStep),
            "naca" => Ok(Case::Naca {
                mach: NACA_MACH,
                alpha_deg: NACA_ALPHA_DEG,
            }),
            "freestream" => Ok(Case::FreeStream(PrimState::new(1.0, 0.0, 0.0, 1.0))),
            _ => Err(Error::UnknownCase(s.to_string())),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Case::Accuracy => "accuracy",
            Case::Sedov => "sedov",
            Case::ForwardFacingStep => "ffs",
            Case::Naca { .. } => "naca",
            Case::FreeStream(_) => "freestream",
        };
        f.write_str(name)
    }
}

/// `Ψ(r) = exp(1 - 1/(1 - r²))` on `r < 1`, zero outside.
pub fn bump(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Density of the advected bump, centred at `(-1 + t, 0)`.
pub fn accuracy_density(x: Point, t: f64) -> f64 {
    let r = 3.0 * (x[0] + 1.0 - t).hypot(x[1]);
    bump(r).powi(6) + 1.0
}

impl Case {
    /// Free-stream or inflow state, used by bare `coupling_fixed` conditions.
    pub fn reference_state(&self, gas: &Gas) -> PrimState {
        match *self {
            Case::Accuracy => PrimState::new(1.0, 1.0, 0.0, 1.0),
            Case::Sedov => PrimState::new(0.125, 0.0, 0.0, 0.1),
            Case::ForwardFacingStep => PrimState::new(1.4, 3.0, 0.0, 1.0),
            Case::Naca { mach, alpha_deg } => {
                let (rho, p) = (1.0, 1.0);
                let speed = mach * (gas.gamma * p / rho).sqrt();
                let a = alpha_deg.to_radians();
                PrimState::new(rho, speed * a.cos(), speed * a.sin(), p)
            }
            Case::FreeStream(q) => q,
        }
    }

    pub fn initial_prim(&self, gas: &Gas, x: Point) -> PrimState {
        match *self {
            Case::Accuracy => PrimState::new(accuracy_density(x, 0.0), 1.0, 0.0, 1.0),
            Case::Sedov => {
                if x[0].hypot(x[1]) <= SEDOV_RADIUS {
                    PrimState::new(1.0, 0.0, 0.0, 1.0)
                } else {
                    PrimState::new(0.125, 0.0, 0.0, 0.1)
                }
            }
            _ => self.reference_state(gas),
        }
    }

    pub fn initial_state(&self, gas: &Gas, x: Point) -> ConsState {
        gas.prim_to_cons(&self.initial_prim(gas, x))
    }

    /// Exact solution, where one is known.
    pub fn exact(&self, gas: &Gas, x: Point, t: f64) -> Option<ConsState> {
        match *self {
            Case::Accuracy => Some(gas.prim_to_cons(&PrimState::new(accuracy_density(x, t), 1.0, 0.0, 1.0))),
            Case::FreeStream(q) => Some(gas.prim_to_cons(&q)),
            _ => None,
        }
    }

    /// Conditions for the markers written by the bundled mesh generator.
    pub fn default_boundary_conditions(&self, gas: &Gas) -> BoundaryMap {
        let fixed = BoundaryCondition::CouplingFixed(gas.prim_to_cons(&self.reference_state(gas)));
        let mut map = BoundaryMap::default();
        match self {
            Case::Accuracy | Case::FreeStream(_) => map.insert(1, fixed),
            Case::Sedov => map.insert(1, BoundaryCondition::Reflective),
            Case::ForwardFacingStep => {
                map.insert(1, BoundaryCondition::Reflective);
                map.insert(2, fixed);
                map.insert(3, BoundaryCondition::CouplingCopy);
            }
            Case::Naca { .. } => {
                map.insert(1, fixed);
                map.insert(2, BoundaryCondition::Reflective);
            }
        }
        map
    }

    pub fn default_t_end(&self) -> f64 {
        match self {
            Case::Accuracy => 1.0,
            Case::Sedov => 0.2,
            Case::ForwardFacingStep => 3.0,
            Case::Naca { .. } => 10.0,
            Case::FreeStream(_) => 1.0,
        }
    }
}

/// Nodal interpolation of the case's initial condition.
pub fn make_initial_condition(case: &Case, gas: &Gas, mesh: &Mesh, element: &ReferenceElement) -> Field {
    Field::from_fn(mesh, element, |x| case.initial_state(gas, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn accuracy_initial_condition() {
        let g = Gas::default();
        let q = Case::Accuracy.initial_prim(&g, [-1.0, 0.0]);
        assert_eq!(q, PrimState::new(2.0, 1.0, 0.0, 1.0));
        for x in [[-1.0 + 1.0 / 3.0, 0.0], [0.0, 0.0], [-1.0, 0.4], [1.2, -0.3]] {
            assert_eq!(Case::Accuracy.initial_prim(&g, x).rho, 1.0);
        }
        let inside = Case::Accuracy.initial_prim(&g, [-1.0, 0.1]).rho;
        assert!(inside > 1.0 && inside < 2.0);
        // translated by t
        assert_eq!(Case::Accuracy.exact(&g, [0.0, 0.0], 1.0).unwrap()[0], 2.0);
        assert_relative_eq!(
            Case::Accuracy.exact(&g, [0.3, 0.1], 1.0).unwrap()[0],
            accuracy_density([-0.7, 0.1], 0.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn sedov_initial_condition() {
        let g = Gas::default();
        assert_eq!(Case::Sedov.initial_prim(&g, [0.0, 0.0]), PrimState::new(1.0, 0.0, 0.0, 1.0));
        assert_eq!(Case::Sedov.initial_prim(&g, [0.05, 0.06]), PrimState::new(1.0, 0.0, 0.0, 1.0));
        assert_eq!(Case::Sedov.initial_prim(&g, [0.08, 0.01]), PrimState::new(0.125, 0.0, 0.0, 0.1));
    }

    #[test]
    fn naca_free_stream() {
        let g = Gas::default();
        let case: Case = "naca".parse().unwrap();
        let q = case.initial_prim(&g, [2.0, 1.0]);
        let c = (1.4f64).sqrt();
        assert_relative_eq!(q.vx.hypot(q.vy), 0.8 * c, epsilon = 1e-14);
        assert_relative_eq!(q.vy.atan2(q.vx).to_degrees(), 1.25, epsilon = 1e-12);
    }

    #[test]
    fn ffs_state_and_boundaries() {
        let g = Gas::default();
        let case: Case = "ffs".parse().unwrap();
        let u = case.initial_state(&g, [1.0, 0.5]);
        assert!((u[3] - 8.8).abs() < 1e-14);
        let bcs = case.default_boundary_conditions(&g);
        assert_eq!(bcs.get(1).unwrap(), &BoundaryCondition::Reflective);
        assert_eq!(bcs.get(3).unwrap(), &BoundaryCondition::CouplingCopy);
        assert!(matches!(bcs.get(2).unwrap(), BoundaryCondition::CouplingFixed(_)));
    }

    #[test]
    fn names() {
        for name in ["accuracy", "sedov", "ffs", "naca", "freestream"] {
            let c: Case = name.parse().unwrap();
            assert_eq!(c.to_string(), name);
        }
        assert!(matches!("blast".parse::<Case>(), Err(Error::UnknownCase(_))));
    }
}
