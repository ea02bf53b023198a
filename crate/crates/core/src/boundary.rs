//! Boundary conditions by edge marker.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::euler::{ConsState, Gas, PrimState};
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// Slip wall: the ghost mirrors the normal velocity.
    Reflective,
    /// Coupling to a fixed exterior state.
    CouplingFixed(ConsState),
    /// Coupling to a copy of the interior trace.
    CouplingCopy,
}

impl BoundaryCondition {
    pub fn ghost(&self, gas: &Gas, u_in: &ConsState, n: [f64; 2]) -> ConsState {
        match self {
            BoundaryCondition::Reflective => gas.reflect(u_in, n),
            BoundaryCondition::CouplingFixed(u) => *u,
            BoundaryCondition::CouplingCopy => *u_in,
        }
    }

    /// Parses `reflective`, `coupling_copy`, `coupling_fixed` or
    /// `coupling_fixed:rho,vx,vy,p`. The bare fixed form takes `default`.
    pub fn parse(text: &str, gas: &Gas, default: Option<PrimState>) -> Result<Self> {
        let text = text.trim();
        let (kind, args) = match text.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a)),
            None => (text, None),
        };
        match (kind, args) {
            ("reflective", None) => Ok(BoundaryCondition::Reflective),
            ("coupling_copy", None) => Ok(BoundaryCondition::CouplingCopy),
            ("coupling_fixed", None) => default
                .map(|q| BoundaryCondition::CouplingFixed(gas.prim_to_cons(&q)))
                .ok_or_else(|| Error::Config(format!("'{text}' needs an exterior state for this case"))),
            ("coupling_fixed", Some(args)) => {
                let v: Vec<f64> = args
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Config(format!("'{text}': {e}")))?;
                if v.len() != 4 {
                    return Err(Error::Config(format!("'{text}': expected rho,vx,vy,p")));
                }
                let q = PrimState::new(v[0], v[1], v[2], v[3]);
                if !(q.rho > 0.0 && q.p > 0.0) {
                    return Err(Error::Config(format!("'{text}': non-physical exterior state")));
                }
                Ok(BoundaryCondition::CouplingFixed(gas.prim_to_cons(&q)))
            }
            _ => Err(Error::Config(format!("unknown boundary condition '{text}'"))),
        }
    }
}

/// Boundary condition for each marker.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryMap(pub BTreeMap<i32, BoundaryCondition>);

impl BoundaryMap {
    pub fn uniform(markers: impl IntoIterator<Item = i32>, bc: BoundaryCondition) -> Self {
        BoundaryMap(markers.into_iter().map(|m| (m, bc)).collect())
    }

    pub fn insert(&mut self, marker: i32, bc: BoundaryCondition) {
        self.0.insert(marker, bc);
    }

    pub fn get(&self, marker: i32) -> Result<&BoundaryCondition> {
        self.0.get(&marker).ok_or(Error::UnknownMarker(marker))
    }

    /// Fails on the first boundary marker of `mesh` without a condition.
    pub fn check_covers(&self, mesh: &Mesh) -> Result<()> {
        for m in mesh.markers().keys() {
            self.get(*m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let g = Gas::default();
        assert_eq!(BoundaryCondition::parse("reflective", &g, None).unwrap(), BoundaryCondition::Reflective);
        assert_eq!(
            BoundaryCondition::parse(" coupling_copy ", &g, None).unwrap(),
            BoundaryCondition::CouplingCopy
        );
        let fixed = BoundaryCondition::parse("coupling_fixed: 1.4, 3, 0, 1", &g, None).unwrap();
        match fixed {
            BoundaryCondition::CouplingFixed(u) => {
                assert!((u[3] - 8.8).abs() < 1e-14);
            }
            _ => panic!(),
        }
        let q = PrimState::new(1.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            BoundaryCondition::parse("coupling_fixed", &g, Some(q)).unwrap(),
            BoundaryCondition::CouplingFixed(_)
        ));
        assert!(BoundaryCondition::parse("coupling_fixed", &g, None).is_err());
        assert!(BoundaryCondition::parse("coupling_fixed:1,2", &g, None).is_err());
        assert!(BoundaryCondition::parse("coupling_fixed:1,0,0,-1", &g, None).is_err());
        assert!(BoundaryCondition::parse("outflow", &g, None).is_err());
    }

    #[test]
    fn ghosts_and_lookup() {
        let g = Gas::default();
        let u = [1.0, 0.5, 0.25, 3.0];
        assert_eq!(BoundaryCondition::CouplingCopy.ghost(&g, &u, [1.0, 0.0]), u);
        assert_eq!(BoundaryCondition::Reflective.ghost(&g, &u, [1.0, 0.0]), [1.0, -0.5, 0.25, 3.0]);
        let map = BoundaryMap::uniform([1, 2], BoundaryCondition::Reflective);
        assert!(map.get(2).is_ok());
        assert!(matches!(map.get(3), Err(Error::UnknownMarker(3))));
    }
}
