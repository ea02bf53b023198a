//! Nodal solution storage.

use crate::error::Result;
use crate::euler::{ConsState, Gas, NVARS};
use crate::mesh::Mesh;
use crate::reference::ReferenceElement;

/// Conserved states at every node of every cell, stored cell by cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub n_nodes: usize,
    pub states: Vec<ConsState>,
    pub t: f64,
}

impl Field {
    pub fn constant(n_cells: usize, n_nodes: usize, u: ConsState) -> Self {
        Field {
            n_nodes,
            states: vec![u; n_cells * n_nodes],
            t: 0.0,
        }
    }

    /// Samples `f` at the physical position of every node.
    pub fn from_fn(mesh: &Mesh, element: &ReferenceElement, mut f: impl FnMut([f64; 2]) -> ConsState) -> Self {
        let n = element.n_nodes();
        let mut states = Vec::with_capacity(mesh.n_cells() * n);
        for c in 0..mesh.n_cells() {
            for x in &element.nodes {
                states.push(f(mesh.map_point(c, *x)));
            }
        }
        Field { n_nodes: n, states, t: 0.0 }
    }

    pub fn n_cells(&self) -> usize {
        self.states.len() / self.n_nodes
    }

    pub fn cell(&self, c: usize) -> &[ConsState] {
        &self.states[c * self.n_nodes..(c + 1) * self.n_nodes]
    }

    pub fn cell_mut(&mut self, c: usize) -> &mut [ConsState] {
        &mut self.states[c * self.n_nodes..(c + 1) * self.n_nodes]
    }

    pub fn node(&self, c: usize, k: usize) -> &ConsState {
        &self.states[c * self.n_nodes + k]
    }

    /// Fails on the first node with nonpositive density or pressure.
    pub fn check_physical(&self, gas: &Gas, stage: &str) -> Result<()> {
        for (i, u) in self.states.iter().enumerate() {
            gas.checked_prim(u, || {
                format!("{stage}, cell {}, node {}", i / self.n_nodes, i % self.n_nodes)
            })?;
        }
        Ok(())
    }

    pub fn has_nan(&self) -> bool {
        self.states.iter().flatten().any(|x| !x.is_finite())
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &[ConsState]) {
        for (u, v) in self.states.iter_mut().zip(other) {
            for i in 0..NVARS {
                u[i] += a * v[i];
            }
        }
    }

    /// `self = a * self + b * other`
    pub fn combine(&mut self, a: f64, b: f64, other: &Field) {
        for (u, v) in self.states.iter_mut().zip(&other.states) {
            for i in 0..NVARS {
                u[i] = a * u[i] + b * v[i];
            }
        }
    }

    /// Largest absolute nodal difference over all components.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}
