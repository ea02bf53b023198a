//! One-dimensional HLL entropy-inequality predictor and its integration along
//! cell edges.
//!
//! For a Riemann problem `(u_l, u_r)` in direction `n` with wave-speed bounds
//! `a_l < a_r`, the predicted entropy rate is
//! `σ = (a_r - a_l) U(u_lr) + a_l U(u_l) - a_r U(u_r) - F(u_l) + F(u_r)`,
//! where `u_lr` is the HLL mean state and `F` the directional entropy flux.
//! `σ ≤ 0` and `σ = O(|u_l - u_r|²)`.

use crate::boundary::{BoundaryCondition, BoundaryMap};
use crate::error::Result;
use crate::euler::{ConsState, Gas};
use crate::field::Field;
use crate::mesh::{Mesh, Neighbor};
use crate::reference::ReferenceElement;

/// Integrated predictor of one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSigma {
    pub edge: usize,
    /// `∫_e σ ds`, never positive beyond rounding.
    pub value: f64,
    /// Share assigned to the interior cell. Equals `value` on interior edges
    /// and `value / 2` on boundary edges, whose correction denominator counts
    /// the interior cell twice.
    pub interior_share: f64,
}

fn sigma_with_speeds(gas: &Gas, ul: &ConsState, ur: &ConsState, n: [f64; 2], al: f64, ar: f64) -> Result<f64> {
    let mean = gas.hll_mean_state_with(ul, ur, n, al, ar)?;
    gas.checked_prim(&mean, || "HLL mean state".to_string())?;
    let (el, fl) = gas.entropy_pair(ul, n);
    let (er, fr) = gas.entropy_pair(ur, n);
    Ok((ar - al) * gas.entropy(&mean) + al * el - ar * er - fl + fr)
}

/// Pointwise predictor with Davis speeds.
pub fn sigma_1d(gas: &Gas, ul: &ConsState, ur: &ConsState, n: [f64; 2]) -> Result<f64> {
    if ul == ur {
        return Ok(0.0);
    }
    let (al, ar) = gas.wave_speeds(ul, ur, n);
    sigma_with_speeds(gas, ul, ur, n, al, ar)
}

/// Coupling boundary, `n` pointing out of the domain: supersonic outflow
/// dissipates outside and contributes nothing.
pub fn sigma_cbc(gas: &Gas, u_in: &ConsState, u_out: &ConsState, n: [f64; 2]) -> Result<f64> {
    if u_in == u_out {
        return Ok(0.0);
    }
    let (al, ar) = gas.wave_speeds(u_in, u_out, n);
    if al > 0.0 {
        return Ok(0.0);
    }
    sigma_with_speeds(gas, u_in, u_out, n, al, ar)
}

/// Reflective boundary: half the predictor of the mirror Riemann problem.
pub fn sigma_rbc(gas: &Gas, u_in: &ConsState, n: [f64; 2]) -> Result<f64> {
    Ok(0.5 * sigma_1d(gas, u_in, &gas.reflect(u_in, n), n)?)
}

pub fn boundary_sigma(gas: &Gas, bc: &BoundaryCondition, u_in: &ConsState, n: [f64; 2]) -> Result<f64> {
    match bc {
        BoundaryCondition::Reflective => sigma_rbc(gas, u_in, n),
        _ => sigma_cbc(gas, u_in, &bc.ghost(gas, u_in, n), n),
    }
}

/// `length · Σ_j ω_j σ_j` over the Gauss-Lobatto edge nodes.
pub fn integrate_along_edge(length: f64, weights: &[f64], values: &[f64]) -> f64 {
    length * weights.iter().zip(values).map(|(w, s)| w * s).sum::<f64>()
}

/// Nodal traces of the left cell of `edge` and of the neighbour or ghost,
/// both in the left cell's edge orientation, plus the left outward normal.
pub fn edge_traces(
    gas: &Gas,
    mesh: &Mesh,
    element: &ReferenceElement,
    field: &Field,
    edge: usize,
    bcs: &BoundaryMap,
) -> Result<(Vec<ConsState>, Vec<ConsState>, [f64; 2])> {
    let e = &mesh.edges[edge];
    let n = mesh.geometry(e.left).outward_normals[e.left_local];
    let inner: Vec<ConsState> = element.edge_nodes[e.left_local]
        .iter()
        .map(|&k| *field.node(e.left, k))
        .collect();
    let outer = match e.right {
        Neighbor::Cell { cell, local } => element.edge_nodes[local]
            .iter()
            .rev()
            .map(|&k| *field.node(cell, k))
            .collect(),
        Neighbor::Boundary(marker) => {
            let bc = bcs.get(marker)?;
            inner.iter().map(|u| bc.ghost(gas, u, n)).collect()
        }
    };
    Ok((inner, outer, n))
}

pub fn integrate_edge_sigma(
    gas: &Gas,
    mesh: &Mesh,
    element: &ReferenceElement,
    field: &Field,
    edge: usize,
    bcs: &BoundaryMap,
) -> Result<EdgeSigma> {
    let e = &mesh.edges[edge];
    let (inner, outer, n) = edge_traces(gas, mesh, element, field, edge, bcs)?;
    let length = mesh.geometry(e.left).edge_lengths[e.left_local];
    let values = match e.right {
        Neighbor::Cell { .. } => inner
            .iter()
            .zip(&outer)
            .map(|(a, b)| sigma_1d(gas, a, b, n))
            .collect::<Result<Vec<_>>>()?,
        Neighbor::Boundary(marker) => {
            let bc = bcs.get(marker)?;
            inner.iter().map(|a| boundary_sigma(gas, bc, a, n)).collect::<Result<Vec<_>>>()?
        }
    };
    let value = integrate_along_edge(length, &element.edge_quad_weights, &values);
    let interior_share = if e.is_boundary() { 0.5 * value } else { value };
    Ok(EdgeSigma {
        edge,
        value,
        interior_share,
    })
}
