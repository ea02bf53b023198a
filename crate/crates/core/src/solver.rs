//! Semidiscrete nodal DG operator with the entropy-rate correction.
//!
//! Per cell `M du/dt = Σ_m S^m f_m - Σ_m B^m f*_m`, evaluated with reference
//! matrices and per-cell affine factors. The correction adds `λ G u` per cell,
//! where `λ = λ_ED + λ_ER` restores the per-cell entropy inequality and then
//! enforces the dissipation predicted by the edge predictors.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::boundary::BoundaryMap;
use crate::error::Result;
use crate::euler::{ConsState, Gas, NVARS};
use crate::field::Field;
use crate::filter::{build_filter_generator, pocs_cubature, FilterGenerator, PositiveCubature, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::mesh::{Mesh, Neighbor};
use crate::predictor::{boundary_sigma, integrate_along_edge, sigma_1d, EdgeSigma};
use crate::reference::{ReferenceElement, REFERENCE_EDGE_LENGTHS};

pub const MAX_NODES: usize = 10;
pub const MAX_EDGE_NODES: usize = 4;

/// Denominators of the correction sizes closer to zero than this are
/// treated as locally constant data.
pub const DENOMINATOR_GUARD: f64 = 1e-13;

/// Row-major dense matrix applied to nodal state vectors.
#[derive(Debug, Clone)]
struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense {
    fn from(m: &DMatrix<f64>) -> Self {
        Dense {
            rows: m.nrows(),
            cols: m.ncols(),
            data: (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect(),
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

#[inline]
fn dot4(a: &ConsState, b: &ConsState) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Affine factors of every cell; together with the reference matrices they
/// give `M^Z = det M`, `S^{Z,m} = det (S^r ∂r/∂x_m + S^s ∂s/∂x_m)` and
/// `B^{Z,m} = B^m |e_m| / |ê_m|`.
#[derive(Debug, Clone)]
pub struct CellOperators {
    pub det: Vec<f64>,
    pub inv_jacobian: Vec<[[f64; 2]; 2]>,
    pub edge_lengths: Vec<[f64; 3]>,
    /// Positive cubature weights on the reference element.
    pub weights: Vec<f64>,
}

impl CellOperators {
    pub fn assemble(mesh: &Mesh, weights: &[f64]) -> Self {
        let n = mesh.n_cells();
        let mut ops = CellOperators {
            det: Vec::with_capacity(n),
            inv_jacobian: Vec::with_capacity(n),
            edge_lengths: Vec::with_capacity(n),
            weights: weights.to_vec(),
        };
        for c in 0..n {
            let g = mesh.geometry(c);
            ops.det.push(g.det_jacobian);
            ops.inv_jacobian.push(g.inv_jacobian);
            ops.edge_lengths.push(g.edge_lengths);
        }
        ops
    }

    pub fn mass(&self, element: &ReferenceElement, c: usize) -> DMatrix<f64> {
        &element.mass * self.det[c]
    }

    /// `S^{Z,m}` for direction `m` (0 = x, 1 = y).
    pub fn stiffness(&self, element: &ReferenceElement, c: usize, m: usize) -> DMatrix<f64> {
        let inv = &self.inv_jacobian[c];
        (&element.stiffness_r * inv[0][m] + &element.stiffness_s * inv[1][m]) * self.det[c]
    }

    pub fn boundary(&self, element: &ReferenceElement, c: usize, m: usize) -> DMatrix<f64> {
        &element.boundary[m] * (self.edge_lengths[c][m] / REFERENCE_EDGE_LENGTHS[m])
    }

    /// `|det J| w`, summing to the cell area.
    pub fn physical_weights(&self, c: usize) -> Vec<f64> {
        self.weights.iter().map(|w| w * self.det[c]).collect()
    }
}

/// Correction needed for the per-cell entropy inequality
/// `P + λ d ≤ -Φ`, with production `P`, outward entropy flux `Φ` and
/// filter dissipativity `d ≤ 0`.
pub fn lambda_ed(production: f64, outward_entropy_flux: f64, dissipativity: f64) -> f64 {
    let excess = production + outward_entropy_flux;
    if excess <= 0.0 || dissipativity >= -DENOMINATOR_GUARD {
        0.0
    } else {
        excess / -dissipativity
    }
}

/// `Σ σ_e / (d_Z + d_other)` over the cell's edges, given as
/// `(σ_e, d_Z + d_other)` pairs; degenerate denominators contribute nothing.
pub fn lambda_er(edges: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    edges
        .into_iter()
        .filter(|&(_, den)| den < -DENOMINATOR_GUARD)
        .map(|(sigma, den)| (sigma / den).max(0.0))
        .sum()
}

/// `λ_ER` less the share already covered by a cell that dissipates more than
/// its cell entropy inequality requires.
pub fn lambda_er_net(production: f64, outward_entropy_flux: f64, dissipativity: f64, er: f64) -> f64 {
    let surplus = -(production + outward_entropy_flux);
    if surplus > 0.0 && dissipativity < -DENOMINATOR_GUARD {
        (er - surplus / -dissipativity).max(0.0)
    } else {
        er
    }
}

/// `du/dt += λ G u` on one cell.
pub fn apply_correction(rhs: &mut [ConsState], u: &[ConsState], lambda: f64, g: &DMatrix<f64>) {
    if lambda == 0.0 {
        return;
    }
    for (k, r) in rhs.iter_mut().enumerate() {
        for (l, ul) in u.iter().enumerate() {
            let gkl = lambda * g[(k, l)];
            for i in 0..NVARS {
                r[i] += gkl * ul[i];
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct EdgeFluxes {
    flux: [ConsState; MAX_EDGE_NODES],
    entropy_flux: [f64; MAX_EDGE_NODES],
    sigma: EdgeSigma,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellEntropy {
    /// `Σ_k w_k ⟨∂U/∂u, du/dt⟩` of the uncorrected residual.
    pub production: f64,
    /// Outward entropy flux `Σ_m ∫ F*`.
    pub outward_flux: f64,
    /// `⟨∂U/∂u, Gu⟩_w`.
    pub dissipativity: f64,
}

/// Entropy and conservation bookkeeping of one operator evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageDiagnostics {
    /// `Σ_Z dE^Z/dt` of the uncorrected operator.
    pub entropy_rate_uncorrected: f64,
    /// `Σ_Z dE^Z/dt` after correction.
    pub entropy_rate: f64,
    /// `Σ_θ σ^θ`: interior edges in full, boundary edges by their interior share.
    pub sigma_total: f64,
    /// Entropy flux entering through the boundary, `-Σ_b ∫ F*`.
    pub boundary_entropy_inflow: f64,
    /// Largest `P_Z + Φ_Z` after correction over all cells.
    pub max_cell_excess: f64,
    /// Outward flux of each conserved quantity through the boundary.
    pub boundary_flux: ConsState,
    pub lambda_ed_sum: f64,
    pub lambda_er_sum: f64,
    pub max_lambda: f64,
    pub corrected_cells: usize,
}

impl StageDiagnostics {
    /// `Σ_Z dE^Z/dt - Σ σ - boundary inflow`; the scheme keeps this ≤ 0.
    pub fn budget_excess(&self) -> f64 {
        self.entropy_rate - self.sigma_total - self.boundary_entropy_inflow
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    Off,
    /// `λ_ED + λ_ER`, reduced by the dissipation a cell already supplies
    /// beyond its cell entropy inequality.
    On,
    /// `λ_ED + λ_ER`.
    Additive,
    /// `λ_ED` only.
    CellEntropyOnly,
    /// `λ_ER` only.
    EntropyRateOnly,
}

/// Everything needed to evaluate the corrected DG operator on one mesh.
pub struct Solver {
    pub gas: Gas,
    pub mesh: Mesh,
    pub element: ReferenceElement,
    pub cubature: PositiveCubature,
    pub filter: FilterGenerator,
    pub ops: CellOperators,
    pub bcs: BoundaryMap,
    pub correction: Correction,
    dr: Dense,
    ds: Dense,
    /// `M⁻¹ B^m` restricted to the columns of edge `m`, scaled by `1/|ê_m|`.
    lift: [Dense; 3],
    g: Dense,
}

impl Solver {
    pub fn new(mesh: Mesh, degree: usize, gas: Gas, bcs: BoundaryMap) -> Result<Self> {
        let element = ReferenceElement::new(degree)?;
        let n = element.n_nodes();
        let w0 = vec![0.5 / n as f64; n];
        let cubature = pocs_cubature(&element, &w0, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
        let filter = build_filter_generator(&element, &cubature)?;
        bcs.check_covers(&mesh)?;
        let ops = CellOperators::assemble(&mesh, &cubature.weights);
        let minv = element
            .mass
            .clone()
            .try_inverse()
            .expect("reference mass matrix is invertible");
        let dr = Dense::from(&(&minv * &element.stiffness_r));
        let ds = Dense::from(&(&minv * &element.stiffness_s));
        let lift = std::array::from_fn(|m| {
            let full = &minv * &element.boundary[m] / REFERENCE_EDGE_LENGTHS[m];
            let cols = &element.edge_nodes[m];
            Dense::from(&DMatrix::from_fn(n, cols.len(), |i, j| full[(i, cols[j])]))
        });
        let g = Dense::from(&filter.generator);
        Ok(Solver {
            gas,
            mesh,
            element,
            cubature,
            filter,
            ops,
            bcs,
            correction: Correction::On,
            dr,
            ds,
            lift,
            g,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.element.n_nodes()
    }

    pub fn degree(&self) -> usize {
        self.element.degree
    }

    fn edge_fluxes(&self, field: &Field, edge: usize) -> Result<EdgeFluxes> {
        let gas = &self.gas;
        let e = &self.mesh.edges[edge];
        let geo = self.mesh.geometry(e.left);
        let n = geo.outward_normals[e.left_local];
        let nodes = &self.element.edge_nodes[e.left_local];
        let ne = nodes.len();
        let mut out = EdgeFluxes {
            flux: [[0.0; NVARS]; MAX_EDGE_NODES],
            entropy_flux: [0.0; MAX_EDGE_NODES],
            sigma: EdgeSigma {
                edge,
                value: 0.0,
                interior_share: 0.0,
            },
        };
        let mut sig = [0.0; MAX_EDGE_NODES];
        for j in 0..ne {
            let ul = field.node(e.left, nodes[j]);
            match e.right {
                Neighbor::Cell { cell, local } => {
                    let ur = field.node(cell, self.element.edge_nodes[local][ne - 1 - j]);
                    (out.flux[j], out.entropy_flux[j]) = gas.hll(ul, ur, n);
                    sig[j] = sigma_1d(gas, ul, ur, n)?;
                }
                Neighbor::Boundary(marker) => {
                    let bc = self.bcs.get(marker)?;
                    let ur = bc.ghost(gas, ul, n);
                    (out.flux[j], out.entropy_flux[j]) = gas.hll(ul, &ur, n);
                    sig[j] = boundary_sigma(gas, bc, ul, n)?;
                }
            }
        }
        let value = integrate_along_edge(geo.edge_lengths[e.left_local], &self.element.edge_quad_weights, &sig[..ne]);
        out.sigma.value = value;
        out.sigma.interior_share = if e.is_boundary() { 0.5 * value } else { value };
        Ok(out)
    }

    /// Uncorrected residual of one cell and its entropy quantities.
    fn cell_residual(&self, field: &Field, edges: &[EdgeFluxes], c: usize, out: &mut [ConsState]) -> CellEntropy {
        let n = self.n_nodes();
        let u = field.cell(c);
        let inv = &self.ops.inv_jacobian[c];
        let det = self.ops.det[c];
        // The operator annihilates constant fluxes, so the flux of node 0 is
        // subtracted throughout to keep rounding proportional to variations.
        let (f0, g0) = self.gas.fluxes(&u[0]);
        let mut fr = [[0.0; NVARS]; MAX_NODES];
        let mut fs = [[0.0; NVARS]; MAX_NODES];
        for l in 1..n {
            let (f, g) = self.gas.fluxes(&u[l]);
            for i in 0..NVARS {
                let (df, dg) = (f[i] - f0[i], g[i] - g0[i]);
                fr[l][i] = inv[0][0] * df + inv[0][1] * dg;
                fs[l][i] = inv[1][0] * df + inv[1][1] * dg;
            }
        }
        for k in 0..n {
            let (a, b) = (self.dr.row(k), self.ds.row(k));
            let mut r = [0.0; NVARS];
            for l in 0..n {
                for i in 0..NVARS {
                    r[i] += a[l] * fr[l][i] + b[l] * fs[l][i];
                }
            }
            out[k] = r;
        }
        let mut outward_flux = 0.0;
        let wq = &self.element.edge_quad_weights;
        for m in 0..3 {
            let e_idx = self.mesh.cell_edges[c][m];
            let e = &self.mesh.edges[e_idx];
            let ef = &edges[e_idx];
            let own = e.left == c && e.left_local == m;
            let lift = &self.lift[m];
            let ne = lift.cols;
            let len = self.ops.edge_lengths[c][m];
            let scale = len / det;
            let normal = self.mesh.geometry(c).outward_normals[m];
            let mut fstar = [[0.0; NVARS]; MAX_EDGE_NODES];
            let mut phi = 0.0;
            for j in 0..ne {
                let (src, sign) = if own { (j, 1.0) } else { (ne - 1 - j, -1.0) };
                for i in 0..NVARS {
                    fstar[j][i] = sign * ef.flux[src][i] - (f0[i] * normal[0] + g0[i] * normal[1]);
                }
                phi += wq[j] * sign * ef.entropy_flux[src];
            }
            outward_flux += len * phi;
            for k in 0..lift.rows {
                let row = lift.row(k);
                for j in 0..ne {
                    let a = scale * row[j];
                    for i in 0..NVARS {
                        out[k][i] -= a * fstar[j][i];
                    }
                }
            }
        }
        let mut production = 0.0;
        let mut dissipativity = 0.0;
        for k in 0..n {
            let v = self.gas.entropy_variables(&u[k]);
            let wk = det * self.ops.weights[k];
            production += wk * dot4(&v, &out[k]);
            dissipativity += wk * dot4(&v, &self.apply_g_row(u, k));
        }
        CellEntropy {
            production,
            outward_flux,
            dissipativity,
        }
    }

    #[inline]
    fn apply_g_row(&self, u: &[ConsState], k: usize) -> ConsState {
        let row = self.g.row(k);
        let mut r = [0.0; NVARS];
        for (l, ul) in u.iter().enumerate() {
            for i in 0..NVARS {
                r[i] += row[l] * ul[i];
            }
        }
        r
    }

    /// Corrected time derivative of `field` with its stage diagnostics.
    pub fn rhs(&self, field: &Field) -> Result<(Vec<ConsState>, StageDiagnostics)> {
        let n = self.n_nodes();
        let n_cells = self.mesh.n_cells();
        let edges: Vec<EdgeFluxes> = (0..self.mesh.edges.len())
            .into_par_iter()
            .map(|e| self.edge_fluxes(field, e))
            .collect::<Result<_>>()?;
        let mut rhs = vec![[0.0; NVARS]; n_cells * n];
        let cells: Vec<CellEntropy> = rhs
            .par_chunks_mut(n)
            .enumerate()
            .map(|(c, out)| self.cell_residual(field, &edges, c, out))
            .collect();

        let split: Vec<(f64, f64)> = if self.correction != Correction::Off {
            (0..n_cells)
                .into_par_iter()
                .map(|c| self.cell_lambda(c, &cells, &edges))
                .collect()
        } else {
            vec![(0.0, 0.0); n_cells]
        };
        let lambdas: Vec<f64> = split.iter().map(|(a, b)| a + b).collect();
        if self.correction != Correction::Off {
            rhs.par_chunks_mut(n).enumerate().for_each(|(c, out)| {
                let lambda = lambdas[c];
                if lambda > 0.0 {
                    let u = field.cell(c);
                    for (k, r) in out.iter_mut().enumerate() {
                        let gu = self.apply_g_row(u, k);
                        for i in 0..NVARS {
                            r[i] += lambda * gu[i];
                        }
                    }
                }
            });
        }

        let mut d = StageDiagnostics {
            max_cell_excess: f64::NEG_INFINITY,
            ..Default::default()
        };
        for (c, ce) in cells.iter().enumerate() {
            let lambda = lambdas[c];
            d.lambda_ed_sum += split[c].0;
            d.lambda_er_sum += split[c].1;
            d.entropy_rate_uncorrected += ce.production;
            let corrected = ce.production + lambda * ce.dissipativity;
            d.entropy_rate += corrected;
            d.max_cell_excess = d.max_cell_excess.max(corrected + ce.outward_flux);
            d.max_lambda = d.max_lambda.max(lambda);
            if lambda > 0.0 {
                d.corrected_cells += 1;
            }
        }
        let wq = &self.element.edge_quad_weights;
        for (e_idx, e) in self.mesh.edges.iter().enumerate() {
            let ef = &edges[e_idx];
            if e.is_boundary() {
                d.sigma_total += ef.sigma.interior_share;
                let len = self.mesh.geometry(e.left).edge_lengths[e.left_local];
                for j in 0..wq.len() {
                    d.boundary_entropy_inflow -= len * wq[j] * ef.entropy_flux[j];
                    for i in 0..NVARS {
                        d.boundary_flux[i] += len * wq[j] * ef.flux[j][i];
                    }
                }
            } else {
                d.sigma_total += ef.sigma.value;
            }
        }
        Ok((rhs, d))
    }

    /// `(λ_ED, λ_ER)` of cell `c`.
    fn cell_lambda(&self, c: usize, cells: &[CellEntropy], edges: &[EdgeFluxes]) -> (f64, f64) {
        let ce = &cells[c];
        let ed = lambda_ed(ce.production, ce.outward_flux, ce.dissipativity);
        let er = lambda_er((0..3).map(|m| {
            let e_idx = self.mesh.cell_edges[c][m];
            let e = &self.mesh.edges[e_idx];
            let sigma = edges[e_idx].sigma.value;
            let other = match e.right {
                Neighbor::Cell { cell, .. } => {
                    if cell == c {
                        cells[e.left].dissipativity
                    } else {
                        cells[cell].dissipativity
                    }
                }
                Neighbor::Boundary(_) => ce.dissipativity,
            };
            (sigma, ce.dissipativity + other)
        }));
        match self.correction {
            Correction::Off => (0.0, 0.0),
            Correction::On => {
                (ed, lambda_er_net(ce.production, ce.outward_flux, ce.dissipativity, er))
            }
            Correction::Additive => (ed, er),
            Correction::CellEntropyOnly => (ed, 0.0),
            Correction::EntropyRateOnly => (0.0, er),
        }
    }

    /// Per-cell entropy production, outward entropy flux and filter dissipativity.
    pub fn cell_entropy(&self, field: &Field) -> Result<Vec<CellEntropy>> {
        let n = self.n_nodes();
        let edges: Vec<EdgeFluxes> = (0..self.mesh.edges.len())
            .into_par_iter()
            .map(|e| self.edge_fluxes(field, e))
            .collect::<Result<_>>()?;
        let mut rhs = vec![[0.0; NVARS]; self.mesh.n_cells() * n];
        Ok(rhs
            .par_chunks_mut(n)
            .enumerate()
            .map(|(c, out)| self.cell_residual(field, &edges, c, out))
            .collect())
    }

    /// Uncorrected time derivative.
    pub fn rhs_uncorrected(&self, field: &Field) -> Result<Vec<ConsState>> {
        let n = self.n_nodes();
        let edges: Vec<EdgeFluxes> = (0..self.mesh.edges.len())
            .into_par_iter()
            .map(|e| self.edge_fluxes(field, e))
            .collect::<Result<_>>()?;
        let mut rhs = vec![[0.0; NVARS]; self.mesh.n_cells() * n];
        rhs.par_chunks_mut(n).enumerate().for_each(|(c, out)| {
            self.cell_residual(field, &edges, c, out);
        });
        Ok(rhs)
    }

    /// `Σ_Z Σ_k |det J| w_k U(u_k)`, summed in cell order.
    pub fn total_entropy(&self, field: &Field) -> f64 {
        let cells: Vec<f64> = (0..self.mesh.n_cells())
            .into_par_iter()
            .map(|c| {
                let u = field.cell(c);
                self.ops.det[c] * (0..u.len()).map(|k| self.ops.weights[k] * self.gas.entropy(&u[k])).sum::<f64>()
            })
            .collect();
        cells.iter().sum()
    }

    /// Cubature integral of each conserved variable.
    pub fn totals(&self, states: &[ConsState]) -> ConsState {
        let n = self.n_nodes();
        let mut t = [0.0; NVARS];
        for (c, cell) in states.chunks(n).enumerate() {
            for (k, u) in cell.iter().enumerate() {
                let w = self.ops.det[c] * self.ops.weights[k];
                for i in 0..NVARS {
                    t[i] += w * u[i];
                }
            }
        }
        t
    }

    /// `w_phys`-weighted entropy derivative `Σ_k w_k ⟨∂U/∂u, r_k⟩` of one cell.
    pub fn cell_entropy_rate(&self, field: &Field, rhs: &[ConsState], c: usize) -> f64 {
        let n = self.n_nodes();
        let u = field.cell(c);
        (0..n)
            .map(|k| self.ops.det[c] * self.ops.weights[k] * dot4(&self.gas.entropy_variables(&u[k]), &rhs[c * n + k]))
            .sum()
    }
}
