//! Nodal basis and exact Gramian matrices on the reference triangle
//! `(0,0), (1,0), (0,1)` for polynomial degrees 1 and 3.
//!
//! All integrals are evaluated exactly from monomial moments,
//! `∫ x^a y^b = a! b! / (a + b + 2)!`, so the matrices carry no quadrature
//! error. Edges are numbered like the local edges of a mesh cell: edge 0 runs
//! `(0,0) -> (1,0)`, edge 1 `(1,0) -> (0,1)`, edge 2 `(0,1) -> (0,0)`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mesh::Point;

/// Outward unit normals of the reference edges.
pub const REFERENCE_NORMALS: [Point; 3] = [
    [0.0, -1.0],
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
    [-1.0, 0.0],
];

/// Lengths of the reference edges.
pub const REFERENCE_EDGE_LENGTHS: [f64; 3] = [1.0, std::f64::consts::SQRT_2, 1.0];

const VERTICES: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

pub fn check_degree(p: usize) -> Result<()> {
    match p {
        1 | 3 => Ok(()),
        _ => Err(Error::UnsupportedDegree(p)),
    }
}

pub fn n_nodes(p: usize) -> usize {
    (p + 1) * (p + 2) / 2
}

/// Gauss-Lobatto points and weights on `[0, 1]` with `p + 1` points.
pub fn edge_quadrature(p: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_degree(p)?;
    Ok(match p {
        1 => (vec![0.0, 1.0], vec![0.5, 0.5]),
        _ => {
            let d = 0.5 / 5f64.sqrt();
            (
                vec![0.0, 0.5 - d, 0.5 + d, 1.0],
                vec![1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0],
            )
        }
    })
}

fn point_on_edge(m: usize, t: f64) -> Point {
    let a = VERTICES[m];
    let b = VERTICES[(m + 1) % 3];
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Element nodes: the three vertices, then the interior Gauss-Lobatto points
/// of edges 0, 1, 2 (in edge direction), then for `p = 3` the barycenter.
pub fn build_nodes(p: usize) -> Result<Vec<Point>> {
    let (params, _) = edge_quadrature(p)?;
    let mut nodes = VERTICES.to_vec();
    for m in 0..3 {
        for &t in &params[1..p] {
            nodes.push(point_on_edge(m, t));
        }
    }
    if p == 3 {
        nodes.push([1.0 / 3.0, 1.0 / 3.0]);
    }
    Ok(nodes)
}

/// Indices of the `p + 1` nodes on each edge, ordered along the edge.
pub fn edge_node_indices(p: usize) -> [Vec<usize>; 3] {
    std::array::from_fn(|m| {
        let mut idx = vec![m];
        idx.extend((0..p - 1).map(|k| 3 + m * (p - 1) + k));
        idx.push((m + 1) % 3);
        idx
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `∫_T x^a y^b` over the reference triangle.
pub fn monomial_integral(a: u32, b: u32) -> f64 {
    factorial(a) * factorial(b) / factorial(a + b + 2)
}

/// `∫ x^a y^b ds` along reference edge `m` (arc length).
pub fn monomial_edge_integral(m: usize, a: u32, b: u32) -> f64 {
    match m {
        0 => {
            if b == 0 {
                1.0 / f64::from(a + 1)
            } else {
                0.0
            }
        }
        1 => std::f64::consts::SQRT_2 * factorial(a) * factorial(b) / factorial(a + b + 1),
        _ => {
            if a == 0 {
                1.0 / f64::from(b + 1)
            } else {
                0.0
            }
        }
    }
}

/// Nodal basis in monomial form: `φ_l = Σ_j coeffs[(j, l)] x^a_j y^b_j`.
#[derive(Debug, Clone)]
pub struct Basis {
    pub degree: usize,
    pub monomials: Vec<(u32, u32)>,
    pub coeffs: DMatrix<f64>,
    /// 2-norm condition number of the generalized Vandermonde matrix.
    pub condition: f64,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    fn monomial_values(&self, x: Point) -> Vec<f64> {
        self.monomials
            .iter()
            .map(|&(a, b)| x[0].powi(a as i32) * x[1].powi(b as i32))
            .collect()
    }

    /// Values of all basis functions at `x`.
    pub fn eval(&self, x: Point) -> Vec<f64> {
        let m = self.monomial_values(x);
        (0..self.len())
            .map(|l| (0..self.len()).map(|j| self.coeffs[(j, l)] * m[j]).sum())
            .collect()
    }

    /// Reference-coordinate gradients of all basis functions at `x`.
    pub fn grad(&self, x: Point) -> Vec<[f64; 2]> {
        let dm: Vec<[f64; 2]> = self
            .monomials
            .iter()
            .map(|&(a, b)| {
                let dx = if a == 0 { 0.0 } else { f64::from(a) * x[0].powi(a as i32 - 1) * x[1].powi(b as i32) };
                let dy = if b == 0 { 0.0 } else { f64::from(b) * x[0].powi(a as i32) * x[1].powi(b as i32 - 1) };
                [dx, dy]
            })
            .collect();
        (0..self.len())
            .map(|l| {
                let mut g = [0.0; 2];
                for (j, d) in dm.iter().enumerate() {
                    g[0] += self.coeffs[(j, l)] * d[0];
                    g[1] += self.coeffs[(j, l)] * d[1];
                }
                g
            })
            .collect()
    }

    /// Exact integrals `∫ φ_l` over the reference triangle.
    pub fn integrals(&self) -> Vec<f64> {
        (0..self.len())
            .map(|l| {
                self.monomials
                    .iter()
                    .enumerate()
                    .map(|(j, &(a, b))| self.coeffs[(j, l)] * monomial_integral(a, b))
                    .sum()
            })
            .collect()
    }
}

pub fn monomials(p: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 0..=p as u32 {
        for b in 0..=total {
            out.push((total - b, b));
        }
    }
    out
}

/// Inverts the monomial Vandermonde matrix at `nodes`.
pub fn build_basis(p: usize, nodes: &[Point]) -> Result<Basis> {
    check_degree(p)?;
    let mons = monomials(p);
    let n = mons.len();
    if nodes.len() != n {
        return Err(Error::SingularVandermonde);
    }
    let v = DMatrix::from_fn(n, n, |k, j| {
        let (a, b) = mons[j];
        nodes[k][0].powi(a as i32) * nodes[k][1].powi(b as i32)
    });
    let sv = v.clone().svd(false, false).singular_values;
    let smin = sv.min();
    if smin <= 1e-12 * sv.max() {
        return Err(Error::SingularVandermonde);
    }
    // V[k, j] = m_j(x_k); φ_l(x_k) = Σ_j V[k, j] C[j, l] = δ_kl  =>  C = V⁻¹
    let coeffs = v.try_inverse().ok_or(Error::SingularVandermonde)?;
    Ok(Basis {
        degree: p,
        monomials: mons,
        coeffs,
        condition: sv.max() / smin,
    })
}

/// Exact reference-element Gramians.
#[derive(Debug, Clone)]
pub struct Gramians {
    pub mass: DMatrix<f64>,
    pub stiffness_r: DMatrix<f64>,
    pub stiffness_s: DMatrix<f64>,
    pub boundary: [DMatrix<f64>; 3],
}

/// `M_kl = ⟨φ_k, φ_l⟩`, `S^r_kl = ⟨∂φ_k/∂r, φ_l⟩`, `S^s_kl = ⟨∂φ_k/∂s, φ_l⟩`,
/// `B^m_kl = ⟨φ_k, φ_l⟩` on edge `m`.
pub fn build_gramians(basis: &Basis) -> Gramians {
    let n = basis.len();
    let mons = &basis.monomials;
    let c = &basis.coeffs;
    let edge_nodes = edge_node_indices(basis.degree);
    // bilinear form over monomial pairs, pulled back to the nodal basis
    let assemble = |pair: &dyn Fn(usize, usize) -> f64| {
        let raw = DMatrix::from_fn(n, n, |i, j| pair(i, j));
        c.transpose() * raw * c
    };
    let mass = assemble(&|i, j| monomial_integral(mons[i].0 + mons[j].0, mons[i].1 + mons[j].1));
    let mass = (&mass + mass.transpose()) * 0.5;
    let stiffness_r = assemble(&|i, j| {
        let (a, b) = mons[i];
        if a == 0 {
            0.0
        } else {
            f64::from(a) * monomial_integral(a - 1 + mons[j].0, b + mons[j].1)
        }
    });
    let stiffness_s = assemble(&|i, j| {
        let (a, b) = mons[i];
        if b == 0 {
            0.0
        } else {
            f64::from(b) * monomial_integral(a + mons[j].0, b - 1 + mons[j].1)
        }
    });
    let boundary = std::array::from_fn(|m| {
        let b = assemble(&|i, j| monomial_edge_integral(m, mons[i].0 + mons[j].0, mons[i].1 + mons[j].1));
        // basis functions of off-edge nodes vanish identically on the edge
        let on_edge = &edge_nodes[m];
        DMatrix::from_fn(n, n, |i, j| {
            if on_edge.contains(&i) && on_edge.contains(&j) {
                0.5 * (b[(i, j)] + b[(j, i)])
            } else {
                0.0
            }
        })
    });
    Gramians {
        mass,
        stiffness_r,
        stiffness_s,
        boundary,
    }
}

/// Everything the solver needs from the reference triangle.
#[derive(Debug, Clone)]
pub struct ReferenceElement {
    pub degree: usize,
    pub nodes: Vec<Point>,
    pub basis: Basis,
    pub mass: DMatrix<f64>,
    pub stiffness_r: DMatrix<f64>,
    pub stiffness_s: DMatrix<f64>,
    pub boundary: [DMatrix<f64>; 3],
    pub edge_nodes: [Vec<usize>; 3],
    /// Gauss-Lobatto parameters of the edge nodes on `[0, 1]`.
    pub edge_params: Vec<f64>,
    pub edge_quad_weights: Vec<f64>,
}

impl ReferenceElement {
    pub fn new(p: usize) -> Result<Self> {
        let nodes = build_nodes(p)?;
        let basis = build_basis(p, &nodes)?;
        let g = build_gramians(&basis);
        let (edge_params, edge_quad_weights) = edge_quadrature(p)?;
        Ok(ReferenceElement {
            degree: p,
            nodes,
            basis,
            mass: g.mass,
            stiffness_r: g.stiffness_r,
            stiffness_s: g.stiffness_s,
            boundary: g.boundary,
            edge_nodes: edge_node_indices(p),
            edge_params,
            edge_quad_weights,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edge_nodes(&self) -> usize {
        self.degree + 1
    }

    /// Subtriangles connecting the nodes, used for plotting (`p²` of them).
    pub fn sub_triangles(&self) -> Vec<[usize; 3]> {
        match self.degree {
            1 => vec![[0, 1, 2]],
            _ => {
                // lattice positions (i along edge 0, j along edge 2) of the nodes
                let grid = |i: usize, j: usize| -> usize {
                    match (i, j) {
                        (0, 0) => 0,
                        (3, 0) => 1,
                        (0, 3) => 2,
                        (1, 0) => 3,
                        (2, 0) => 4,
                        (2, 1) => 5,
                        (1, 2) => 6,
                        (0, 2) => 7,
                        (0, 1) => 8,
                        (1, 1) => 9,
                        _ => unreachable!(),
                    }
                };
                let mut out = Vec::with_capacity(9);
                for j in 0..3 {
                    for i in 0..3 - j {
                        out.push([grid(i, j), grid(i + 1, j), grid(i, j + 1)]);
                        if i + j < 2 {
                            out.push([grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)]);
                        }
                    }
                }
                out
            }
        }
    }

    /// Writes every matrix as CSV into `dir` for cross-checking.
    pub fn write_csv(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut files = vec![
            ("mass", &self.mass),
            ("stiffness_r", &self.stiffness_r),
            ("stiffness_s", &self.stiffness_s),
        ];
        let names = ["boundary_0", "boundary_1", "boundary_2"];
        for (m, b) in self.boundary.iter().enumerate() {
            files.push((names[m], b));
        }
        for (name, mat) in files {
            write_matrix_csv(dir.join(format!("{name}.csv")), mat)?;
        }
        let nodes = DMatrix::from_fn(self.n_nodes(), 2, |k, d| self.nodes[k][d]);
        write_matrix_csv(dir.join("nodes.csv"), &nodes)
    }
}

pub fn write_matrix_csv(path: impl AsRef<Path>, m: &DMatrix<f64>) -> Result<()> {
    let path = path.as_ref();
    let mut s = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:.17e}", m[(i, j)])).collect();
        let _ = writeln!(s, "{}", row.join(","));
    }
    std::fs::write(path, s).map_err(|e| Error::io(path, e))
}
