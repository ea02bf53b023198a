//! Positive cubature on the element nodes and the entropy-dissipative filter
//! generator built from the exponential of a discrete Laplacian.
//!
//! The cubature is found by alternating projections onto the positive orthant
//! and the exactness hyperplanes `Σ_i w_i φ_k(x_i) = ∫ φ_k`. The filter
//! `C(t) = e^{tL}`, `L = -M⁻¹Q`, preserves constants and the `w`-weighted mean
//! for every `t`; the smallest `t*` making it entrywise nonnegative is found by
//! bisection, and `G = (C(t*) - I) / t*` is the correction direction.

use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::reference::{monomial_integral, write_matrix_csv, ReferenceElement};

pub const DEFAULT_MAX_ITER: usize = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Weights may dip this far below zero and still count as positive.
pub const WEIGHT_SLACK: f64 = 1e-13;

/// Entrywise tolerance for a nonnegative filter matrix.
pub const POSITIVITY_TOL: f64 = -1e-12;

/// Filter times below this are treated as the degenerate identity filter.
pub const T_MIN: f64 = 1e-8;
pub const T_MAX: f64 = 1e12;

/// Relative width at which the positivity-time bisection stops.
const BISECTION_RTOL: f64 = 1e-6;

/// Threshold on the filter and conservation residuals before startup aborts.
const ABORT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PositiveCubature {
    pub weights: Vec<f64>,
    /// Full projection sweeps performed.
    pub iterations: usize,
    /// Largest moment residual at exit.
    pub residual: f64,
}

fn moment_residual(rows: &[Vec<f64>], rhs: &[f64], w: &[f64]) -> f64 {
    rows.iter()
        .zip(rhs)
        .map(|(a, b)| (dot(a, w) - b).abs())
        .fold(0.0, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projection onto convex sets: `w <- P_N ∘ … ∘ P_1 ∘ P w` until every moment
/// is exact to `tol` and no weight is below `-1e-13`.
pub fn pocs_cubature(element: &ReferenceElement, w0: &[f64], max_iter: usize, tol: f64) -> Result<PositiveCubature> {
    let n = element.n_nodes();
    assert_eq!(w0.len(), n, "initial weights have the wrong length");
    // rows[k][i] = φ_k(x_i)
    let values: Vec<Vec<f64>> = element.nodes.iter().map(|x| element.basis.eval(*x)).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|k| (0..n).map(|i| values[i][k]).collect()).collect();
    let rhs = element.basis.integrals();
    let norms: Vec<f64> = rows.iter().map(|a| dot(a, a)).collect();

    let mut w = w0.to_vec();
    let converged = |w: &[f64]| {
        let r = moment_residual(&rows, &rhs, w);
        let min = w.iter().cloned().fold(f64::INFINITY, f64::min);
        (r < tol && min > -WEIGHT_SLACK, r, min)
    };
    let mut state = converged(&w);
    let mut iterations = 0;
    while !state.0 {
        if iterations == max_iter {
            return Err(Error::CubatureNotConverged {
                iterations,
                residual: state.1,
                min_weight: state.2,
            });
        }
        for x in w.iter_mut() {
            *x = x.max(0.0);
        }
        for k in 0..n {
            let defect = (dot(&rows[k], &w) - rhs[k]) / norms[k];
            for (x, a) in w.iter_mut().zip(&rows[k]) {
                *x -= defect * a;
            }
        }
        iterations += 1;
        state = converged(&w);
    }
    Ok(PositiveCubature {
        weights: w,
        iterations,
        residual: state.1,
    })
}

/// `Q_kl = Σ_m ⟨∂φ_k/∂x_m, ∂φ_l/∂x_m⟩` on the reference triangle (exact).
pub fn laplacian_form(element: &ReferenceElement) -> DMatrix<f64> {
    let basis = &element.basis;
    let mons = &basis.monomials;
    let n = basis.len();
    // ∫ ∂m_i/∂r ∂m_j/∂r + ∂m_i/∂s ∂m_j/∂s
    let raw = DMatrix::from_fn(n, n, |i, j| {
        let ((ai, bi), (aj, bj)) = (mons[i], mons[j]);
        let mut v = 0.0;
        if ai > 0 && aj > 0 {
            v += f64::from(ai * aj) * monomial_integral(ai + aj - 2, bi + bj);
        }
        if bi > 0 && bj > 0 {
            v += f64::from(bi * bj) * monomial_integral(ai + aj, bi + bj - 2);
        }
        v
    });
    let q = basis.coeffs.transpose() * raw * &basis.coeffs;
    (&q + q.transpose()) * 0.5
}

/// `L = -M⁻¹ Q`, the Laplacian without surface terms.
pub fn laplacian_generator(element: &ReferenceElement) -> DMatrix<f64> {
    let q = laplacian_form(element);
    let chol = element
        .mass
        .clone()
        .cholesky()
        .expect("reference mass matrix is positive definite");
    -chol.solve(&q)
}

pub fn min_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn is_nonnegative(m: &DMatrix<f64>) -> bool {
    min_entry(m) >= POSITIVITY_TOL
}

/// Smallest `t >= T_MIN` with `e^{tL}` entrywise nonnegative: an upper
/// bracket is doubled from `t = 1`, then bisected.
pub fn find_positivity_time(l: &DMatrix<f64>) -> Result<f64> {
    let filter = |t: f64| expm(&(l * t));
    if is_nonnegative(&filter(T_MIN)) {
        return Ok(T_MIN);
    }
    let mut lo = T_MIN;
    let mut hi = 1.0;
    while !is_nonnegative(&filter(hi)) {
        lo = hi;
        hi *= 2.0;
        if hi > T_MAX {
            return Err(Error::NoPositiveFilter { t_max: T_MAX });
        }
    }
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if is_nonnegative(&filter(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `(e^{tL}, (e^{tL} - I) / t)`, the latter as `φ₁(tL) L` so that small `t`
/// does not cancel: `exp([[tL, I], [0, 0]])` holds `φ₁(tL)` in its upper
/// right block.
pub fn filter_and_generator(l: &DMatrix<f64>, t: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = l.nrows();
    let mut aug = DMatrix::zeros(2 * n, 2 * n);
    aug.view_mut((0, 0), (n, n)).copy_from(&(l * t));
    aug.view_mut((0, n), (n, n)).fill_with_identity();
    let e = expm(&aug);
    let filter = e.view((0, 0), (n, n)).into_owned();
    let phi1 = e.view((0, n), (n, n)).into_owned();
    (filter, phi1 * l)
}

/// The positive conservative filter `C(t*)` and its generator `G`.
#[derive(Debug, Clone)]
pub struct FilterGenerator {
    pub laplacian_generator: DMatrix<f64>,
    pub positivity_time: f64,
    pub filter: DMatrix<f64>,
    pub generator: DMatrix<f64>,
    /// The cubature weights the filter is conservative for.
    pub weights: Vec<f64>,
}

impl FilterGenerator {
    pub fn n(&self) -> usize {
        self.generator.nrows()
    }

    /// Largest deviation of a row sum of `C(t*)` from 1.
    pub fn row_sum_defect(&self) -> f64 {
        self.filter
            .row_iter()
            .map(|r| (r.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|wᵀ C(t*) - wᵀ|`, with its column.
    pub fn conservation_defect(&self) -> (f64, usize) {
        let w = DVector::from_column_slice(&self.weights);
        let wc = self.filter.tr_mul(&w);
        (0..self.n())
            .map(|l| ((wc[l] - w[l]).abs(), l))
            .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a })
    }

    /// Writes `w.csv`, `L.csv`, `C.csv` and `G.csv` into `dir`.
    pub fn write_csv(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let w = DMatrix::from_column_slice(self.n(), 1, &self.weights);
        write_matrix_csv(dir.join("w.csv"), &w)?;
        write_matrix_csv(dir.join("L.csv"), &self.laplacian_generator)?;
        write_matrix_csv(dir.join("C.csv"), &self.filter)?;
        write_matrix_csv(dir.join("G.csv"), &self.generator)
    }
}

/// Builds `G = (e^{t* L} - I) / t*` and verifies the three discrete filter
/// conditions (positivity, unit row sums, `w`-weighted column sums equal `w`).
pub fn build_filter_generator(element: &ReferenceElement, cubature: &PositiveCubature) -> Result<FilterGenerator> {
    let l = laplacian_generator(element);
    let t = find_positivity_time(&l)?;
    let (filter, generator) = filter_and_generator(&l, t);
    let fg = FilterGenerator {
        laplacian_generator: l,
        positivity_time: t,
        filter,
        generator,
        weights: cubature.weights.clone(),
    };
    let min = min_entry(&fg.filter);
    if min < POSITIVITY_TOL {
        return Err(Error::FilterCheck(format!("filter has negative entry {min:e}")));
    }
    let rows = fg.row_sum_defect();
    if rows > ABORT_TOL {
        return Err(Error::FilterCheck(format!("filter row sums deviate from 1 by {rows:e}")));
    }
    let (cons, col) = fg.conservation_defect();
    if cons > ABORT_TOL {
        return Err(Error::FilterCheck(format!(
            "filter is not conservative: column {col} off by {cons:e}"
        )));
    }
    Ok(fg)
}
