#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use entropy_dg::euler::{Gas, PrimState};
use entropy_dg::mesh::{Mesh, Point};
use rand::Rng;

/// Log-uniform density and pressure in `[0.1, 10]`, velocities in `[-3, 3]`.
pub fn random_prim(rng: &mut impl Rng) -> PrimState {
    let log = |rng: &mut dyn rand::RngCore| 10f64.powf(rng.gen_range(-1.0..1.0));
    PrimState::new(log(rng), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), log(rng))
}

pub fn random_cons(gas: &Gas, rng: &mut impl Rng) -> [f64; 4] {
    gas.prim_to_cons(&random_prim(rng))
}

pub fn random_normal(rng: &mut impl Rng) -> Point {
    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    [a.cos(), a.sin()]
}

/// `n × n` squares of `[x0, x1] × [y0, y1]`, each split into two triangles;
/// interior vertices are displaced by up to `jitter` cell widths.
pub fn rectangle(n: usize, x: [f64; 2], y: [f64; 2], jitter: f64) -> Mesh {
    let (hx, hy) = ((x[1] - x[0]) / n as f64, (y[1] - y[0]) / n as f64);
    let mut v = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let inner = i > 0 && i < n && j > 0 && j < n;
            let (dx, dy) = if inner {
                let a = ((7 * i + 3 * j) % 11) as f64 / 11.0 - 0.5;
                let b = ((5 * i + 2 * j) % 13) as f64 / 13.0 - 0.5;
                (jitter * hx * a, jitter * hy * b)
            } else {
                (0.0, 0.0)
            };
            v.push([x[0] + hx * i as f64 + dx, y[0] + hy * j as f64 + dy]);
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if (i + j) % 2 == 0 {
                cells.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                cells.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                cells.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                cells.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    Mesh::new(v, cells, &HashMap::new()).unwrap()
}

/// Two triangles sharing the edge from `(0, 0)` to `(0, 1)`.
pub fn two_cells(left: Point, right: Point) -> Mesh {
    Mesh::new(vec![[0.0, 0.0], [0.0, 1.0], left, right], vec![[0, 1, 2], [0, 3, 1]], &HashMap::new()).unwrap()
}

pub fn workspace_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}
