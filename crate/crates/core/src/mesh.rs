//! Unstructured triangle meshes in the ASCII formats of the Triangle program.
//!
//! Cells are stored counter-clockwise. Local edge `m` of a cell `[v0, v1, v2]`
//! runs from vertex `m` to vertex `(m + 1) % 3`, which matches the edge
//! numbering of the reference triangle: edge 0 is `(0,0)-(1,0)`, edge 1 the
//! hypotenuse, edge 2 `(0,1)-(0,0)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Marker given to boundary edges the input files do not mark.
pub const DEFAULT_BOUNDARY_MARKER: i32 = 1;

/// What lies on the far side of an edge, seen from its left cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    Cell { cell: usize, local: usize },
    Boundary(i32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Sorted vertex pair; this is the edge's identity.
    pub vertices: [usize; 2],
    pub left: usize,
    pub left_local: usize,
    pub right: Neighbor,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        matches!(self.right, Neighbor::Boundary(_))
    }

    pub fn marker(&self) -> Option<i32> {
        match self.right {
            Neighbor::Boundary(m) => Some(m),
            Neighbor::Cell { .. } => None,
        }
    }
}

/// Affine map data of one cell, `T(r, s) = v0 + r (v1 - v0) + s (v2 - v0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    /// `[[dx/dr, dx/ds], [dy/dr, dy/ds]]`
    pub jacobian: [[f64; 2]; 2],
    pub det_jacobian: f64,
    /// `[[dr/dx, dr/dy], [ds/dx, ds/dy]]`
    pub inv_jacobian: [[f64; 2]; 2],
    pub edge_lengths: [f64; 3],
    pub outward_normals: [Point; 3],
    pub inradius: f64,
}

impl CellGeometry {
    fn from_vertices(cell: usize, v: [Point; 3]) -> Result<Self> {
        let jac = [
            [v[1][0] - v[0][0], v[2][0] - v[0][0]],
            [v[1][1] - v[0][1], v[2][1] - v[0][1]],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let mut edge_lengths = [0.0; 3];
        let mut outward_normals = [[0.0; 2]; 3];
        for m in 0..3 {
            let a = v[m];
            let b = v[(m + 1) % 3];
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy);
            edge_lengths[m] = len;
            outward_normals[m] = [dy / len, -dx / len];
        }
        let diameter = edge_lengths.iter().cloned().fold(0.0, f64::max);
        if !(det > 1e-14 * diameter * diameter) {
            return Err(Error::DegenerateCell { cell, det });
        }
        let inv = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        let perimeter: f64 = edge_lengths.iter().sum();
        Ok(CellGeometry {
            jacobian: jac,
            det_jacobian: det,
            inv_jacobian: inv,
            edge_lengths,
            outward_normals,
            inradius: det / perimeter,
        })
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det_jacobian
    }
}

/// An immutable triangulation with edge connectivity and per-cell geometry.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub cells: Vec<[usize; 3]>,
    pub edges: Vec<Edge>,
    /// Global edge index of each local edge.
    pub cell_edges: Vec<[usize; 3]>,
    geometry: Vec<CellGeometry>,
}

impl Mesh {
    /// Builds a mesh from vertices and triangles. Cells are reoriented
    /// counter-clockwise; `markers` maps sorted boundary vertex pairs to their
    /// boundary marker.
    pub fn new(
        vertices: Vec<Point>,
        mut cells: Vec<[usize; 3]>,
        markers: &HashMap<[usize; 2], i32>,
    ) -> Result<Self> {
        for (c, tri) in cells.iter_mut().enumerate() {
            for &v in tri.iter() {
                if v >= vertices.len() {
                    return Err(Error::InvalidMesh(format!(
                        "cell {c} references vertex {v}, only {} exist",
                        vertices.len()
                    )));
                }
            }
            if signed_area(&vertices, tri) < 0.0 {
                tri.swap(1, 2);
            }
        }
        let geometry = cells
            .iter()
            .enumerate()
            .map(|(c, tri)| CellGeometry::from_vertices(c, tri.map(|v| vertices[v])))
            .collect::<Result<Vec<_>>>()?;
        let (edges, cell_edges) = build_connectivity(&cells, markers)?;
        Ok(Mesh {
            vertices,
            cells,
            edges,
            cell_edges,
            geometry,
        })
    }

    /// Parses Triangle `.node`, `.ele` and optional `.poly` or `.edge` text.
    pub fn from_triangle_text(node: &str, ele: &str, boundary: Option<(&str, BoundaryFile)>) -> Result<Self> {
        let (vertices, node_base) = parse_node(node, "mesh.node")?;
        let cells = parse_ele(ele, "mesh.ele", node_base, vertices.len())?;
        let markers = match boundary {
            Some((text, BoundaryFile::Poly)) => parse_poly_segments(text, "mesh.poly", node_base, vertices.len())?,
            Some((text, BoundaryFile::Edge)) => parse_edge_file(text, "mesh.edge", node_base, vertices.len())?,
            None => HashMap::new(),
        };
        Self::new(vertices, cells, &markers)
    }

    /// Reads `<base>.node`, `<base>.ele` and, if present, `<base>.poly` or `<base>.edge`.
    pub fn read(base: impl AsRef<Path>) -> Result<Self> {
        let base = base.as_ref();
        let with = |ext: &str| base.with_extension(ext);
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::io(p, e));
        let node_path = with("node");
        let ele_path = with("ele");
        let node = read(&node_path)?;
        let ele = read(&ele_path)?;
        let (vertices, node_base) = parse_node(&node, &node_path.display().to_string())?;
        let cells = parse_ele(&ele, &ele_path.display().to_string(), node_base, vertices.len())?;
        let poly_path = with("poly");
        let edge_path = with("edge");
        let markers = if poly_path.exists() {
            parse_poly_segments(&read(&poly_path)?, &poly_path.display().to_string(), node_base, vertices.len())?
        } else if edge_path.exists() {
            parse_edge_file(&read(&edge_path)?, &edge_path.display().to_string(), node_base, vertices.len())?
        } else {
            HashMap::new()
        };
        Self::new(vertices, cells, &markers)
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn geometry(&self, cell: usize) -> &CellGeometry {
        &self.geometry[cell]
    }

    pub fn cell_vertices(&self, cell: usize) -> [Point; 3] {
        self.cells[cell].map(|v| self.vertices[v])
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(|(_, e)| e.is_boundary())
    }

    pub fn markers(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (_, e) in self.boundary_edges() {
            *out.entry(e.marker().unwrap()).or_insert(0) += 1;
        }
        out
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(CellGeometry::area).sum()
    }

    /// Polygon area enclosed by the boundary edges (shoelace over the
    /// counter-clockwise boundary traversal).
    pub fn boundary_enclosed_area(&self) -> f64 {
        self.boundary_edges()
            .map(|(_, e)| {
                let tri = self.cells[e.left];
                let a = self.vertices[tri[e.left_local]];
                let b = self.vertices[tri[(e.left_local + 1) % 3]];
                0.5 * (a[0] * b[1] - b[0] * a[1])
            })
            .sum()
    }

    /// Maps a point of the reference triangle into `cell`.
    pub fn map_point(&self, cell: usize, rs: Point) -> Point {
        let v0 = self.vertices[self.cells[cell][0]];
        let j = &self.geometry[cell].jacobian;
        [
            v0[0] + j[0][0] * rs[0] + j[0][1] * rs[1],
            v0[1] + j[1][0] * rs[0] + j[1][1] * rs[1],
        ]
    }

    /// Inverse of [`Mesh::map_point`].
    pub fn reference_coords(&self, cell: usize, x: Point) -> Point {
        let v0 = self.vertices[self.cells[cell][0]];
        let inv = &self.geometry[cell].inv_jacobian;
        let (dx, dy) = (x[0] - v0[0], x[1] - v0[1]);
        [inv[0][0] * dx + inv[0][1] * dy, inv[1][0] * dx + inv[1][1] * dy]
    }

    pub fn centroid(&self, cell: usize) -> Point {
        let v = self.cell_vertices(cell);
        [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0]
    }

    /// Serializes to Triangle `.node`, `.ele` and `.poly` text (1-based).
    pub fn to_triangle_text(&self) -> (String, String, String) {
        let mut node = format!("{} 2 0 0\n", self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(node, "{} {:.17e} {:.17e}", i + 1, v[0], v[1]);
        }
        let mut ele = format!("{} 3 0\n", self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            let _ = writeln!(ele, "{} {} {} {}", i + 1, c[0] + 1, c[1] + 1, c[2] + 1);
        }
        let boundary: Vec<_> = self.boundary_edges().collect();
        let mut poly = format!("0 2 0 1\n{} 1\n", boundary.len());
        for (i, (_, e)) in boundary.iter().enumerate() {
            let _ = writeln!(
                poly,
                "{} {} {} {}",
                i + 1,
                e.vertices[0] + 1,
                e.vertices[1] + 1,
                e.marker().unwrap()
            );
        }
        poly.push_str("0\n");
        (node, ele, poly)
    }

    pub fn write_triangle(&self, base: impl AsRef<Path>) -> Result<()> {
        let base = base.as_ref();
        let (node, ele, poly) = self.to_triangle_text();
        for (ext, text) in [("node", node), ("ele", ele), ("poly", poly)] {
            let path = base.with_extension(ext);
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    /// Locates the cell containing `x` by brute force over a bucket grid.
    pub fn locator(&self) -> PointLocator<'_> {
        PointLocator::new(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryFile {
    Poly,
    Edge,
}

fn signed_area(vertices: &[Point], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = tri.map(|v| vertices[v]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Groups the cells' local edges by sorted vertex pair. Edges come out sorted
/// by that key, so numbering is independent of hashing.
pub fn build_connectivity(
    cells: &[[usize; 3]],
    markers: &HashMap<[usize; 2], i32>,
) -> Result<(Vec<Edge>, Vec<[usize; 3]>)> {
    let mut half: Vec<([usize; 2], usize, usize)> = Vec::with_capacity(3 * cells.len());
    for (c, tri) in cells.iter().enumerate() {
        for m in 0..3 {
            let (a, b) = (tri[m], tri[(m + 1) % 3]);
            half.push(([a.min(b), a.max(b)], c, m));
        }
    }
    half.sort_unstable();
    let mut edges = Vec::with_capacity(half.len() / 2 + 1);
    let mut cell_edges = vec![[usize::MAX; 3]; cells.len()];
    let mut i = 0;
    while i < half.len() {
        let key = half[i].0;
        let mut j = i + 1;
        while j < half.len() && half[j].0 == key {
            j += 1;
        }
        let index = edges.len();
        let (_, left, left_local) = half[i];
        let right = match j - i {
            1 => Neighbor::Boundary(
                markers
                    .get(&key)
                    .copied()
                    .filter(|&m| m != 0)
                    .unwrap_or(DEFAULT_BOUNDARY_MARKER),
            ),
            2 => {
                let (_, cell, local) = half[i + 1];
                let dir = |c: usize, l: usize| cells[c][l];
                if dir(left, left_local) == dir(cell, local) {
                    return Err(Error::InvalidMesh(format!(
                        "cells {left} and {cell} traverse edge {key:?} in the same direction"
                    )));
                }
                cell_edges[cell][local] = index;
                Neighbor::Cell { cell, local }
            }
            n => {
                return Err(Error::InvalidMesh(format!(
                    "edge {key:?} is shared by {n} cells (non-manifold)"
                )))
            }
        };
        cell_edges[left][left_local] = index;
        edges.push(Edge {
            vertices: key,
            left,
            left_local,
            right,
        });
        i = j;
    }
    Ok((edges, cell_edges))
}

/// Quality and consistency summary of a mesh.
#[derive(Debug, Clone)]
pub struct MeshReport {
    pub n_vertices: usize,
    pub n_cells: usize,
    pub n_edges: usize,
    pub n_boundary_edges: usize,
    pub min_angle_deg: f64,
    pub max_angle_deg: f64,
    pub min_inradius: f64,
    pub total_area: f64,
    pub markers: BTreeMap<i32, usize>,
    /// `V - E + Z`; 1 for a simply connected region, `1 - holes` in general.
    pub euler_characteristic: i64,
    pub problems: Vec<String>,
}

impl MeshReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

impl std::fmt::Display for MeshReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "vertices            {}", self.n_vertices)?;
        writeln!(f, "triangles           {}", self.n_cells)?;
        writeln!(f, "edges               {} ({} boundary)", self.n_edges, self.n_boundary_edges)?;
        writeln!(f, "area                {:.6}", self.total_area)?;
        writeln!(f, "min / max angle     {:.2} / {:.2} deg", self.min_angle_deg, self.max_angle_deg)?;
        writeln!(f, "min inradius        {:.4e}", self.min_inradius)?;
        writeln!(f, "euler characteristic {}", self.euler_characteristic)?;
        for (m, n) in &self.markers {
            writeln!(f, "marker {m:<4}         {n} edges")?;
        }
        if self.problems.is_empty() {
            write!(f, "status              ok")
        } else {
            for p in &self.problems {
                writeln!(f, "problem: {p}")?;
            }
            write!(f, "status              INVALID")
        }
    }
}

pub fn validate_mesh(mesh: &Mesh) -> MeshReport {
    let mut problems = Vec::new();
    let mut min_angle = f64::INFINITY;
    let mut max_angle: f64 = 0.0;
    let mut min_inradius = f64::INFINITY;
    for c in 0..mesh.n_cells() {
        let v = mesh.cell_vertices(c);
        if signed_area(&mesh.vertices, &mesh.cells[c]) <= 0.0 {
            problems.push(format!("cell {c} is not counter-clockwise"));
        }
        for k in 0..3 {
            let (p, a, b) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
            let (ux, uy) = (a[0] - p[0], a[1] - p[1]);
            let (wx, wy) = (b[0] - p[0], b[1] - p[1]);
            let angle = (ux * wy - uy * wx).abs().atan2(ux * wx + uy * wy).to_degrees();
            min_angle = min_angle.min(angle);
            max_angle = max_angle.max(angle);
        }
        min_inradius = min_inradius.min(mesh.geometry(c).inradius);
        let g = mesh.geometry(c);
        for m in 0..3 {
            let n = g.outward_normals[m];
            let a = v[m];
            let b = v[(m + 1) % 3];
            let centroid = mesh.centroid(c);
            let mid = [0.5 * (a[0] + b[0]) - centroid[0], 0.5 * (a[1] + b[1]) - centroid[1]];
            if n[0] * mid[0] + n[1] * mid[1] <= 0.0 {
                problems.push(format!("cell {c} edge {m}: normal points inward"));
            }
        }
    }
    let mut uses = vec![0usize; mesh.edges.len()];
    for (c, ce) in mesh.cell_edges.iter().enumerate() {
        for &e in ce {
            if e >= mesh.edges.len() {
                problems.push(format!("cell {c} has an unassigned edge"));
            } else {
                uses[e] += 1;
            }
        }
    }
    for (i, e) in mesh.edges.iter().enumerate() {
        let expected = if e.is_boundary() { 1 } else { 2 };
        if uses[i] != expected {
            problems.push(format!("edge {i} referenced by {} cells, expected {expected}", uses[i]));
        }
    }
    let area = mesh.total_area();
    let shoelace = mesh.boundary_enclosed_area();
    if (area - shoelace).abs() > 1e-10 * area.abs().max(1e-300) {
        problems.push(format!("cell areas sum to {area}, boundary encloses {shoelace}"));
    }
    MeshReport {
        n_vertices: mesh.vertices.len(),
        n_cells: mesh.n_cells(),
        n_edges: mesh.edges.len(),
        n_boundary_edges: mesh.boundary_edges().count(),
        min_angle_deg: min_angle,
        max_angle_deg: max_angle,
        min_inradius,
        total_area: area,
        markers: mesh.markers(),
        euler_characteristic: mesh.vertices.len() as i64 - mesh.edges.len() as i64 + mesh.n_cells() as i64,
        problems,
    }
}

/// Bucket-grid point location.
pub struct PointLocator<'a> {
    mesh: &'a Mesh,
    origin: Point,
    cell_size: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> PointLocator<'a> {
    fn new(mesh: &'a Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in &mesh.vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
        let n = (mesh.n_cells() as f64).sqrt().ceil().max(1.0);
        let cell_size = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / n).max(1e-300);
        let nx = ((hi[0] - lo[0]) / cell_size).floor() as usize + 1;
        let ny = ((hi[1] - lo[1]) / cell_size).floor() as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        for c in 0..mesh.n_cells() {
            let v = mesh.cell_vertices(c);
            let bx = |x: f64| (((x - lo[0]) / cell_size).floor().max(0.0) as usize).min(nx - 1);
            let by = |y: f64| (((y - lo[1]) / cell_size).floor().max(0.0) as usize).min(ny - 1);
            let (x0, x1) = (v.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min), v.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max));
            let (y0, y1) = (v.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min), v.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max));
            for ix in bx(x0)..=bx(x1) {
                for iy in by(y0)..=by(y1) {
                    buckets[iy * nx + ix].push(c);
                }
            }
        }
        PointLocator {
            mesh,
            origin: lo,
            cell_size,
            nx,
            ny,
            buckets,
        }
    }

    /// Returns the containing cell and the point's reference coordinates.
    pub fn locate(&self, x: Point) -> Option<(usize, Point)> {
        let fx = (x[0] - self.origin[0]) / self.cell_size;
        let fy = (x[1] - self.origin[1]) / self.cell_size;
        if fx < -1e-9 || fy < -1e-9 {
            return None;
        }
        let ix = (fx.floor() as usize).min(self.nx - 1);
        let iy = (fy.floor() as usize).min(self.ny - 1);
        if fx.floor() as usize > self.nx || fy.floor() as usize > self.ny {
            return None;
        }
        let tol = 1e-12;
        self.buckets[iy * self.nx + ix].iter().find_map(|&c| {
            let rs = self.mesh.reference_coords(c, x);
            (rs[0] >= -tol && rs[1] >= -tol && rs[0] + rs[1] <= 1.0 + tol).then_some((c, rs))
        })
    }
}

// --- Triangle ASCII parsing ------------------------------------------------

struct Lines<'a> {
    file: &'a str,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, file: &'a str) -> Self {
        Lines {
            file,
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-empty line with comments stripped, as (1-based line number, tokens).
    fn next_record(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn expect_record(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next_record().ok_or_else(|| Error::MeshFormat {
            file: self.file.to_string(),
            line: 0,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::MeshFormat {
            file: self.file.to_string(),
            line,
            message: message.into(),
        }
    }

    fn num<T: std::str::FromStr>(&self, line: usize, tokens: &[&str], k: usize, what: &str) -> Result<T> {
        let tok = tokens
            .get(k)
            .ok_or_else(|| self.err(line, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| self.err(line, format!("cannot parse {what} from '{tok}'")))
    }
}

fn parse_node(text: &str, file: &str) -> Result<(Vec<Point>, usize)> {
    let mut lines = Lines::new(text, file);
    let (ln, head) = lines.expect_record("node header")?;
    let count: usize = lines.num(ln, &head, 0, "vertex count")?;
    let dim: usize = lines.num(ln, &head, 1, "dimension")?;
    if dim != 2 {
        return Err(lines.err(ln, format!("dimension {dim} unsupported, expected 2")));
    }
    let mut vertices = Vec::with_capacity(count);
    let mut base = 0;
    for k in 0..count {
        let (ln, rec) = lines.expect_record("vertex record")?;
        let index: usize = lines.num(ln, &rec, 0, "vertex index")?;
        if k == 0 {
            if index > 1 {
                return Err(lines.err(ln, format!("first vertex index must be 0 or 1, got {index}")));
            }
            base = index;
        } else if index != base + k {
            return Err(lines.err(ln, format!("expected vertex index {}, got {index}", base + k)));
        }
        let x: f64 = lines.num(ln, &rec, 1, "x coordinate")?;
        let y: f64 = lines.num(ln, &rec, 2, "y coordinate")?;
        vertices.push([x, y]);
    }
    Ok((vertices, base))
}

fn vertex_index(lines: &Lines<'_>, ln: usize, raw: usize, base: usize, n: usize) -> Result<usize> {
    if raw < base || raw - base >= n {
        return Err(lines.err(ln, format!("vertex index {raw} out of range")));
    }
    Ok(raw - base)
}

fn parse_ele(text: &str, file: &str, base: usize, n_vertices: usize) -> Result<Vec<[usize; 3]>> {
    let mut lines = Lines::new(text, file);
    let (ln, head) = lines.expect_record("element header")?;
    let count: usize = lines.num(ln, &head, 0, "triangle count")?;
    let per: usize = lines.num(ln, &head, 1, "nodes per triangle")?;
    if per < 3 {
        return Err(lines.err(ln, format!("{per} nodes per triangle")));
    }
    let mut cells = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, rec) = lines.expect_record("triangle record")?;
        let mut tri = [0; 3];
        for (k, t) in tri.iter_mut().enumerate() {
            let raw: usize = lines.num(ln, &rec, k + 1, "vertex index")?;
            *t = vertex_index(&lines, ln, raw, base, n_vertices)?;
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(lines.err(ln, "triangle repeats a vertex"));
        }
        cells.push(tri);
    }
    Ok(cells)
}

fn parse_segments(
    lines: &mut Lines<'_>,
    count: usize,
    has_markers: bool,
    base: usize,
    n_vertices: usize,
) -> Result<HashMap<[usize; 2], i32>> {
    let mut markers = HashMap::new();
    for _ in 0..count {
        let (ln, rec) = lines.expect_record("segment record")?;
        let a: usize = lines.num(ln, &rec, 1, "segment endpoint")?;
        let b: usize = lines.num(ln, &rec, 2, "segment endpoint")?;
        let a = vertex_index(lines, ln, a, base, n_vertices)?;
        let b = vertex_index(lines, ln, b, base, n_vertices)?;
        let marker = if has_markers && rec.len() > 3 {
            lines.num(ln, &rec, 3, "boundary marker")?
        } else {
            0
        };
        markers.insert([a.min(b), a.max(b)], marker);
    }
    Ok(markers)
}

fn parse_poly_segments(text: &str, file: &str, base: usize, n_vertices: usize) -> Result<HashMap<[usize; 2], i32>> {
    let mut lines = Lines::new(text, file);
    let (ln, head) = lines.expect_record("poly header")?;
    let nv: usize = lines.num(ln, &head, 0, "vertex count")?;
    for _ in 0..nv {
        lines.expect_record("poly vertex")?;
    }
    let (ln, seg) = lines.expect_record("segment header")?;
    let count: usize = lines.num(ln, &seg, 0, "segment count")?;
    let has_markers = seg.len() > 1 && lines.num::<usize>(ln, &seg, 1, "segment marker flag")? != 0;
    parse_segments(&mut lines, count, has_markers, base, n_vertices)
}

fn parse_edge_file(text: &str, file: &str, base: usize, n_vertices: usize) -> Result<HashMap<[usize; 2], i32>> {
    let mut lines = Lines::new(text, file);
    let (ln, head) = lines.expect_record("edge header")?;
    let count: usize = lines.num(ln, &head, 0, "edge count")?;
    let has_markers = head.len() > 1 && lines.num::<usize>(ln, &head, 1, "edge marker flag")? != 0;
    parse_segments(&mut lines, count, has_markers, base, n_vertices)
}
