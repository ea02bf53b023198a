//! VTK snapshots, diagnostics CSV and convergence tables.

use std::fmt::Write as _;
use std::path::Path;

use crate::driver::{EocRow, StepRecord};
use crate::error::{Error, Result};
use crate::euler::Gas;
use crate::field::Field;
use crate::mesh::Mesh;
use crate::reference::ReferenceElement;

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Legacy ASCII VTK with every cell drawn as its nodal subtriangulation;
/// nodes are duplicated per cell so discontinuities stay visible.
pub fn vtk_text(gas: &Gas, field: &Field, mesh: &Mesh, element: &ReferenceElement) -> String {
    let n = element.n_nodes();
    let n_cells = mesh.n_cells();
    let subs = element.sub_triangles();
    let n_points = n_cells * n;
    let n_tris = n_cells * subs.len();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "entropy-dg t={:.17e}", field.t);
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {n_points} double");
    for c in 0..n_cells {
        for x in &element.nodes {
            let p = mesh.map_point(c, *x);
            let _ = writeln!(s, "{:.17e} {:.17e} 0", p[0], p[1]);
        }
    }
    let _ = writeln!(s, "CELLS {n_tris} {}", 4 * n_tris);
    for c in 0..n_cells {
        for t in &subs {
            let _ = writeln!(s, "3 {} {} {}", c * n + t[0], c * n + t[1], c * n + t[2]);
        }
    }
    let _ = writeln!(s, "CELL_TYPES {n_tris}");
    for _ in 0..n_tris {
        s.push_str("5\n");
    }
    let _ = writeln!(s, "POINT_DATA {n_points}");
    let columns: [(&str, &dyn Fn(&crate::euler::ConsState) -> f64); 4] = [
        ("rho", &|u| u[0]),
        ("pressure", &|u| gas.cons_to_prim(u).p),
        ("mach", &|u| {
            let q = gas.cons_to_prim(u);
            q.vx.hypot(q.vy) / gas.sound_speed(&q)
        }),
        ("entropy", &|u| gas.entropy(u)),
    ];
    for (name, f) in columns {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for u in &field.states {
            let _ = writeln!(s, "{:.17e}", f(u));
        }
    }
    s
}

pub fn write_vtk(path: impl AsRef<Path>, gas: &Gas, field: &Field, mesh: &Mesh, element: &ReferenceElement) -> Result<()> {
    write_file(path.as_ref(), &vtk_text(gas, field, mesh, element))
}

pub const DIAGNOSTICS_HEADER: &str = "step,t,dt,mass,mom_x,mom_y,energy,entropy,lambda_ed_sum,lambda_er_sum,min_rho,min_p,\
entropy_rate,sigma_total,boundary_entropy_inflow,budget_excess,max_cell_excess,entropy_step_excess,conservation_residual";

pub fn diagnostics_csv(records: &[StepRecord]) -> String {
    let mut s = String::from(DIAGNOSTICS_HEADER);
    s.push('\n');
    for r in records {
        let values = [
            r.t,
            r.dt,
            r.totals[0],
            r.totals[1],
            r.totals[2],
            r.totals[3],
            r.entropy,
            r.lambda_ed_sum,
            r.lambda_er_sum,
            r.min_rho,
            r.min_p,
            r.entropy_rate,
            r.sigma_total,
            r.boundary_entropy_inflow,
            r.budget_excess,
            r.max_cell_excess,
            r.entropy_step_excess,
            r.conservation_residual,
        ];
        let _ = write!(s, "{}", r.step);
        for v in values {
            let _ = write!(s, ",{v:.17e}");
        }
        s.push('\n');
    }
    s
}

pub fn write_diagnostics(path: impl AsRef<Path>, records: &[StepRecord]) -> Result<()> {
    write_file(path.as_ref(), &diagnostics_csv(records))
}

pub fn eoc_csv(rows: &[EocRow]) -> String {
    let mut s = String::from("triangles,avg_area,typical_length,l2_error,eoc\n");
    for r in rows {
        let eoc = r.eoc.map(|e| format!("{e:.6}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{:.6e},{:.6e},{:.6e},{eoc}",
            r.triangles, r.avg_area, r.typical_length, r.l2_error
        );
    }
    s
}

pub fn eoc_table(rows: &[EocRow]) -> String {
    let mut s = format!("{:>10} {:>12} {:>12} {:>12} {:>8}\n", "triangles", "avg area", "sqrt(A)", "L2 error", "EOC");
    for r in rows {
        let eoc = r.eoc.map(|e| format!("{e:.2}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{:>10} {:>12.3e} {:>12.3e} {:>12.3e} {:>8}",
            r.triangles, r.avg_area, r.typical_length, r.l2_error, eoc
        );
    }
    s
}

pub fn write_eoc(dir: impl AsRef<Path>, rows: &[EocRow]) -> Result<()> {
    let dir = dir.as_ref();
    write_file(&dir.join("eoc.csv"), &eoc_csv(rows))?;
    write_file(&dir.join("eoc.txt"), &eoc_table(rows))
}
