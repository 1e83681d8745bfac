//! Plain-text mesh and field formats, one record per line.
//!
//! Mesh:
//! ```text
//! # steklov-mesh 1
//! vertices <N>
//! <x> <y> <INTERIOR|OUTER|INNER>
//! triangles <M>
//! <a> <b> <c>
//! edges <E>
//! <a> <b> <OUTER|INNER>
//! ```
//! Field: a `# steklov-field 1` header, a `# <label>` line, then `<vertex> <x> <y> <value>`.

use std::fmt::Write as _;

use crate::discretize::Field;
use crate::geometry::{BoundaryMarker, Mesh, VertexMarker};

/// Fixed 17-significant-digit float rendering used by every text output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn vertex_marker_name(m: VertexMarker) -> &'static str {
    match m {
        VertexMarker::Interior => "INTERIOR",
        VertexMarker::Outer => "OUTER",
        VertexMarker::Inner => "INNER",
    }
}

pub fn mesh_to_text(mesh: &Mesh) -> String {
    let mut out = String::from("# steklov-mesh 1\n");
    let _ = writeln!(out, "vertices {}", mesh.n_vertices());
    for (p, m) in mesh.vertices().iter().zip(mesh.markers()) {
        let _ = writeln!(out, "{} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), vertex_marker_name(*m));
    }
    let _ = writeln!(out, "triangles {}", mesh.triangles().len());
    for [a, b, c] in mesh.triangles() {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    let _ = writeln!(out, "edges {}", mesh.boundary_edges().len());
    for ([a, b], m) in mesh.boundary_edges() {
        let name = match m {
            BoundaryMarker::Outer => "OUTER",
            BoundaryMarker::Inner => "INNER",
        };
        let _ = writeln!(out, "{a} {b} {name}");
    }
    out
}

/// Parses [`mesh_to_text`] output back into a mesh.
pub fn mesh_from_text(text: &str, hole_radius: f64) -> Result<Mesh, String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = |name: &str, lines: &mut dyn Iterator<Item = &str>| -> Result<usize, String> {
        let line = lines.next().ok_or_else(|| format!("missing '{name}' header"))?;
        let mut it = line.split_whitespace();
        match (it.next(), it.next().and_then(|v| v.parse().ok())) {
            (Some(n), Some(c)) if n == name => Ok(c),
            _ => Err(format!("expected '{name} <count>', got '{line}'")),
        }
    };
    let nv = header("vertices", &mut lines)?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = lines.next().ok_or("truncated vertex list")?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(format!("bad vertex record '{line}'"));
        }
        let x: f64 = f[0].parse().map_err(|_| format!("bad x in '{line}'"))?;
        let y: f64 = f[1].parse().map_err(|_| format!("bad y in '{line}'"))?;
        vertices.push([x, y]);
    }
    let nt = header("triangles", &mut lines)?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let line = lines.next().ok_or("truncated triangle list")?;
        let ids: Vec<usize> = line.split_whitespace().map(|v| v.parse().map_err(|_| format!("bad index in '{line}'"))).collect::<Result<_, _>>()?;
        if ids.len() != 3 || ids.iter().any(|&i| i >= nv) {
            return Err(format!("bad triangle record '{line}'"));
        }
        triangles.push([ids[0], ids[1], ids[2]]);
    }
    let ne = header("edges", &mut lines)?;
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let line = lines.next().ok_or("truncated edge list")?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(format!("bad edge record '{line}'"));
        }
        let a: usize = f[0].parse().map_err(|_| format!("bad index in '{line}'"))?;
        let b: usize = f[1].parse().map_err(|_| format!("bad index in '{line}'"))?;
        let m = match f[2] {
            "OUTER" => BoundaryMarker::Outer,
            "INNER" => BoundaryMarker::Inner,
            other => return Err(format!("unknown edge marker '{other}'")),
        };
        edges.push(([a, b], m));
    }
    Mesh::from_parts(vertices, triangles, edges, hole_radius).map_err(|e| e.to_string())
}

pub fn field_to_text(mesh: &Mesh, field: &Field, label: &str) -> String {
    let mut out = format!("# steklov-field 1\n# {label}\n");
    for (v, (p, x)) in mesh.vertices().iter().zip(&field.values).enumerate() {
        let _ = writeln!(out, "{v} {} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(*x));
    }
    out
}
