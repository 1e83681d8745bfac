use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::DomainSpec;
use crate::{Error, Result};

pub type Point = [f64; 2];

/// Which boundary loop an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryMarker {
    /// `∂Ω₀`, carries the Steklov condition.
    Outer,
    /// `∂B_r`, carries the Dirichlet condition.
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexMarker {
    Interior,
    Outer,
    Inner,
}

impl VertexMarker {
    pub fn on(self, marker: BoundaryMarker) -> bool {
        matches!(
            (self, marker),
            (VertexMarker::Outer, BoundaryMarker::Outer) | (VertexMarker::Inner, BoundaryMarker::Inner)
        )
    }
}

/// Tensor structure recorded by [`build_polar_mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct PolarLayout {
    pub n_rays: usize,
    /// Number of vertex rings (excluding a central vertex).
    pub rings: usize,
    /// Whether vertex 0 is a central vertex at the origin.
    pub center: bool,
    /// Fractions `t_k ∈ (0, 1]` or `[0, 1]` of the radial position of ring `k` along each ray.
    pub fractions: Vec<f64>,
}

impl PolarLayout {
    pub fn vertex(&self, ring: usize, ray: usize) -> usize {
        usize::from(self.center) + ring * self.n_rays + ray % self.n_rays
    }
}

/// Triangulation of `Ω_r` with marked boundary loops.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<([usize; 2], BoundaryMarker)>,
    markers: Vec<VertexMarker>,
    hole_radius: f64,
    layout: Option<PolarLayout>,
}

impl Mesh {
    /// Assembles a mesh from raw parts; rejects non-positive triangles.
    pub fn from_parts(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<([usize; 2], BoundaryMarker)>,
        hole_radius: f64,
    ) -> Result<Self> {
        let mut markers = vec![VertexMarker::Interior; vertices.len()];
        for &([a, b], m) in &boundary_edges {
            let vm = match m {
                BoundaryMarker::Outer => VertexMarker::Outer,
                BoundaryMarker::Inner => VertexMarker::Inner,
            };
            markers[a] = vm;
            markers[b] = vm;
        }
        let mesh = Self { vertices, triangles, boundary_edges, markers, hole_radius, layout: None };
        mesh.check_orientation()?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[([usize; 2], BoundaryMarker)] {
        &self.boundary_edges
    }

    pub fn markers(&self) -> &[VertexMarker] {
        &self.markers
    }

    pub fn hole_radius(&self) -> f64 {
        self.hole_radius
    }

    pub fn has_hole(&self) -> bool {
        self.markers.contains(&VertexMarker::Inner)
    }

    pub fn layout(&self) -> Option<&PolarLayout> {
        self.layout.as_ref()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges_with(&self, marker: BoundaryMarker) -> impl Iterator<Item = [usize; 2]> + '_ {
        self.boundary_edges.iter().filter(move |e| e.1 == marker).map(|e| e.0)
    }

    /// Vertex indices carrying the given boundary marker, ascending.
    pub fn boundary_vertices(&self, marker: BoundaryMarker) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.markers[v].on(marker)).collect()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    fn check_orientation(&self) -> Result<()> {
        for t in 0..self.triangles.len() {
            let area = self.signed_area(t);
            if !(area > 0.0) {
                return Err(Error::DegenerateCell { triangle: t, area });
            }
        }
        Ok(())
    }

    /// Verifies the structural invariants: positive triangles, one closed loop per
    /// marker, conforming interior edges, inner vertices on `|x| = r`.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        self.check_orientation().map_err(|e| e.to_string())?;
        let mut edge_count: HashMap<[usize; 2], usize> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                *edge_count.entry([a.min(b), a.max(b)]).or_default() += 1;
            }
        }
        let mut boundary: HashMap<[usize; 2], BoundaryMarker> = HashMap::new();
        for &([a, b], m) in &self.boundary_edges {
            if boundary.insert([a.min(b), a.max(b)], m).is_some() {
                return Err(format!("boundary edge ({a},{b}) listed twice"));
            }
        }
        for (e, &c) in &edge_count {
            match (c, boundary.contains_key(e)) {
                (1, true) | (2, false) => {}
                (c, b) => return Err(format!("edge {e:?} in {c} triangles, boundary={b}")),
            }
        }
        if boundary.len() != edge_count.values().filter(|&&c| c == 1).count() {
            return Err("boundary edge not in any triangle".into());
        }
        for marker in [BoundaryMarker::Outer, BoundaryMarker::Inner] {
            let edges: Vec<[usize; 2]> = self.edges_with(marker).collect();
            if edges.is_empty() {
                if marker == BoundaryMarker::Outer {
                    return Err("no outer boundary".into());
                }
                continue;
            }
            if !is_single_loop(&edges) {
                return Err(format!("{marker:?} edges do not form one closed loop"));
            }
        }
        let r = self.hole_radius;
        for v in self.boundary_vertices(BoundaryMarker::Inner) {
            let [x, y] = self.vertices[v];
            if (x.hypot(y) - r).abs() > 1e-12 * r {
                return Err(format!("inner vertex {v} off the circle"));
            }
        }
        Ok(())
    }

    /// Triangles sharing an edge with each triangle.
    pub fn triangle_neighbors(&self) -> Vec<Vec<usize>> {
        let mut by_edge: HashMap<[usize; 2], Vec<usize>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                by_edge.entry([a.min(b), a.max(b)]).or_default().push(t);
            }
        }
        let mut nbrs = vec![Vec::with_capacity(3); self.triangles.len()];
        let mut shared: Vec<&Vec<usize>> = by_edge.values().filter(|ts| ts.len() == 2).collect();
        shared.sort();
        for ts in shared {
            nbrs[ts[0]].push(ts[1]);
            nbrs[ts[1]].push(ts[0]);
        }
        for n in &mut nbrs {
            n.sort_unstable();
        }
        nbrs
    }
}

fn is_single_loop(edges: &[[usize; 2]]) -> bool {
    let mut next: HashMap<usize, Vec<usize>> = HashMap::new();
    for &[a, b] in edges {
        next.entry(a).or_default().push(b);
        next.entry(b).or_default().push(a);
    }
    if next.values().any(|v| v.len() != 2) {
        return false;
    }
    let start = edges[0][0];
    let (mut prev, mut cur) = (start, edges[0][1]);
    let mut steps = 1;
    while cur != start {
        let n = &next[&cur];
        let nxt = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = nxt;
        steps += 1;
        if steps > edges.len() {
            return false;
        }
    }
    steps == edges.len()
}

pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Radial fractions of a geometric grading with `intervals` cells: cell `i` has length
/// proportional to `grading^{-i}`, so `grading < 1` makes the cells next to the start small.
pub fn graded_fractions(intervals: usize, grading: f64) -> Vec<f64> {
    let mut lengths = Vec::with_capacity(intervals);
    let mut h = 1.0;
    for _ in 0..intervals {
        lengths.push(h);
        h /= grading;
    }
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(intervals + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for (i, l) in lengths.iter().enumerate() {
        acc += l;
        out.push(if i + 1 == intervals { 1.0 } else { acc / total });
    }
    out
}

/// Tensor polar mesh of `Ω_r`: `n_rays` equispaced rays, `n_radial` geometrically graded
/// cells per ray between the hole and `∂Ω₀`, each quad split along the same diagonal.
/// Without a hole a central vertex at the origin is fanned to the first ring and the
/// ray carries `n_radial + 1` graded cells starting at the origin.
pub fn build_polar_mesh(spec: &DomainSpec, n_rays: usize, n_radial: usize, grading: f64) -> Result<Mesh> {
    spec.validate()?;
    if n_rays < 8 {
        return Err(Error::InvalidSpec(format!("n_rays = {n_rays} < 8")));
    }
    if n_radial < 2 {
        return Err(Error::InvalidSpec(format!("n_radial = {n_radial} < 2")));
    }
    if !(grading > 0.0 && grading.is_finite()) {
        return Err(Error::InvalidSpec(format!("grading = {grading} must be positive")));
    }
    let r = spec.hole_radius;
    let center = r == 0.0;
    let fractions: Vec<f64> = if center {
        graded_fractions(n_radial + 1, grading)[1..].to_vec()
    } else {
        graded_fractions(n_radial, grading)
    };
    let rings = fractions.len();
    let layout = PolarLayout { n_rays, rings, center, fractions };

    let mut vertices = Vec::with_capacity(usize::from(center) + rings * n_rays);
    let mut markers = Vec::with_capacity(vertices.capacity());
    if center {
        vertices.push([0.0, 0.0]);
        markers.push(VertexMarker::Interior);
    }
    let rays: Vec<(f64, f64, f64)> = (0..n_rays)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n_rays as f64;
            let (s, c) = theta.sin_cos();
            (c, s, spec.radius(theta))
        })
        .collect();
    for (k, &f) in layout.fractions.iter().enumerate() {
        for &(c, s, rho) in &rays {
            let t = if k == 0 && !center {
                r
            } else if k + 1 == rings {
                rho
            } else {
                r + (rho - r) * f
            };
            vertices.push([t * c, t * s]);
            markers.push(if k + 1 == rings {
                VertexMarker::Outer
            } else if k == 0 && !center {
                VertexMarker::Inner
            } else {
                VertexMarker::Interior
            });
        }
    }

    let mut triangles = Vec::with_capacity(2 * n_rays * rings);
    if center {
        for j in 0..n_rays {
            triangles.push([0, layout.vertex(0, j), layout.vertex(0, j + 1)]);
        }
    }
    for k in 0..rings - 1 {
        for j in 0..n_rays {
            let p00 = layout.vertex(k, j);
            let p10 = layout.vertex(k + 1, j);
            let p11 = layout.vertex(k + 1, j + 1);
            let p01 = layout.vertex(k, j + 1);
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }

    let mut boundary_edges = Vec::with_capacity(2 * n_rays);
    for j in 0..n_rays {
        boundary_edges.push((
            [layout.vertex(rings - 1, j), layout.vertex(rings - 1, j + 1)],
            BoundaryMarker::Outer,
        ));
    }
    if !center {
        for j in 0..n_rays {
            boundary_edges.push(([layout.vertex(0, j + 1), layout.vertex(0, j)], BoundaryMarker::Inner));
        }
    }

    let mesh = Mesh { vertices, triangles, boundary_edges, markers, hole_radius: r, layout: Some(layout) };
    mesh.check_orientation()?;
    Ok(mesh)
}

/// Sum of triangle areas.
pub fn area(mesh: &Mesh) -> f64 {
    (0..mesh.triangles.len()).map(|t| mesh.signed_area(t)).sum()
}

/// Total length of the edges carrying `marker`.
pub fn perimeter(mesh: &Mesh, marker: BoundaryMarker) -> f64 {
    mesh.edges_with(marker)
        .map(|[a, b]| {
            let (p, q) = (mesh.vertices[a], mesh.vertices[b]);
            (q[0] - p[0]).hypot(q[1] - p[1])
        })
        .sum()
}
