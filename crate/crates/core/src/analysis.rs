//! Nodal-domain counting and structural checks on eigenfields.
//!
//! A triangle is positive or negative according to the sign of the mean of its three
//! vertex values when `|mean| > tol·‖f‖_∞`, neutral otherwise. Nodal domains are the
//! connected components of equal-sign triangles joined across a shared edge, or across
//! a shared vertex carrying that sign; neutral triangles separate domains.

use serde::{Deserialize, Serialize};

use crate::discretize::Field;
use crate::eigensolve::SpectralResult;
use crate::geometry::{Mesh, VertexMarker};
use crate::{Error, Result};

/// Default relative zero tolerance of the triangle classifier.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Disjoint sets whose representative is always the smallest member, so the partition
/// it reports does not depend on the order of the unions.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignSet {
    pub positive: bool,
    pub negative: bool,
}

impl SignSet {
    pub fn both(&self) -> bool {
        self.positive && self.negative
    }
}

/// Nodal data of one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalEntry {
    /// Eigenvalue index and cluster when the field comes from a spectral result.
    pub eigen_index: Option<usize>,
    pub cluster: Option<usize>,
    pub nodal_count: usize,
    /// Signs of the non-neutral triangles having a vertex on the inner boundary.
    pub signs_touching_inner_boundary: SignSet,
    pub zero_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalReport {
    pub entries: Vec<NodalEntry>,
    pub multiplicities: Vec<usize>,
}

pub fn count_nodal_domains(mesh: &Mesh, f: &Field, tol: f64) -> Result<NodalEntry> {
    let threshold = tol * f.max_abs();
    let signs: Vec<i8> = mesh
        .triangles()
        .iter()
        .map(|tri| {
            let mean = tri.iter().map(|&v| f.values[v]).sum::<f64>() / 3.0;
            if mean.abs() <= threshold {
                0
            } else if mean > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    if signs.iter().all(|&s| s == 0) {
        return Err(Error::AllNeutral);
    }
    let mut uf = UnionFind::new(signs.len());
    for (t, nbrs) in mesh.triangle_neighbors().iter().enumerate() {
        for &u in nbrs {
            if signs[t] != 0 && signs[t] == signs[u] {
                uf.union(t, u);
            }
        }
    }
    // Same-sign triangles meeting at a vertex of that sign are joined too: the P1 field
    // keeps its sign around the vertex. Thin strips along a boundary layer otherwise
    // fall apart into triangles touching only at corners.
    let vertex_sign = |v: usize| {
        let x = f.values[v];
        if x.abs() <= threshold {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut first_at: Vec<[Option<usize>; 2]> = vec![[None, None]; mesh.n_vertices()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let s = signs[t];
        if s == 0 {
            continue;
        }
        let slot = usize::from(s < 0);
        for &v in tri {
            if vertex_sign(v) == s {
                match first_at[v][slot] {
                    Some(u) => uf.union(t, u),
                    None => first_at[v][slot] = Some(t),
                }
            }
        }
    }
    let nodal_count = (0..signs.len()).filter(|&t| signs[t] != 0 && uf.find(t) == t).count();
    let markers = mesh.markers();
    let mut touching = SignSet::default();
    for (tri, &s) in mesh.triangles().iter().zip(&signs) {
        if tri.iter().any(|&v| markers[v] == VertexMarker::Inner) {
            match s {
                1 => touching.positive = true,
                -1 => touching.negative = true,
                _ => {}
            }
        }
    }
    Ok(NodalEntry {
        eigen_index: None,
        cluster: None,
        nodal_count,
        signs_touching_inner_boundary: touching,
        zero_tolerance: tol,
    })
}

/// Nodal entries for every eigenfield of `spectral`.
pub fn nodal_report(mesh: &Mesh, spectral: &SpectralResult, tol: f64) -> Result<NodalReport> {
    let entries = spectral
        .eigenfields
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let mut e = count_nodal_domains(mesh, f, tol)?;
            e.eigen_index = Some(k);
            e.cluster = spectral.cluster_of(k);
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NodalReport { entries, multiplicities: spectral.multiplicities() })
}

/// Discrete surrogate of "no nodal domain compactly contains the hole": for a field from
/// the second cluster with exactly two nodal domains, both signs must reach the inner
/// boundary.
pub fn hole_adjacency_check(entry: &NodalEntry) -> Result<bool> {
    match entry.cluster {
        Some(0) => return Err(Error::NotApplicable("first-cluster eigenfield".into())),
        None => return Err(Error::NotApplicable("field carries no cluster index".into())),
        _ => {}
    }
    if entry.nodal_count != 2 {
        return Err(Error::NotApplicable(format!("{} nodal domains, expected 2", entry.nodal_count)));
    }
    Ok(entry.signs_touching_inner_boundary.both())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalBound {
    pub cluster: usize,
    pub max_count: usize,
    pub bound: usize,
    pub pass: bool,
}

/// For each cluster `l+1`: the largest nodal count over its eigenfields is at most
/// `1 + Σ_{j ≤ l} m_j`.
pub fn nodal_bound_check(spectral: &SpectralResult, nodal: &NodalReport) -> Vec<NodalBound> {
    let mut bound = 1;
    let mut out = Vec::with_capacity(spectral.clusters.len());
    for (l, cluster) in spectral.clusters.iter().enumerate() {
        let max_count = cluster
            .iter()
            .filter_map(|&k| nodal.entries.iter().find(|e| e.eigen_index == Some(k)))
            .map(|e| e.nodal_count)
            .max()
            .unwrap_or(0);
        out.push(NodalBound { cluster: l, max_count, bound, pass: max_count <= bound });
        bound += cluster.len();
    }
    out
}
