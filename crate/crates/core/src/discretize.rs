//! P1 finite-element assembly of the Dirichlet energy, the boundary and domain mass
//! forms, elimination of the inner (Dirichlet) boundary, and discrete norms.

use std::fmt::Write as _;

use crate::geometry::{BoundaryMarker, Mesh, VertexMarker};
use crate::{Error, Result};

/// Sparse symmetric matrix over a set of mesh vertices (its degrees of freedom).
///
/// Rows are stored in compressed form with ascending column indices, so the
/// coefficient list is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    /// vertex -> matrix index
    dof_map: Vec<Option<usize>>,
    /// matrix index -> vertex
    dofs: Vec<usize>,
}

impl SymmetricOperator {
    /// Builds the operator on all `n_vertices` from unordered triplets; duplicates are summed
    /// in input order.
    fn from_triplets(n_vertices: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_vertices];
        for &(i, j, v) in triplets {
            rows[i].push((j, v));
        }
        let dofs: Vec<usize> = (0..n_vertices).collect();
        let dof_map = dofs.iter().map(|&v| Some(v)).collect();
        Self::from_rows(rows, dof_map, dofs)
    }

    fn from_rows(rows: Vec<Vec<(usize, f64)>>, dof_map: Vec<Option<usize>>, dofs: Vec<usize>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            // stable sort keeps the summation order fixed
            row.sort_by_key(|e| e.0);
            let mut iter = row.into_iter().peekable();
            while let Some((j, mut v)) = iter.next() {
                while let Some(&(k, w)) = iter.peek() {
                    if k != j {
                        break;
                    }
                    v += w;
                    iter.next();
                }
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { row_ptr, cols, vals, dof_map, dofs }
    }

    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    pub fn dof_map(&self) -> &[Option<usize>] {
        &self.dof_map
    }

    /// Vertex carried by matrix index `i`.
    pub fn dof_vertices(&self) -> &[usize] {
        &self.dofs
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (c, v) = self.row(i);
        c.binary_search(&j).map(|k| v[k]).unwrap_or(0.0)
    }

    /// Stored `(row, col, value)` triples in canonical (row-major, ascending) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim()).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum()
            })
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.bilinear_form(x, x)
    }

    pub fn bilinear_form(&self, x: &[f64], y: &[f64]) -> f64 {
        self.apply(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `fᵀ A g` for per-vertex fields; vertices outside the dof set are ignored.
    pub fn field_form(&self, f: &Field, g: &Field) -> f64 {
        self.bilinear_form(&f.restrict(self), &g.restrict(self))
    }

    /// Largest `|a_ij − a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        self.entries().map(|(i, j, v)| (v - self.get(j, i)).abs()).fold(0.0, f64::max)
    }

    /// Coordinate text: one `row col value` line per stored entry, after a `# rows cols nnz` header.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.dim(), self.dim(), self.nnz());
        for (i, j, v) in self.entries() {
            let _ = writeln!(out, "{i} {j} {v:.16e}");
        }
        out
    }

    /// Keeps only the dofs whose vertex satisfies `keep`.
    fn restricted_to<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        let mut new_map = vec![None; self.dof_map.len()];
        let mut new_dofs = Vec::new();
        for &v in &self.dofs {
            if keep(v) {
                new_map[v] = Some(new_dofs.len());
                new_dofs.push(v);
            }
        }
        let mut rows = Vec::with_capacity(new_dofs.len());
        for &v in &new_dofs {
            let i = self.dof_map[v].expect("vertex kept from current dofs");
            let (c, vals) = self.row(i);
            let row: Vec<(usize, f64)> = c
                .iter()
                .zip(vals)
                .filter_map(|(&j, &x)| new_map[self.dofs[j]].map(|nj| (nj, x)))
                .collect();
            rows.push(row);
        }
        Self::from_rows(rows, new_map, new_dofs)
    }
}

/// Per-vertex P1 coefficients. Vertices on the Dirichlet boundary carry 0 whenever the
/// field belongs to `H¹_{∂B_r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        Self { values: vec![c; mesh.n_vertices()] }
    }

    /// Nodal interpolant of `f`.
    pub fn from_fn<F: Fn([f64; 2]) -> f64>(mesh: &Mesh, f: F) -> Self {
        Self { values: mesh.vertices().iter().map(|&p| f(p)).collect() }
    }

    /// Lifts a dof vector of `op` to the full mesh, zero on the other vertices.
    pub fn from_dofs(op: &SymmetricOperator, x: &[f64]) -> Self {
        let mut values = vec![0.0; op.dof_map.len()];
        for (&v, &xi) in op.dofs.iter().zip(x) {
            values[v] = xi;
        }
        Self { values }
    }

    /// Values on the dofs of `op`.
    pub fn restrict(&self, op: &SymmetricOperator) -> Vec<f64> {
        op.dofs.iter().map(|&v| self.values[v]).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * s).collect() }
    }

    pub fn sub(&self, other: &Field) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn add_scaled(&mut self, s: f64, other: &Field) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }
}

/// Gradients of the barycentric coordinates and the area of triangle `t`.
pub(crate) fn element_gradients(mesh: &Mesh, t: usize) -> Result<([[f64; 2]; 3], f64)> {
    let tri = mesh.triangles()[t];
    let p = tri.map(|v| mesh.vertices()[v]);
    let area = mesh.signed_area(t);
    if !(area > 0.0) {
        return Err(Error::DegenerateCell { triangle: t, area });
    }
    let inv = 1.0 / (2.0 * area);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        g[i] = [(a[1] - b[1]) * inv, (b[0] - a[0]) * inv];
    }
    Ok((g, area))
}

/// Element stiffness block `K_ij = |T| ∇λ_i·∇λ_j`.
pub fn element_stiffness(mesh: &Mesh, t: usize) -> Result<[[f64; 3]; 3]> {
    let (g, area) = element_gradients(mesh, t)?;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
        }
    }
    Ok(k)
}

/// `∫_Ω ∇u·∇v dx` on all vertices.
pub fn assemble_stiffness(mesh: &Mesh) -> Result<SymmetricOperator> {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let k = element_stiffness(mesh, t)?;
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((tri[i], tri[j], k[i][j]));
            }
        }
    }
    Ok(SymmetricOperator::from_triplets(mesh.n_vertices(), &triplets))
}

/// `∫_Γ u v dH¹` over the polygonal boundary edges carrying `marker`; rows of other
/// vertices are empty.
pub fn assemble_boundary_mass(mesh: &Mesh, marker: BoundaryMarker) -> SymmetricOperator {
    let mut triplets = Vec::new();
    for [a, b] in mesh.edges_with(marker) {
        let (p, q) = (mesh.vertices()[a], mesh.vertices()[b]);
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        let (d, o) = (len / 3.0, len / 6.0);
        triplets.extend_from_slice(&[(a, a, d), (b, b, d), (a, b, o), (b, a, o)]);
    }
    SymmetricOperator::from_triplets(mesh.n_vertices(), &triplets)
}

/// Boundary mass over both loops `∂Ω = ∂Ω₀ ∪ ∂B_r`.
pub fn assemble_full_boundary_mass(mesh: &Mesh) -> SymmetricOperator {
    let mut triplets = Vec::new();
    for &([a, b], _) in mesh.boundary_edges() {
        let (p, q) = (mesh.vertices()[a], mesh.vertices()[b]);
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        let (d, o) = (len / 3.0, len / 6.0);
        triplets.extend_from_slice(&[(a, a, d), (b, b, d), (a, b, o), (b, a, o)]);
    }
    SymmetricOperator::from_triplets(mesh.n_vertices(), &triplets)
}

/// Consistent P1 mass `∫_Ω u v dx`.
pub fn assemble_domain_mass(mesh: &Mesh) -> SymmetricOperator {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = mesh.signed_area(t) / 12.0;
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((tri[i], tri[j], if i == j { 2.0 * a } else { a }));
            }
        }
    }
    SymmetricOperator::from_triplets(mesh.n_vertices(), &triplets)
}

/// Removes the rows and columns of inner-boundary vertices (`u = 0` on `∂B_r`).
pub fn apply_dirichlet(op: &SymmetricOperator, mesh: &Mesh) -> Result<SymmetricOperator> {
    if !mesh.has_hole() {
        return Err(Error::NothingToEliminate);
    }
    let markers = mesh.markers();
    Ok(op.restricted_to(|v| markers[v] != VertexMarker::Inner))
}

/// The three global forms of a mesh, assembled once.
#[derive(Debug, Clone)]
pub struct FemOperators {
    pub stiffness: SymmetricOperator,
    pub domain_mass: SymmetricOperator,
    pub outer_mass: SymmetricOperator,
}

impl FemOperators {
    pub fn new(mesh: &Mesh) -> Result<Self> {
        Ok(Self {
            stiffness: assemble_stiffness(mesh)?,
            domain_mass: assemble_domain_mass(mesh),
            outer_mass: assemble_boundary_mass(mesh, BoundaryMarker::Outer),
        })
    }

    /// `∫|∇f|²`.
    pub fn energy(&self, f: &Field) -> f64 {
        self.stiffness.quadratic_form(&f.values)
    }

    /// `∫_Ω f²`.
    pub fn l2_sq(&self, f: &Field) -> f64 {
        self.domain_mass.quadratic_form(&f.values)
    }

    /// `∫_{∂Ω₀} f g`.
    pub fn outer_product(&self, f: &Field, g: &Field) -> f64 {
        self.outer_mass.bilinear_form(&f.values, &g.values)
    }

    /// Squared `H¹(Ω₀)` distance between `f` and the constant `c` with `f` extended by
    /// zero into the hole of area `hole_area`.
    pub fn h1_distance_to_constant(&self, f: &Field, c: f64, hole_area: f64) -> f64 {
        let shifted = Field { values: f.values.iter().map(|v| v - c).collect() };
        self.energy(f) + self.l2_sq(&shifted) + c * c * hole_area
    }
}

/// `‖f − c‖²_{H¹(Ω₀)}` = Dirichlet energy of `f` + `‖f − c‖²_{L²(Ω_r)}` + `c²·hole_area`,
/// i.e. `f` extended by zero into `B_r`. Pass the exact `πr²` as `hole_area`.
pub fn h1_distance_to_constant(mesh: &Mesh, f: &Field, c: f64, hole_area: f64) -> Result<f64> {
    Ok(FemOperators::new(mesh)?.h1_distance_to_constant(f, c, hole_area))
}

/// `∫_Γ f g dH¹` over the edges carrying `marker`.
pub fn boundary_inner_product(mesh: &Mesh, f: &Field, g: &Field, marker: BoundaryMarker) -> f64 {
    assemble_boundary_mass(mesh, marker).bilinear_form(&f.values, &g.values)
}
