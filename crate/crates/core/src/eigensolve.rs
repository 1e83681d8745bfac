//! Steklov and Steklov–Dirichlet eigenpairs of P1 discretizations.
//!
//! The generalized problem `K u = σ B u` has a boundary mass `B` supported on the outer
//! boundary only. Eliminating the remaining unknowns through the Schur complement
//! `S = K_ΓΓ − K_ΓI K_II⁻¹ K_IΓ` (the discrete Dirichlet-to-Neumann map on `Γ = ∂Ω₀`)
//! leaves a small dense pencil `S x = σ B_Γ x` with `B_Γ` positive definite. Interior
//! values are recovered by discrete harmonic extension.

use serde::{Deserialize, Serialize};

use crate::discretize::{
    apply_dirichlet, assemble_boundary_mass, assemble_domain_mass, assemble_full_boundary_mass,
    assemble_stiffness, Field, SymmetricOperator,
};
use crate::geometry::{BoundaryMarker, Mesh, VertexMarker};
use crate::linalg::{cuthill_mckee, dot, generalized_sym_eig, peripheral_node, DenseMatrix, EnvelopeCholesky};
use crate::{Error, Result};

/// Relative gap below which consecutive eigenvalues are grouped into one cluster.
pub const CLUSTER_GAP: f64 = 1e-3;
/// `|σ₀| < TRIVIAL_RATIO·σ₁` identifies the constant Steklov mode.
const TRIVIAL_RATIO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpectralMode {
    /// Steklov condition on `∂Ω₀`, no hole.
    Steklov,
    /// Steklov on `∂Ω₀`, homogeneous Dirichlet on `∂B_r`.
    SteklovDirichlet,
}

/// Ascending eigenvalues with `L²(∂Ω₀)`-normalized eigenfields and multiplicity clusters.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub mode: SpectralMode,
    pub eigenvalues: Vec<f64>,
    pub eigenfields: Vec<Field>,
    /// Partition of `0..eigenvalues.len()` into groups of numerically equal eigenvalues.
    /// The last group may be cut short by the requested count.
    pub clusters: Vec<Vec<usize>>,
    /// The removed constant mode `σ̄₀` in Steklov mode.
    pub trivial: Option<f64>,
}

impl SpectralResult {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    /// Index of the cluster containing eigenvalue `k`.
    pub fn cluster_of(&self, k: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(&k))
    }
}

/// Groups ascending values whose consecutive relative gap is at most `gap`.
pub fn cluster_indices(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if (v - values[i - 1]).abs() <= gap * v.abs().max(values[i - 1].abs()) => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
}

/// Factored interior block and couplings of a Schur reduction onto the outer boundary.
#[derive(Debug, Clone)]
pub struct SchurComplement {
    /// Dense DtN matrix on `gamma`, ordered by ascending vertex index.
    pub matrix: DenseMatrix,
    /// Outer-boundary vertices.
    pub gamma: Vec<usize>,
    n_vertices: usize,
    /// Interior vertices in elimination order.
    interior: Vec<usize>,
    /// `K_IΓ` column for each Γ entry: (elimination position, value).
    coupling: Vec<Vec<(usize, f64)>>,
    factor: Option<EnvelopeCholesky>,
}

impl SchurComplement {
    /// Reduces `stiffness` (full, or already Dirichlet-eliminated) onto the outer-boundary
    /// dofs.
    ///
    /// Interior unknowns are numbered by a Cuthill–McKee sweep rooted at `Γ` and then
    /// reversed, so the unknowns coupled to `Γ` come last. The envelope factor
    /// `K_II = L Lᵀ` then gives `Y = L⁻¹ K_IΓ` supported on the trailing rows only, and
    /// `S = K_ΓΓ − YᵀY`.
    pub fn new(stiffness: &SymmetricOperator, mesh: &Mesh) -> Result<Self> {
        let dofs = stiffness.dof_vertices();
        let markers = mesh.markers();
        let n = stiffness.dim();
        let is_gamma: Vec<bool> = dofs.iter().map(|&v| markers[v] == VertexMarker::Outer).collect();
        let gamma_idx: Vec<usize> = (0..n).filter(|&i| is_gamma[i]).collect();
        let gamma: Vec<usize> = gamma_idx.iter().map(|&i| dofs[i]).collect();
        let m = gamma.len();

        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|i| stiffness.row(i).0.iter().copied().filter(|&j| j != i).collect())
            .collect();
        let mut order: Vec<usize> = cuthill_mckee(&adjacency, &gamma_idx).into_iter().filter(|&i| !is_gamma[i]).collect();
        order.reverse();
        let mut position = vec![usize::MAX; n];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        let ni = order.len();

        let mut matrix = DenseMatrix::zeros(m);
        let mut gamma_pos = vec![usize::MAX; n];
        for (a, &i) in gamma_idx.iter().enumerate() {
            gamma_pos[i] = a;
        }
        let mut coupling = vec![Vec::new(); m];
        for (a, &i) in gamma_idx.iter().enumerate() {
            let (cols, vals) = stiffness.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if is_gamma[j] {
                    matrix[(a, gamma_pos[j])] = v;
                } else {
                    coupling[a].push((position[j], v));
                }
            }
            coupling[a].sort_by_key(|e| e.0);
        }

        if ni == 0 {
            return Ok(Self { matrix, gamma, n_vertices: mesh.n_vertices(), interior: vec![], coupling, factor: None });
        }

        let mut lower = vec![Vec::new(); ni];
        for (p, &i) in order.iter().enumerate() {
            let (cols, vals) = stiffness.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if !is_gamma[j] && position[j] <= p {
                    lower[p].push((position[j], v));
                }
            }
        }
        let factor = EnvelopeCholesky::factor(&lower).map_err(|e| match e {
            Error::NotPositiveDefinite { pivot, value } => Error::SingularInterior { pivot, value },
            other => other,
        })?;

        // Y columns: (first nonzero position, values from there on)
        let ys: Vec<(usize, Vec<f64>)> = coupling
            .iter()
            .map(|col| {
                let Some(&(start, _)) = col.first() else {
                    return (ni, Vec::new());
                };
                let mut b = vec![0.0; ni];
                for &(p, v) in col {
                    b[p] = v;
                }
                factor.forward_from(&mut b, start);
                (start, b.split_off(start))
            })
            .collect();
        for a in 0..m {
            for b in 0..=a {
                let (sa, ya) = &ys[a];
                let (sb, yb) = &ys[b];
                let lo = (*sa).max(*sb);
                if lo >= ni {
                    continue;
                }
                let d = dot(&ya[lo - sa..], &yb[lo - sb..]);
                matrix[(a, b)] -= d;
                if a != b {
                    matrix[(b, a)] -= d;
                }
            }
        }
        matrix.symmetrize();
        let interior = order.iter().map(|&i| dofs[i]).collect();
        Ok(Self { matrix, gamma, n_vertices: mesh.n_vertices(), interior, coupling, factor: Some(factor) })
    }

    /// Discrete harmonic extension of outer-boundary values `u_Γ` (ordered like `gamma`);
    /// eliminated vertices get 0.
    pub fn extend(&self, u_gamma: &[f64]) -> Field {
        let mut values = vec![0.0; self.n_vertices];
        for (&v, &x) in self.gamma.iter().zip(u_gamma) {
            values[v] = x;
        }
        if let Some(factor) = &self.factor {
            let mut rhs = vec![0.0; self.interior.len()];
            for (col, &x) in self.coupling.iter().zip(u_gamma) {
                for &(p, k) in col {
                    rhs[p] -= k * x;
                }
            }
            let sol = factor.solve(&rhs);
            for (&v, &x) in self.interior.iter().zip(&sol) {
                values[v] = x;
            }
        }
        Field::new(values)
    }
}

/// Dense DtN matrix `K_ΓΓ − K_ΓI K_II⁻¹ K_IΓ` on the outer-boundary vertices.
pub fn schur_dtn(stiffness: &SymmetricOperator, mesh: &Mesh) -> Result<DenseMatrix> {
    Ok(SchurComplement::new(stiffness, mesh)?.matrix)
}

fn outer_mass_on(mesh: &Mesh, gamma: &[usize]) -> DenseMatrix {
    let mass = assemble_boundary_mass(mesh, BoundaryMarker::Outer);
    let mut local = vec![usize::MAX; mesh.n_vertices()];
    for (a, &v) in gamma.iter().enumerate() {
        local[v] = a;
    }
    let mut b = DenseMatrix::zeros(gamma.len());
    for (i, j, v) in mass.entries() {
        let (a, c) = (local[i], local[j]);
        if a != usize::MAX && c != usize::MAX {
            b[(a, c)] = v;
        }
    }
    b
}

fn solve_reduced(mesh: &Mesh, stiffness: &SymmetricOperator, k: usize, mode: SpectralMode) -> Result<SpectralResult> {
    let schur = SchurComplement::new(stiffness, mesh)?;
    let mass = outer_mass_on(mesh, &schur.gamma);
    let eig = generalized_sym_eig(&schur.matrix, &mass)?;
    let mut values = eig.values;
    let mut vectors = eig.vectors;

    let mut trivial = None;
    if mode == SpectralMode::Steklov && values.len() >= 2 && values[0].abs() < TRIVIAL_RATIO * values[1].abs() {
        trivial = Some(values.remove(0));
        vectors.remove(0);
    }

    let keep = k.min(values.len());
    let mut clusters = cluster_indices(&values, CLUSTER_GAP);
    clusters.retain_mut(|c| {
        c.retain(|&i| i < keep);
        !c.is_empty()
    });
    values.truncate(keep);

    let ones = vec![1.0; schur.gamma.len()];
    let scale = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let eigenfields = vectors
        .into_iter()
        .take(keep)
        .enumerate()
        .map(|(i, mut x)| {
            let flip = if i == 0 && mode == SpectralMode::SteklovDirichlet {
                dot(&mass.mul_vec(&x), &ones) < 0.0
            } else {
                let tol = 1e-10 * scale(&x);
                x.iter().find(|v| v.abs() > tol).is_some_and(|v| *v < 0.0)
            };
            if flip {
                x.iter_mut().for_each(|v| *v = -*v);
            }
            schur.extend(&x)
        })
        .collect();

    Ok(SpectralResult { mode, eigenvalues: values, eigenfields, clusters, trivial })
}

/// First `k` Steklov–Dirichlet eigenpairs of a perforated mesh.
pub fn solve_steklov_dirichlet(mesh: &Mesh, k: usize) -> Result<SpectralResult> {
    if !mesh.has_hole() {
        return Err(Error::HoleRequired);
    }
    let stiffness = apply_dirichlet(&assemble_stiffness(mesh)?, mesh)?;
    solve_reduced(mesh, &stiffness, k, SpectralMode::SteklovDirichlet)
}

/// First `k` nontrivial Steklov eigenpairs `σ̄₁ ≤ σ̄₂ ≤ …` (the constant mode is removed).
pub fn solve_steklov(mesh: &Mesh, k: usize) -> Result<SpectralResult> {
    let stiffness = assemble_stiffness(mesh)?;
    solve_reduced(mesh, &stiffness, k, SpectralMode::Steklov)
}

const FRIEDRICH_MAX_ITERATIONS: usize = 2000;
const FRIEDRICH_TOLERANCE: f64 = 1e-14;

/// Best constant `C₂` in `‖u‖²_{L²(Ω)} ≤ C₂ (‖∇u‖²_{L²(Ω)} + ‖u‖²_{L²(∂Ω)})` over the P1 space,
/// with `∂Ω` the union of both boundary loops.
///
/// `C₂ = 1/λ_min` for `(K + B_∂Ω) u = λ M u`, found by inverse iteration from the constant
/// field. The unsquared form holds with constant `√(2 C₂)`.
pub fn friedrich_constant(mesh: &Mesh) -> Result<f64> {
    let k = assemble_stiffness(mesh)?;
    let b = assemble_full_boundary_mass(mesh);
    let m = assemble_domain_mass(mesh);
    let n = mesh.n_vertices();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, j, v) in k.entries().chain(b.entries()) {
        rows[i].push((j, v));
    }
    let adjacency: Vec<Vec<usize>> = (0..n).map(|i| k.row(i).0.iter().copied().filter(|&j| j != i).collect()).collect();
    let mut order = cuthill_mckee(&adjacency, &[peripheral_node(&adjacency)]);
    order.reverse();
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let lower: Vec<Vec<(usize, f64)>> = order
        .iter()
        .map(|&v| {
            let p = position[v];
            rows[v].iter().map(|&(j, x)| (position[j], x)).filter(|&(q, _)| q <= p).collect()
        })
        .collect();
    let factor = EnvelopeCholesky::factor(&lower)?;

    let permute = |x: &[f64]| order.iter().map(|&v| x[v]).collect::<Vec<f64>>();
    let unpermute = |y: &[f64]| {
        let mut x = vec![0.0; n];
        for (p, &v) in order.iter().enumerate() {
            x[v] = y[p];
        }
        x
    };
    let a_form = |x: &[f64]| k.quadratic_form(x) + b.quadratic_form(x);

    let mut x = vec![1.0; n];
    let norm = m.quadratic_form(&x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    let mut lambda = a_form(&x);
    for _ in 0..FRIEDRICH_MAX_ITERATIONS {
        let rhs = permute(&m.apply(&x));
        let mut y = unpermute(&factor.solve(&rhs));
        let norm = m.quadratic_form(&y).sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        let next = a_form(&y);
        x = y;
        let done = (lambda - next).abs() <= FRIEDRICH_TOLERANCE * next;
        lambda = next;
        if done {
            break;
        }
    }
    Ok(1.0 / lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::FemOperators;
    use crate::geometry::{build_polar_mesh, DomainSpec};

    #[test]
    fn clusters_by_relative_gap() {
        let c = cluster_indices(&[1.0, 1.5, 1.5004, 2.0, 2.0001, 2.0002], 1e-3);
        assert_eq!(c, vec![vec![0], vec![1, 2], vec![3, 4, 5]]);
        assert!(cluster_indices(&[], 1e-3).is_empty());
    }

    #[test]
    fn no_interior_means_plain_restriction() {
        let mesh = Mesh::from_parts(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            vec![([0, 1], BoundaryMarker::Outer), ([1, 2], BoundaryMarker::Outer), ([2, 0], BoundaryMarker::Outer)],
            0.0,
        )
        .unwrap();
        let k = assemble_stiffness(&mesh).unwrap();
        let s = schur_dtn(&k, &mesh).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[(i, j)], k.get(i, j));
            }
        }
    }

    #[test]
    fn steklov_schur_annihilates_constants() {
        let mesh = build_polar_mesh(&DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.0).unwrap(), 32, 8, 0.85).unwrap();
        let k = assemble_stiffness(&mesh).unwrap();
        let s = schur_dtn(&k, &mesh).unwrap();
        let y = s.mul_vec(&vec![1.0; s.dim()]);
        assert!(y.iter().all(|v| v.abs() < 1e-10), "{y:?}");
    }

    #[test]
    fn harmonic_extension_minimizes_energy() {
        let mesh = build_polar_mesh(&DomainSpec::disk(1.0, 0.4).unwrap(), 24, 6, 0.9).unwrap();
        let k = apply_dirichlet(&assemble_stiffness(&mesh).unwrap(), &mesh).unwrap();
        let schur = SchurComplement::new(&k, &mesh).unwrap();
        let ug: Vec<f64> = schur.gamma.iter().map(|&v| mesh.vertices()[v][0] + 0.3).collect();
        let ext = schur.extend(&ug);
        let ops = FemOperators::new(&mesh).unwrap();
        let e = ops.energy(&ext);
        assert!((e - schur.matrix.quadratic_form(&ug)).abs() < 1e-10 * e);
        // perturbing an interior value raises the energy
        let v = schur.interior[5];
        let mut bumped = ext.clone();
        bumped.values[v] += 1e-3;
        assert!(ops.energy(&bumped) > e);
        assert!(schur.extend(&ug).values.iter().enumerate().all(|(v, x)| mesh.markers()[v] != VertexMarker::Inner || *x == 0.0));
    }

    #[test]
    fn hole_required_for_dirichlet_mode() {
        let mesh = build_polar_mesh(&DomainSpec::disk(1.0, 0.0).unwrap(), 16, 4, 1.0).unwrap();
        assert!(matches!(solve_steklov_dirichlet(&mesh, 3), Err(Error::HoleRequired)));
    }
}
