use super::{Mesh, Point};

/// Uniform bucket grid over the triangles of a mesh for point location.
#[derive(Debug, Clone)]
pub struct PointLocator<'m> {
    mesh: &'m Mesh,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'m> PointLocator<'m> {
    pub fn new(mesh: &'m Mesh) -> Self {
        let verts = mesh.vertices();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in verts {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let ntri = mesh.triangles().len().max(1);
        let side = ((ntri as f64).sqrt().ceil() as usize).max(1);
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
        let cell = extent / side as f64 * (1.0 + 1e-12);
        let nx = (((hi[0] - lo[0]) / cell).floor() as usize + 1).max(1);
        let ny = (((hi[1] - lo[1]) / cell).floor() as usize + 1).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let (mut tlo, mut thi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for &v in tri {
                for d in 0..2 {
                    tlo[d] = tlo[d].min(verts[v][d]);
                    thi[d] = thi[d].max(verts[v][d]);
                }
            }
            let (i0, j0) = Self::cell_of_raw(lo, cell, nx, ny, tlo);
            let (i1, j1) = Self::cell_of_raw(lo, cell, nx, ny, thi);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(t);
                }
            }
        }
        Self { mesh, origin: lo, cell, nx, ny, buckets }
    }

    fn cell_of_raw(origin: Point, cell: f64, nx: usize, ny: usize, p: Point) -> (usize, usize) {
        let i = ((p[0] - origin[0]) / cell).floor().clamp(0.0, (nx - 1) as f64) as usize;
        let j = ((p[1] - origin[1]) / cell).floor().clamp(0.0, (ny - 1) as f64) as usize;
        (i, j)
    }

    /// Containing triangle and barycentric coordinates. Points slightly outside the
    /// polygon snap to the nearest triangle in the surrounding buckets (coordinates clamped).
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        if self.mesh.triangles().is_empty() {
            return None;
        }
        let (ci, cj) = Self::cell_of_raw(self.origin, self.cell, self.nx, self.ny, p);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for ring in 0..=2usize {
            let i0 = ci.saturating_sub(ring);
            let j0 = cj.saturating_sub(ring);
            let i1 = (ci + ring).min(self.nx - 1);
            let j1 = (cj + ring).min(self.ny - 1);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    for &t in &self.buckets[j * self.nx + i] {
                        let b = self.barycentric(t, p);
                        let worst = b[0].min(b[1]).min(b[2]);
                        if worst >= -1e-12 {
                            return Some((t, b));
                        }
                        if best.as_ref().is_none_or(|x| worst > x.2) {
                            best = Some((t, b, worst));
                        }
                    }
                }
            }
            if best.is_some() && ring >= 1 {
                break;
            }
        }
        best.map(|(t, b, _)| {
            let c = [b[0].max(0.0), b[1].max(0.0), b[2].max(0.0)];
            let s = c[0] + c[1] + c[2];
            (t, [c[0] / s, c[1] / s, c[2] / s])
        })
    }

    fn barycentric(&self, t: usize, p: Point) -> [f64; 3] {
        let [a, b, c] = self.mesh.triangles()[t];
        let v = self.mesh.vertices();
        let (pa, pb, pc) = (v[a], v[b], v[c]);
        let det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]);
        let l1 = ((p[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (p[1] - pa[1])) / det;
        let l2 = ((pb[0] - pa[0]) * (p[1] - pa[1]) - (p[0] - pa[0]) * (pb[1] - pa[1])) / det;
        [1.0 - l1 - l2, l1, l2]
    }

    /// Evaluates the P1 interpolant of per-vertex `values` at `p`.
    pub fn interpolate(&self, values: &[f64], p: Point) -> Option<f64> {
        self.locate(p).map(|(t, b)| {
            let tri = self.mesh.triangles()[t];
            b[0] * values[tri[0]] + b[1] * values[tri[1]] + b[2] * values[tri[2]]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_polar_mesh, DomainSpec};

    #[test]
    fn linear_fields_interpolate_exactly() {
        let spec = DomainSpec::ellipse(1.2, 5.0 / 6.0, 0.1).unwrap();
        let mesh = build_polar_mesh(&spec, 32, 8, 0.9).unwrap();
        let values: Vec<f64> = mesh.vertices().iter().map(|p| 2.0 * p[0] - p[1] + 0.5).collect();
        let loc = PointLocator::new(&mesh);
        for k in 0..50 {
            let th = 0.37 * k as f64;
            let s = 0.15 + 0.6 * ((k * 7) % 11) as f64 / 11.0;
            let p = [s * th.cos(), s * th.sin()];
            let got = loc.interpolate(&values, p).unwrap();
            assert!((got - (2.0 * p[0] - p[1] + 0.5)).abs() < 1e-12);
        }
        for (v, p) in mesh.vertices().iter().enumerate() {
            assert!((loc.interpolate(&values, *p).unwrap() - values[v]).abs() < 1e-12);
        }
    }
}
