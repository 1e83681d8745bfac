use super::dot;
use crate::{Error, Result};

/// Cholesky factor of a sparse symmetric positive definite matrix stored in envelope
/// (variable-band) form: row `i` keeps `L[i, first[i]..=i]` contiguously.
///
/// Fill is confined to the envelope, so the cost is governed by the profile of the
/// ordering; pair with [`super::cuthill_mckee`] to keep it small.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    first: Vec<usize>,
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors the matrix whose lower triangle is given row by row as `(col, value)` pairs
    /// with `col <= row`.
    pub fn factor(lower_rows: &[Vec<(usize, f64)>]) -> Result<Self> {
        let n = lower_rows.len();
        let mut first = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for (i, row) in lower_rows.iter().enumerate() {
            let f = row.iter().map(|&(j, _)| j).filter(|&j| j <= i).min().unwrap_or(i);
            first.push(f);
            offsets.push(offsets[i] + (i - f + 1));
        }
        let mut values = vec![0.0; offsets[n]];
        for (i, row) in lower_rows.iter().enumerate() {
            for &(j, v) in row {
                if j <= i {
                    values[offsets[i] + j - first[i]] += v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = values.split_at_mut(offsets[i]);
            let row_i = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let row_j = &done[offsets[j]..offsets[j + 1]];
                let s = dot(&row_i[lo - fi..j - fi], &row_j[lo - fj..j - fj]);
                row_i[j - fi] = (row_i[j - fi] - s) / row_j[j - fj];
            }
            let d = row_i[i - fi] - dot(&row_i[..i - fi], &row_i[..i - fi]);
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: i, value: d });
            }
            row_i[i - fi] = d.sqrt();
        }
        Ok(Self { first, offsets, values })
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries, a measure of the factorization cost.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Solves `L y = b` in place, assuming `b[..start]` is zero.
    pub fn forward_from(&self, b: &mut [f64], start: usize) {
        for i in start..b.len() {
            let fi = self.first[i];
            let row = self.row(i);
            let lo = fi.max(start);
            let s = dot(&row[lo - fi..i - fi], &b[lo..i]);
            b[i] = (b[i] - s) / row[i - fi];
        }
    }

    pub fn forward(&self, b: &mut [f64]) {
        self.forward_from(b, 0);
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward(&self, y: &mut [f64]) {
        for i in (0..y.len()).rev() {
            let fi = self.first[i];
            let row = self.row(i);
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yj, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yj -= l * xi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward(&mut x);
        self.backward(&mut x);
        x
    }
}
