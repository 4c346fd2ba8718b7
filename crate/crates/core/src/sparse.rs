use nalgebra::DMatrix;

use crate::par;

/// Real sparse matrix in compressed-row form.
///
/// Entries are kept row-major with ascending columns and no duplicate keys,
/// which is the canonical order used for assembly and snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRealMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseRealMatrix {
    /// Assemble from unordered triplets. Duplicate keys are summed, exact
    /// zeros produced by cancellation are dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside {dim}x{dim}");
            let row = &mut rows[r];
            match row.last_mut() {
                Some(last) if last.0 as usize == c => last.1 += v,
                _ => row.push((c as u32, v)),
            }
        }
        Self::from_sorted_rows(rows)
    }

    /// Build from rows already sorted by column with unique keys.
    pub(crate) fn from_sorted_rows(rows: Vec<Vec<(u32, f64)>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v != 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Entries in canonical (row, column) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k] as usize, self.vals[k]))
        })
    }

    /// Stored `(column, value)` pairs of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k] as usize, self.vals[k]))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[range.clone()].binary_search(&(col as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|r| self.get(r, r)).sum()
    }

    /// Largest |A_ij - A_ji| over stored entries.
    pub fn max_asymmetry(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    #[inline]
    fn row_dot(&self, r: usize, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            acc += self.vals[k] * x[self.cols[k] as usize];
        }
        acc
    }

    /// `y = A x`. Rows are summed in a fixed order, so the result is bitwise
    /// independent of the thread count.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        par::fill(y, |r| self.row_dot(r, x));
    }

    /// Single-threaded `y = A x`, regardless of features.
    pub fn matvec_serial(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row_dot(r, x);
        }
    }

    /// `⟨x|A|x⟩`.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        (0..self.dim).map(|r| x[r] * self.row_dot(r, x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_sort() {
        let m = SparseRealMatrix::from_triplets(
            3,
            vec![(2, 0, 1.0), (0, 1, 2.0), (0, 1, 3.0), (1, 1, 4.0), (0, 0, -1.0), (2, 2, 0.0)],
        );
        let e: Vec<_> = m.entries().collect();
        assert_eq!(e, vec![(0, 0, -1.0), (0, 1, 5.0), (1, 1, 4.0), (2, 0, 1.0)]);
        assert_eq!(m.trace(), 3.0);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn matvec_paths_agree() {
        let m = SparseRealMatrix::from_triplets(
            3,
            vec![(0, 0, 1.0), (0, 2, 0.5), (2, 0, 0.5), (1, 1, -2.0)],
        );
        let x = [1.0, 2.0, 3.0];
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        m.matvec(&x, &mut a);
        m.matvec_serial(&x, &mut b);
        assert_eq!(a, b);
        assert_eq!(a, [2.5, -4.0, 0.5]);
        assert_eq!(m.max_asymmetry(), 0.0);
        assert_eq!(m.expectation(&x), 1.0 * 2.5 + 2.0 * -4.0 + 3.0 * 0.5);
    }
}
