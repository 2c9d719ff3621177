//! Dense column-major matrices and a column-pivoted Householder QR used to
//! estimate numerical rank and extract null vectors.

/// Dense `rows x cols` matrix stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row {i}");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// Submatrix made of the listed columns, in that order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for &j in cols {
            data.extend_from_slice(self.col(j));
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// `A x`, accumulated column by column.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += xj * a;
            }
        }
        out
    }

    /// Largest column Euclidean norm.
    pub fn max_col_norm(&self) -> f64 {
        (0..self.cols).map(|j| norm(self.col(j))).fold(0.0, f64::max)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Column-pivoted QR factorization `A P = Q R`, truncated at the numerical rank.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// Householder-reduced copy of `A` (columns permuted); `R` is its upper triangle.
    factored: Matrix,
    /// `perm[k]` is the original column sitting at position `k`.
    perm: Vec<usize>,
    rank: usize,
    threshold: f64,
}

impl PivotedQr {
    /// Factors `a` using the rank threshold `max(m, n) * eps * |R_00|`, where
    /// `|R_00|` is the largest column norm (within `sqrt(n)` of the top singular value).
    pub fn new(a: &Matrix) -> Self {
        let scale = a.max_col_norm();
        let threshold = a.rows.max(a.cols) as f64 * f64::EPSILON * scale;
        Self::with_threshold(a, threshold)
    }

    /// Factors `a`, stopping once every remaining column norm is `<= threshold`.
    pub fn with_threshold(a: &Matrix, threshold: f64) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rank = 0;
        let steps = m.min(n);
        let mut v = vec![0.0; m];
        for k in 0..steps {
            // pivot: largest trailing column norm, first index on ties
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..n {
                let nj = norm(&f.col(j)[k..]);
                if nj > best_norm {
                    best = j;
                    best_norm = nj;
                }
            }
            if best_norm <= threshold {
                break;
            }
            if best != k {
                let (lo, hi) = f.data.split_at_mut(best * m);
                lo[k * m..(k + 1) * m].swap_with_slice(&mut hi[..m]);
                perm.swap(k, best);
            }
            // Householder reflector zeroing f[k+1.., k]
            let alpha = {
                let x0 = f.get(k, k);
                if x0 >= 0.0 {
                    -best_norm
                } else {
                    best_norm
                }
            };
            let len = m - k;
            v[..len].copy_from_slice(&f.col(k)[k..]);
            v[0] -= alpha;
            let vnorm2: f64 = v[..len].iter().map(|x| x * x).sum();
            if vnorm2 > 0.0 {
                for j in k + 1..n {
                    let col = &mut f.col_mut(j)[k..];
                    let dot: f64 = v[..len].iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                    let s = 2.0 * dot / vnorm2;
                    for (c, vi) in col.iter_mut().zip(&v[..len]) {
                        *c -= s * vi;
                    }
                }
            }
            let col = f.col_mut(k);
            col[k] = alpha;
            for c in &mut col[k + 1..] {
                *c = 0.0;
            }
            rank += 1;
        }
        PivotedQr {
            factored: f,
            perm,
            rank,
            threshold,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `|R_kk|` for `k < rank`, nonincreasing up to rounding.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rank).map(|k| self.factored.get(k, k).abs()).collect()
    }

    /// A null vector built from the first non-pivot column:
    /// `z[perm] = (-R11^{-1} R12 e_1, 1, 0, ...)`. Returns `None` when the
    /// matrix has full numerical column rank. The sign is fixed so the first
    /// nonzero entry is positive and the largest magnitude is 1.
    pub fn null_vector(&self) -> Option<Vec<f64>> {
        let n = self.factored.cols;
        let r = self.rank;
        if r >= n {
            return None;
        }
        // back substitution R11 y = -R12[:, 0]
        let mut y = vec![0.0; r];
        for i in (0..r).rev() {
            let mut s = -self.factored.get(i, r);
            for (j, yj) in y.iter().enumerate().skip(i + 1) {
                s -= self.factored.get(i, j) * yj;
            }
            y[i] = s / self.factored.get(i, i);
        }
        let mut z = vec![0.0; n];
        for (k, yk) in y.into_iter().enumerate() {
            z[self.perm[k]] = yk;
        }
        z[self.perm[r]] = 1.0;
        let scale = z.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        if !scale.is_finite() || scale == 0.0 {
            return None;
        }
        let first = z.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0);
        let factor = if first < 0.0 { -1.0 / scale } else { 1.0 / scale };
        z.iter_mut().for_each(|x| *x *= factor);
        Some(z)
    }
}

/// Numerical rank under the default threshold.
pub fn numerical_rank(a: &Matrix) -> usize {
    PivotedQr::new(a).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(numerical_rank(&Matrix::from_rows(&[vec![1.0, 1.0]])), 1);
        assert_eq!(
            numerical_rank(&Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]])),
            1
        );
        assert_eq!(
            numerical_rank(&Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1e-3]])),
            2
        );
        assert_eq!(numerical_rank(&Matrix::zeros(3, 4)), 0);
    }

    #[test]
    fn null_vector_of_duplicate_columns() {
        let qr = PivotedQr::new(&Matrix::from_rows(&[vec![1.0, 1.0]]));
        assert_eq!(qr.null_vector().unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn null_vector_annihilates() {
        let a = Matrix::from_rows(&[
            vec![1.0, 1.0, 1.0, 1.0],
            vec![0.1, 0.4, -0.3, 0.9],
            vec![0.01, 0.16, 0.09, 0.81],
        ]);
        let qr = PivotedQr::new(&a);
        assert_eq!(qr.rank(), 3);
        let z = qr.null_vector().unwrap();
        let az = a.mul_vec(&z);
        assert!(az.iter().all(|v| v.abs() < 1e-14), "{az:?}");
        assert!(z.iter().copied().find(|x| *x != 0.0).unwrap() > 0.0);
        assert_eq!(z.iter().fold(0.0f64, |s, x| s.max(x.abs())), 1.0);
    }

    #[test]
    fn full_column_rank_has_no_null_vector() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0], vec![0.0, 2.0]]);
        assert!(PivotedQr::new(&a).null_vector().is_none());
    }

    #[test]
    fn diagonal_reveals_rank_gap() {
        let a = Matrix::from_rows(&[vec![3.0, 1.0, 4.0], vec![1.0, 5.0, 6.0], vec![2.0, 6.0, 8.0]]);
        let qr = PivotedQr::new(&a);
        assert_eq!(qr.rank(), 2);
        let d = qr.diagonal();
        assert!(d[0] >= d[1]);
    }
}
