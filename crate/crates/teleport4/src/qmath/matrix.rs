use super::{c64, Complex64, QmathError};

/// A dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting NaN and infinity.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, QmathError> {
        if entries.len() != rows * cols {
            return Err(QmathError::EntryCount {
                rows,
                cols,
                found: entries.len(),
            });
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFinite { index });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows; handy for literals in tests.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, QmathError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(QmathError::EntryCount {
                    rows: r,
                    cols: c,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(r, c, entries)
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![c64(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = c64(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == c64(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Matrix::from_parts(self.rows, self.cols, entries)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Matrix::from_parts(self.rows, self.cols, entries)
    }

    pub fn scale(&self, k: Complex64) -> Matrix {
        Matrix::from_parts(
            self.rows,
            self.cols,
            self.entries.iter().map(|z| z * k).collect(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `rhs`.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn set_block(&mut self, row0: usize, col0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row0 + i, col0 + j, block.get(i, j));
            }
        }
    }
}

/// Kronecker product: `(a ⊗ b)[i·p + r][j·q + s] = a[i][j] · b[r][s]`
/// for `b` of shape `p✕q`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (a.rows, a.cols);
    let (p, q) = (b.rows, b.cols);
    let mut out = Matrix::zeros(m * p, n * q);
    for i in 0..m {
        for j in 0..n {
            let aij = a.get(i, j);
            for r in 0..p {
                for s in 0..q {
                    out.set(i * p + r, j * q + s, aij * b.get(r, s));
                }
            }
        }
    }
    out
}

/// Determinant of a square matrix: direct formulas up to 3x3, partially
/// pivoted elimination beyond.
pub fn determinant(m: &Matrix) -> Complex64 {
    assert!(m.is_square(), "determinant requires a square matrix");
    let e = |i: usize, j: usize| m.get(i, j);
    match m.rows {
        0 => c64(1.0, 0.0),
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        3 => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => lu_determinant(m),
    }
}

fn lu_determinant(m: &Matrix) -> Complex64 {
    let n = m.rows;
    let mut a = m.entries.clone();
    let at = |a: &[Complex64], i: usize, j: usize| a[i * n + j];
    let mut det = c64(1.0, 0.0);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                at(&a, i, col)
                    .norm()
                    .total_cmp(&at(&a, j, col).norm())
            })
            .unwrap();
        let pivot = at(&a, pivot_row, col);
        if pivot.norm() == 0.0 {
            return c64(0.0, 0.0);
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for row in col + 1..n {
            let factor = at(&a, row, col) / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let sub = factor * at(&a, col, j);
                a[row * n + j] -= sub;
            }
        }
    }
    det
}

/// Largest entry of `m†m − I`; zero for an exactly unitary matrix.
pub fn unitarity_defect(m: &Matrix) -> f64 {
    assert!(m.is_square(), "unitarity is defined for square matrices");
    m.adjoint()
        .mul(m)
        .max_abs_diff(&Matrix::identity(m.rows()))
}

/// True when `m†m = I` to within `tolerance`, entrywise.
pub fn is_unitary(m: &Matrix, tolerance: f64) -> bool {
    unitarity_defect(m) <= tolerance
}
