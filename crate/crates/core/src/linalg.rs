//! Exact dense linear algebra over the rationals and prime fields.
//!
//! Everything is a value; operations are pure and return fresh matrices.
//! Equality of matrices is structural, which is meaningful because scalars
//! are kept in canonical form. Target sizes are small (dimensions in the low
//! hundreds), so the algorithms are plain dense Gauss-Jordan elimination.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting entry counts or
    /// fields that do not match.
    pub fn from_entries(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entry count",
                expected: rows * cols,
                got: entries.len(),
            });
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch(field, e.field()));
            }
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "ragged rows",
                expected: c,
                got: rows.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        Matrix::from_entries(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(field: FieldSpec, cols: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Matrix::zeros(field, r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimensionMismatch {
                    context: "ragged columns",
                    expected: r,
                    got: col.len(),
                });
            }
            for (i, e) in col.iter().enumerate() {
                if e.field() != field {
                    return Err(Error::FieldMismatch(field, e.field()));
                }
                m.set(i, j, e.clone());
            }
        }
        Ok(m)
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|e| e.mul(s)).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        }
    }

    pub fn neg(&self) -> Matrix {
        let entries = self.entries.iter().map(|e| e.neg()).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product inner dimension",
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![self.field.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(&v[j]));
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "trace of non-square matrix",
                expected: self.rows,
                got: self.cols,
            });
        }
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        Ok(t)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "hstack row count",
                expected: self.rows,
                got: other.rows,
            });
        }
        Ok(Matrix::from_fn(
            self.field,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.at(i, j).clone()
                } else {
                    other.at(i, j - self.cols).clone()
                }
            },
        ))
    }

    pub fn take_cols(&self, indices: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, indices.len(), |i, j| {
            self.at(i, indices[j]).clone()
        })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix shapes",
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }

    /// Reduced row echelon form together with the strictly increasing list of
    /// pivot columns. The result is the unique RREF of the input.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let src = match found {
                Some(r) => r,
                None => continue,
            };
            if src != pivot_row {
                for j in 0..m.cols {
                    let a = m.at(src, j).clone();
                    let b = m.at(pivot_row, j).clone();
                    m.set(src, j, b);
                    m.set(pivot_row, j, a);
                }
            }
            let inv = m.at(pivot_row, col).inv().expect("pivot entry is nonzero");
            if !inv.is_one() {
                for j in col..m.cols {
                    let v = m.at(pivot_row, j).mul(&inv);
                    m.set(pivot_row, j, v);
                }
            }
            for r in 0..m.rows {
                if r == pivot_row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in col..m.cols {
                    if m.at(pivot_row, j).is_zero() {
                        continue;
                    }
                    let v = m.at(r, j).sub(&factor.mul(m.at(pivot_row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, returned as the columns of a matrix with
    /// `cols() - rank()` columns.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let mut free_cols = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for c in 0..self.cols {
            if !is_pivot[c] {
                free_cols.push(c);
            }
        }
        let mut out = Matrix::zeros(self.field, self.cols, free_cols.len());
        for (k, &f) in free_cols.iter().enumerate() {
            out.set(f, k, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                out.set(p, k, r.at(i, f).neg());
            }
        }
        out
    }

    /// Solves `self * x = b` exactly; `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "solve right-hand side",
                expected: self.rows,
                got: b.len(),
            });
        }
        let rhs = Matrix::from_cols(self.field, vec![b.to_vec()])?;
        Ok(self.solve_matrix(&rhs)?.map(|m| m.col(0)))
    }

    /// Simultaneous solve for every column of `b`.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "solve right-hand side rows",
                expected: self.rows,
                got: b.rows(),
            });
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut out = Matrix::zeros(self.field, self.cols, b.cols());
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                out.set(p, j, r.at(i, self.cols + j).clone());
            }
        }
        Ok(Some(out))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "inverse of non-square matrix",
                expected: self.rows,
                got: self.cols,
            });
        }
        let aug = self.hstack(&Matrix::identity(self.field, self.rows))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(self.field, self.rows, self.rows, |i, j| {
            r.at(i, self.cols + j).clone()
        }))
    }

    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(Matrix::from_fn(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let a = self.at(i / other.rows, j / other.cols);
                let b = other.at(i % other.rows, j % other.cols);
                a.mul(b)
            },
        ))
    }

    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.at(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Deterministic invertible matrix with determinant one: a product of
    /// `2n + 4` elementary shear operations drawn from a seeded stream.
    pub fn random_invertible(field: FieldSpec, n: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::identity(field, n);
        if n < 2 {
            return m;
        }
        for _ in 0..(2 * n + 4) {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let c = field.from_i64(*[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
            if c.is_zero() {
                continue; // -2 or 2 over F_2 collapses to zero; skip the shear
            }
            for col in 0..n {
                let v = m.at(j, col).add(&c.mul(m.at(i, col)));
                m.set(j, col, v);
            }
        }
        m
    }

    /// Columns of `self` that form a basis of the column space, in their
    /// original order (the pivot columns).
    pub fn column_space_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.take_cols(&pivots)
    }
}

/// Intersection of two column spaces, as a matrix whose columns form a basis.
/// Computed from the kernel of `[a | -b]`.
pub fn column_space_intersection(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            context: "column space intersection ambient dimension",
            expected: a.rows(),
            got: b.rows(),
        });
    }
    let stacked = a.hstack(&b.neg())?;
    let ker = stacked.kernel_basis();
    let mut cols = Vec::new();
    for k in 0..ker.cols() {
        let coeffs: Vec<Scalar> = (0..a.cols()).map(|i| ker.at(i, k).clone()).collect();
        cols.push(a.mul_vec(&coeffs)?);
    }
    if cols.is_empty() {
        return Ok(Matrix::zeros(a.field(), a.rows(), 0));
    }
    let m = Matrix::from_cols(a.field(), cols)?;
    Ok(m.column_space_basis())
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn vec_is_zero(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn unit_vec(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}
