//! Dense matrices over one [`FieldSpec`], stored row-major.
//!
//! Matrices with zero rows or zero columns are first-class citizens: they
//! show up whenever a channel block has no interference-free dimensions,
//! and every operation here treats them like any other shape.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from signed-integer rows; entries reduce into the field.
    pub fn from_int_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| field.from_i64(v)))
            .collect();
        Matrix::new(field, r, c, data)
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A column vector from signed integers.
    pub fn col_vec(field: FieldSpec, entries: &[i64]) -> Self {
        Matrix::from_fn(field, entries.len(), 1, |i, _| field.from_i64(entries[i]))
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix::from_fn(field, rows, cols, |_, _| field.random_scalar(rng))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = f.mul(a, rhs.get(k, j));
                    let cur = f.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o = self.field.add(o, r);
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack row counts differ: {} vs {}",
                self.rows, rhs.rows
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Vertical concatenation `[self; rhs]`.
    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack column counts differ: {} vs {}",
                self.cols, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix::new(self.field, self.rows + rhs.rows, self.cols, data)
    }

    pub fn select_rows(&self, keep: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, keep.len(), self.cols, |i, j| {
            self.get(keep[i], j).clone()
        })
    }

    pub fn select_cols(&self, keep: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, keep.len(), |i, j| {
            self.get(i, keep[j]).clone()
        })
    }

    /// Columns `[from, to)` as a new matrix.
    pub fn col_range(&self, from: usize, to: usize) -> Matrix {
        Matrix::from_fn(self.field, self.rows, to - from, |i, j| {
            self.get(i, from + j).clone()
        })
    }

    /// Rows `[from, to)` as a new matrix.
    pub fn row_range(&self, from: usize, to: usize) -> Matrix {
        Matrix::from_fn(self.field, to - from, self.cols, |i, j| {
            self.get(from + i, j).clone()
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        if self.rows == 0 {
            write!(f, "[{}x{}]", self.rows, self.cols)?;
        }
        Ok(())
    }
}
