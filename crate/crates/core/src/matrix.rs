// SPDX-License-Identifier: Apache-2.0

//! Dense matrices over a [`FiniteField`], stored row-major as labels.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldError, FiniteField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u32),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn new(
        field: &FiniteField,
        rows: usize,
        cols: usize,
        data: Vec<u32>,
    ) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Dimension(format!(
                "{} labels for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.element(x)?;
        }
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds from row vectors; all rows must have length `cols`.
    pub fn from_rows(
        field: &FiniteField,
        cols: usize,
        rows: &[Vec<u32>],
    ) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(MatrixError::Dimension(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, data)
    }

    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Unit row vectors `e_i` for each index, as a `len x width` matrix.
    pub fn unit_rows(field: &FiniteField, width: usize, indices: &[usize]) -> Self {
        let mut m = Self::zeros(field, indices.len(), width);
        for (r, &i) in indices.iter().enumerate() {
            m.data[r * width + i] = 1;
        }
        m
    }

    /// `rows x points.len()` matrix with entry `(i, j) = points[j]^(i + first_power)`.
    pub fn vandermonde(
        field: &FiniteField,
        points: &[u32],
        rows: usize,
        first_power: u64,
    ) -> Result<Self, MatrixError> {
        for (j, &x) in points.iter().enumerate() {
            field.element(x)?;
            if points[..j].contains(&x) {
                return Err(MatrixError::DuplicatePoint(x));
            }
        }
        let cols = points.len();
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for (j, &x) in points.iter().enumerate() {
                m.data[i * cols + j] = field.pow(x, i as u64 + first_power);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u32) -> Result<(), MatrixError> {
        self.field.element(value)?;
        self.data[r * self.cols + c] = value;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Self {
            field: self.field.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            data.extend(idx.iter().map(|&c| self.get(r, c)));
        }
        Self {
            field: self.field.clone(),
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Columns `range.start..range.end`.
    pub fn col_range(&self, range: std::ops::Range<usize>) -> Self {
        let idx: Vec<usize> = range.collect();
        self.select_cols(&idx)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_field(other)?;
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(MatrixError::Dimension(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn vstack_all(
        field: &FiniteField,
        cols: usize,
        parts: &[Self],
    ) -> Result<Self, MatrixError> {
        parts
            .iter()
            .try_fold(Self::zeros(field, 0, cols), |acc, m| acc.vstack(m))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.same_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, rhs.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Some `D` with `D * self == target`, or `None` when the rows of
    /// `target` are not in the row space of `self`.
    pub fn solve_left(&self, target: &Self) -> Result<Option<Self>, MatrixError> {
        self.same_field(target)?;
        if self.cols != target.cols {
            return Err(MatrixError::Dimension(format!(
                "solve_left with {} and {} columns",
                self.cols, target.cols
            )));
        }
        // Solve self^T X = target^T, then D = X^T.
        let a = self.transpose();
        let b = target.transpose();
        let (n_unknowns, n_rhs) = (a.cols, b.cols);
        let mut aug = Self::zeros(&self.field, a.rows, n_unknowns + n_rhs);
        for r in 0..a.rows {
            aug.data[r * aug.cols..r * aug.cols + n_unknowns].copy_from_slice(a.row(r));
            aug.data[r * aug.cols + n_unknowns..(r + 1) * aug.cols].copy_from_slice(b.row(r));
        }
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= n_unknowns) {
            return Ok(None);
        }
        let mut x = Self::zeros(&self.field, n_unknowns, n_rhs);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..n_rhs {
                x.data[c * n_rhs + j] = red.get(r, n_unknowns + j);
            }
        }
        Ok(Some(x.transpose()))
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Dimension(
                "inverse of a non-square matrix".into(),
            ));
        }
        let id = Self::identity(&self.field, self.rows);
        self.solve_left(&id)?.ok_or(MatrixError::Singular)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), MatrixError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch)
        }
    }
}
