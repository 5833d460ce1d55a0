use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{rounding, Interval, IntervalVector};
use crate::error::{Error, Result};

/// Row-major matrix of intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Interval>>", into = "Vec<Vec<Interval>>")]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Interval>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntervalMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix { rows, cols, data: vec![Interval::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Interval::ONE);
        }
        m
    }

    pub fn diag(d: &[Interval]) -> Self {
        let mut m = IntervalMatrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        IntervalMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_point(a: &DMatrix<f64>) -> Self {
        let mut m = IntervalMatrix::zeros(a.nrows(), a.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                m.set(i, j, Interval::point(a[(i, j)]));
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Interval) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> IntervalVector {
        IntervalVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> IntervalVector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[Interval] {
        &self.data
    }

    pub fn transpose(&self) -> IntervalMatrix {
        let mut t = IntervalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntervalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &IntervalVector) -> Result<IntervalVector> {
        if self.cols != v.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) * v[k]).sum())
            .collect())
    }

    fn check_same_shape(&self, other: &IntervalMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    pub fn hull(&self, other: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a.hull(&b)))
    }

    pub fn scale(&self, s: Interval) -> IntervalMatrix {
        self.map(|a| a * s)
    }

    pub fn map(&self, f: impl Fn(Interval) -> Interval) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    fn zip_map(&self, other: &IntervalMatrix, f: impl Fn(Interval, Interval) -> Interval) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, d: &[Interval]) -> Result<IntervalMatrix> {
        if d.len() != self.rows {
            return Err(Error::ShapeMismatch("row scaling length".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j) * d[i]);
            }
        }
        Ok(out)
    }

    /// `self * diag(d)`.
    pub fn scale_cols(&self, d: &[Interval]) -> Result<IntervalMatrix> {
        if d.len() != self.cols {
            return Err(Error::ShapeMismatch("column scaling length".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j) * d[j]);
            }
        }
        Ok(out)
    }

    /// Submatrix keeping the listed rows and columns in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntervalMatrix {
        let mut out = IntervalMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Average with the transpose; encloses the symmetric part of every member.
    pub fn symmetrize(&self) -> Result<IntervalMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("symmetrize needs a square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                let s = (self.get(i, j) + self.get(j, i)) * 0.5;
                out.set(i, j, s);
                out.set(j, i, s);
            }
        }
        Ok(out)
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mid())
    }

    /// Entrywise upper bounds on the radius about [`IntervalMatrix::mid`].
    pub fn radius(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rad())
    }

    /// Upper bound on the infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0.0, |acc, j| rounding::add(acc, self.get(i, j).mag()).1)
            })
            .fold(0.0, f64::max)
    }

    pub fn max_width(&self) -> f64 {
        self.data.iter().map(|x| x.width()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Interval::is_finite)
    }

    pub fn finite(self) -> Result<IntervalMatrix> {
        for e in &self.data {
            e.finite()?;
        }
        Ok(self)
    }

    /// Determinant by cofactor expansion along the first row (n <= 4).
    pub fn det(&self) -> Result<Interval> {
        if !self.is_square() || self.rows > 4 {
            return Err(Error::ShapeMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(self.cofactor_det())
    }

    fn cofactor_det(&self) -> Interval {
        let n = self.rows;
        match n {
            1 => self.get(0, 0),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            _ => {
                let rest: Vec<usize> = (1..n).collect();
                (0..n)
                    .map(|j| {
                        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                        let term = self.get(0, j) * self.select(&rest, &cols).cofactor_det();
                        if j % 2 == 0 {
                            term
                        } else {
                            -term
                        }
                    })
                    .sum()
            }
        }
    }

    pub fn det4(&self) -> Result<Interval> {
        if self.rows != 4 || self.cols != 4 {
            return Err(Error::ShapeMismatch(format!(
                "det4 of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(self.cofactor_det())
    }
}

impl TryFrom<Vec<Vec<Interval>>> for IntervalMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Interval>>) -> Result<Self> {
        IntervalMatrix::from_rows(rows)
    }
}

impl From<IntervalMatrix> for Vec<Vec<Interval>> {
    fn from(m: IntervalMatrix) -> Self {
        (0..m.rows).map(|i| m.row(i).into_vec()).collect()
    }
}

/// Verified enclosure of the inverse of a point matrix.
///
/// With an approximate inverse `R0` and `C = I - A R0`, `||C|| < 1` gives
/// `A^{-1} = R0 (I - C)^{-1} = R0 (I + C + E)` where every entry of `E` is
/// bounded by `||C||^2 / (1 - ||C||)`.
pub fn inverse_enclosure(a: &DMatrix<f64>) -> Result<IntervalMatrix> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::ShapeMismatch(format!("inverse of a {}x{} matrix", n, a.ncols())));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Singular);
    }
    let r0 = a.clone().try_inverse().ok_or(Error::Singular)?;
    let ai = IntervalMatrix::from_point(a);
    let ri = IntervalMatrix::from_point(&r0);
    let c = IntervalMatrix::identity(n).sub(&ai.mat_mul(&ri)?)?;
    let beta = c.norm_inf();
    if !(beta < 1.0) {
        return Err(Error::Singular);
    }
    let one_minus = Interval::ONE - Interval::point(beta);
    let gamma = (Interval::point(beta).sqr() / one_minus).hi();
    let tail = Interval::raw(-gamma, gamma);
    let series = IntervalMatrix::identity(n).add(&c)?.map(|x| x + tail);
    ri.mat_mul(&series)?.finite()
}
