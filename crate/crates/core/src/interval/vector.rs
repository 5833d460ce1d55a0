use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalVector {
    entries: Vec<Interval>,
}

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        IntervalVector { entries }
    }

    pub fn zeros(n: usize) -> Self {
        IntervalVector { entries: vec![Interval::ZERO; n] }
    }

    pub fn from_points(xs: &[f64]) -> Self {
        IntervalVector { entries: xs.iter().map(|&x| Interval::point(x)).collect() }
    }

    /// Basis vector `e_i` of dimension `n`.
    pub fn unit(i: usize, n: usize) -> Self {
        let mut v = IntervalVector::zeros(n);
        v.entries[i] = Interval::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.entries.iter()
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.entries
    }

    fn check_dim(&self, other: &IntervalVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(self.zip_map(other, |a, b| a * b))
    }

    pub fn scale(&self, s: Interval) -> IntervalVector {
        self.map(|a| a * s)
    }

    pub fn dot(&self, other: &IntervalVector) -> Result<Interval> {
        self.check_dim(other)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| *a * *b).sum())
    }

    pub fn map(&self, f: impl Fn(Interval) -> Interval) -> IntervalVector {
        IntervalVector { entries: self.entries.iter().map(|&a| f(a)).collect() }
    }

    fn zip_map(&self, other: &IntervalVector, f: impl Fn(Interval, Interval) -> Interval) -> IntervalVector {
        IntervalVector {
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Enclosure of the Euclidean norm over all point selections.
    pub fn norm(&self) -> Interval {
        let ss: Interval = self.entries.iter().map(|x| x.sqr()).sum();
        ss.sqrt().expect("sum of squares is nonnegative")
    }

    /// Upper bound on the Euclidean norm of every point selection.
    pub fn norm_upper(&self) -> f64 {
        self.norm().hi()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.entries.iter().map(|x| x.mid()).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.entries.iter().map(|x| x.width()).fold(0.0, f64::max)
    }

    pub fn hull(&self, other: &IntervalVector) -> Result<IntervalVector> {
        self.check_dim(other)?;
        Ok(self.zip_map(other, |a, b| a.hull(&b)))
    }

    /// Entrywise intersection; `None` if some coordinate is disjoint.
    pub fn intersect(&self, other: &IntervalVector) -> Option<IntervalVector> {
        if self.dim() != other.dim() {
            return None;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalVector::new)
    }

    pub fn subset_of(&self, other: &IntervalVector) -> bool {
        self.dim() == other.dim() && self.entries.iter().zip(&other.entries).all(|(a, b)| a.subset_of(b))
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.dim() == x.len() && self.entries.iter().zip(x).all(|(a, &b)| a.contains(b))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(Interval::is_finite)
    }

    pub fn finite(self) -> Result<IntervalVector> {
        for e in &self.entries {
            e.finite()?;
        }
        Ok(self)
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.entries[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.entries[i]
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        IntervalVector::new(iter.into_iter().collect())
    }
}
