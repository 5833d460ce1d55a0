//! H-sets: parallelepipeds `c + M (d ⊙ [-1, 1]^n)` whose axes are split into
//! unstable (exit) and stable (entry) directions, and the diagonal cone forms
//! attached to them.
//!
//! Two local frames are used. *Local* coordinates are `M^{-1}(p - c)`, measured
//! along the (unit) columns of `M`; cone forms live there. *Normalized*
//! coordinates additionally divide by the half-widths `d`, so the set is the
//! unit cube; covering checks live there.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{inverse_enclosure, Interval, IntervalMatrix, IntervalVector};

#[derive(Clone, Debug)]
pub struct HSet {
    name: String,
    center: Vec<f64>,
    coord_matrix: DMatrix<f64>,
    inv_coord: IntervalMatrix,
    diameters: Vec<f64>,
    unstable: Vec<usize>,
    stable: Vec<usize>,
}

/// Serialized form of an [`HSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSetSpec {
    pub center: Vec<f64>,
    /// Columns of the coordinate matrix.
    pub columns: Vec<Vec<f64>>,
    pub diameters: Vec<f64>,
    pub unstable_axes: Vec<usize>,
}

impl HSet {
    pub fn new(
        name: impl Into<String>,
        center: Vec<f64>,
        coord_matrix: DMatrix<f64>,
        diameters: Vec<f64>,
        unstable_axes: Vec<usize>,
    ) -> Result<HSet> {
        let name = name.into();
        let n = center.len();
        if n == 0 || coord_matrix.nrows() != n || coord_matrix.ncols() != n || diameters.len() != n {
            return Err(Error::ShapeMismatch(format!("h-set {name}: inconsistent dimensions")));
        }
        if center.iter().chain(coord_matrix.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Config(format!("h-set {name}: non-finite center or frame")));
        }
        if diameters.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::Config(format!("h-set {name}: diameters must be positive")));
        }
        let mut unstable = unstable_axes;
        unstable.sort_unstable();
        unstable.dedup();
        if let Some(&bad) = unstable.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, count: n });
        }
        let stable = (0..n).filter(|i| !unstable.contains(i)).collect();
        let inv_coord = inverse_enclosure(&coord_matrix)?;
        Ok(HSet { name, center, coord_matrix, inv_coord, diameters, unstable, stable })
    }

    pub fn from_spec(name: impl Into<String>, spec: &HSetSpec) -> Result<HSet> {
        let n = spec.center.len();
        if spec.columns.len() != n || spec.columns.iter().any(|c| c.len() != n) {
            return Err(Error::ShapeMismatch("h-set columns".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| spec.columns[j][i]);
        HSet::new(name, spec.center.clone(), m, spec.diameters.clone(), spec.unstable_axes.clone())
    }

    pub fn spec(&self) -> HSetSpec {
        HSetSpec {
            center: self.center.clone(),
            columns: (0..self.dim())
                .map(|j| self.coord_matrix.column(j).iter().copied().collect())
                .collect(),
            diameters: self.diameters.clone(),
            unstable_axes: self.unstable.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn coord_matrix(&self) -> &DMatrix<f64> {
        &self.coord_matrix
    }

    pub fn coord_interval(&self) -> IntervalMatrix {
        IntervalMatrix::from_point(&self.coord_matrix)
    }

    pub fn inv_coord(&self) -> &IntervalMatrix {
        &self.inv_coord
    }

    pub fn diameters(&self) -> &[f64] {
        &self.diameters
    }

    pub fn diameters_interval(&self) -> Vec<Interval> {
        self.diameters.iter().map(|&d| Interval::point(d)).collect()
    }

    pub fn unstable_axes(&self) -> &[usize] {
        &self.unstable
    }

    pub fn stable_axes(&self) -> &[usize] {
        &self.stable
    }

    pub fn center_interval(&self) -> IntervalVector {
        IntervalVector::from_points(&self.center)
    }

    /// `M^{-1}(p - c)`.
    pub fn to_local(&self, p: &IntervalVector) -> Result<IntervalVector> {
        self.inv_coord.mat_vec(&p.sub(&self.center_interval())?)
    }

    /// `d^{-1} ⊙ M^{-1}(p - c)`; inside the unit cube iff `p` is in the set.
    pub fn to_normalized(&self, p: &IntervalVector) -> Result<IntervalVector> {
        let local = self.to_local(p)?;
        Ok(local.iter().zip(&self.diameters).map(|(&z, &d)| z / Interval::point(d)).collect())
    }

    /// `c + M z`.
    pub fn from_local(&self, z: &IntervalVector) -> Result<IntervalVector> {
        self.center_interval().add(&self.coord_interval().mat_vec(z)?)
    }

    /// `c + M (d ⊙ z)`.
    pub fn from_normalized(&self, z: &IntervalVector) -> Result<IntervalVector> {
        let scaled = z.hadamard(&IntervalVector::new(self.diameters_interval()))?;
        self.from_local(&scaled)
    }

    pub fn unit_box(&self) -> IntervalVector {
        IntervalVector::new(vec![Interval::raw(-1.0, 1.0); self.dim()])
    }

    /// Interval hull of the whole set in global coordinates.
    pub fn global_hull(&self) -> Result<IntervalVector> {
        self.from_normalized(&self.unit_box())
    }

    /// Certifies that a point lies in the set.
    pub fn contains_point(&self, p: &[f64]) -> Result<bool> {
        let z = self.to_normalized(&IntervalVector::from_points(p))?;
        let inside = z.iter().all(|x| x.subset_of(&Interval::raw(-1.0, 1.0)));
        Ok(inside)
    }

    /// Sub-boxes of the unit cube, `grid[i]` pieces along axis `i`.
    pub fn grid_boxes(&self, grid: &[usize]) -> Result<Vec<IntervalVector>> {
        self.check_grid(grid)?;
        let axes: Vec<Vec<Interval>> = grid.iter().map(|&g| Interval::raw(-1.0, 1.0).split(g)).collect();
        Ok(product(&axes))
    }

    /// Boxes covering the face `{z_axis = side}` of the unit cube.
    pub fn walls(&self, axis: usize, side: i8, grid: &[usize]) -> Result<Vec<IntervalVector>> {
        if !self.unstable.contains(&axis) {
            return Err(Error::Config(format!("{}: axis {axis} is not unstable", self.name)));
        }
        if side != 1 && side != -1 {
            return Err(Error::Config(format!("wall side must be +1 or -1, got {side}")));
        }
        self.check_grid(grid)?;
        let axes: Vec<Vec<Interval>> = grid
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                if i == axis {
                    vec![Interval::point(side as f64)]
                } else {
                    Interval::raw(-1.0, 1.0).split(g)
                }
            })
            .collect();
        Ok(product(&axes))
    }

    fn check_grid(&self, grid: &[usize]) -> Result<()> {
        if grid.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "grid of length {} for a {}-dimensional set",
                grid.len(),
                self.dim()
            )));
        }
        if grid.contains(&0) {
            return Err(Error::Config("grid counts must be positive".into()));
        }
        Ok(())
    }
}

fn product(axes: &[Vec<Interval>]) -> Vec<IntervalVector> {
    let mut out: Vec<Vec<Interval>> = vec![Vec::new()];
    for pieces in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pieces.iter().map(move |&p| {
                    let mut v = prefix.clone();
                    v.push(p);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(IntervalVector::new).collect()
}

/// Diagonal form `Q(z) = Σ q_i z_i^2`, positive on unstable axes and negative on stable ones.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    coeffs: Vec<f64>,
    unstable: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFormSpec {
    pub coeffs: Vec<f64>,
}

impl QuadraticForm {
    /// Signs of `coeffs` determine the split: positive entries are unstable axes.
    pub fn new(coeffs: Vec<f64>) -> Result<QuadraticForm> {
        if coeffs.is_empty() || coeffs.iter().any(|&c| c == 0.0 || !c.is_finite()) {
            return Err(Error::Config("quadratic form coefficients must be finite and nonzero".into()));
        }
        let unstable = (0..coeffs.len()).filter(|&i| coeffs[i] > 0.0).collect();
        Ok(QuadraticForm { coeffs, unstable })
    }

    /// Like [`QuadraticForm::new`] but checks the split against an h-set.
    pub fn for_set(coeffs: Vec<f64>, set: &HSet) -> Result<QuadraticForm> {
        let q = QuadraticForm::new(coeffs)?;
        if q.dim() != set.dim() || q.unstable != set.unstable_axes() {
            return Err(Error::Config(format!(
                "form signs {:?} do not match the unstable axes {:?} of {}",
                q.coeffs,
                set.unstable_axes(),
                set.name()
            )));
        }
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs[i]
    }

    pub fn unstable_axes(&self) -> &[usize] {
        &self.unstable
    }

    pub fn stable_axes(&self) -> Vec<usize> {
        (0..self.dim()).filter(|i| !self.unstable.contains(i)).collect()
    }

    /// Operator norm of the positive part.
    pub fn alpha_norm(&self) -> f64 {
        self.unstable.iter().map(|&i| self.coeffs[i]).fold(0.0, f64::max)
    }

    /// Operator norm of the negative part, as a positive number.
    pub fn beta_norm(&self) -> f64 {
        self.stable_axes().iter().map(|&i| self.coeffs[i].abs()).fold(0.0, f64::max)
    }

    pub fn value(&self, z: &IntervalVector) -> Result<Interval> {
        if z.dim() != self.dim() {
            return Err(Error::ShapeMismatch("form and vector dims".into()));
        }
        Ok(z.iter().zip(&self.coeffs).map(|(x, &c)| x.sqr() * c).sum())
    }

    pub fn matrix(&self) -> IntervalMatrix {
        let d: Vec<Interval> = self.coeffs.iter().map(|&c| Interval::point(c)).collect();
        IntervalMatrix::diag(&d)
    }

    /// Form restricted to the listed coordinates.
    pub fn minor(&self, keep: &[usize]) -> Result<QuadraticForm> {
        QuadraticForm::new(keep.iter().map(|&i| self.coeffs[i]).collect())
    }

    pub fn spec(&self) -> QuadraticFormSpec {
        QuadraticFormSpec { coeffs: self.coeffs.clone() }
    }
}

/// `Σ q_i z_i^2` for a form in local coordinates.
pub fn local_q_value(q: &QuadraticForm, z: &IntervalVector) -> Result<Interval> {
    q.value(z)
}
