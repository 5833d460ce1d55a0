//! Projectivization of planar maps in the angle chart.
//!
//! A point of the projective bundle over the plane is `(x, y, [v])` with `[v]` a
//! line through the origin. The chart writes `[v] = [(cos t, sin t)]` with
//! `t` in the open interval `(0, pi)`; the horizontal line is the one point not
//! covered. Any enclosure that reaches it is a hard error.

use std::sync::Arc;

use crate::autodiff::Jet2;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};

/// A one-parameter family of planar diffeomorphisms `f_a`, together with its inverse.
pub trait PlanarMapFamily: Send + Sync {
    fn name(&self) -> &str;

    /// `f_a(x, y)` on jets; `a` is the parameter.
    fn forward(&self, x: &Jet2, y: &Jet2, a: &Jet2) -> Result<(Jet2, Jet2)>;

    /// `f_a^{-1}(x, y)` on jets.
    fn inverse(&self, x: &Jet2, y: &Jet2, a: &Jet2) -> Result<(Jet2, Jet2)>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

/// `(x, y, t, a)`: base point, direction angle and parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub x: Interval,
    pub y: Interval,
    pub t: Interval,
    pub a: Interval,
}

impl ChartPoint {
    pub fn new(x: Interval, y: Interval, t: Interval, a: Interval) -> Result<Self> {
        check_in_chart(t)?;
        Ok(ChartPoint { x, y, t, a })
    }

    pub fn from_vector(v: &IntervalVector) -> Result<Self> {
        if v.dim() != 4 {
            return Err(Error::ShapeMismatch(format!("chart point of dim {}", v.dim())));
        }
        ChartPoint::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(&self) -> IntervalVector {
        IntervalVector::new(vec![self.x, self.y, self.t, self.a])
    }
}

fn check_in_chart(t: Interval) -> Result<()> {
    if t.lo() > 0.0 && t.hi() < Interval::PI.lo() {
        Ok(())
    } else {
        Err(Error::ChartBoundary(format!("angle {t:?} not inside (0, pi)")))
    }
}

/// Angle `t` in `(0, pi)` with `[(cos t, sin t)] = [v]`.
pub fn direction_to_angle(v: &IntervalVector) -> Result<Interval> {
    if v.dim() != 2 {
        return Err(Error::ShapeMismatch(format!("direction of dim {}", v.dim())));
    }
    let (v1, v2) = (v[0], v[1]);
    if v1.contains_zero() && v2.contains_zero() {
        return Err(Error::Domain("direction enclosure contains the zero vector"));
    }
    if v2.contains_zero() {
        return Err(Error::ChartBoundary(format!(
            "direction ({v1:?}, {v2:?}) reaches the horizontal line"
        )));
    }
    // Same formula for v and -v: the ratio is invariant.
    let t = Interval::HALF_PI - (v1 / v2).atan();
    check_in_chart(t)?;
    Ok(t)
}

/// Jet version of [`direction_to_angle`].
pub fn direction_to_angle_jet(v1: &Jet2, v2: &Jet2) -> Result<Jet2> {
    if v2.value().contains_zero() {
        return Err(Error::ChartBoundary(format!(
            "direction second component {:?} contains zero",
            v2.value()
        )));
    }
    let ratio = v1.try_div(v2)?;
    let t = -ratio.atan() + Interval::HALF_PI;
    check_in_chart(t.value())?;
    Ok(t)
}

/// Unit vector `(cos t, sin t)`.
pub fn angle_to_direction(t: Interval) -> IntervalVector {
    IntervalVector::new(vec![t.cos(), t.sin()])
}

fn planar_jets(
    f: &dyn PlanarMapFamily,
    dir: Direction,
    x: Interval,
    y: Interval,
    a: Interval,
) -> Result<(Jet2, Jet2)> {
    let vars = Jet2::variables(&IntervalVector::new(vec![x, y, a]));
    let (fx, fy) = match dir {
        Direction::Forward => f.forward(&vars[0], &vars[1], &vars[2])?,
        Direction::Inverse => f.inverse(&vars[0], &vars[1], &vars[2])?,
    };
    Ok((fx.finite()?, fy.finite()?))
}

/// Image of a planar box under `f_a` (or its inverse), parameter in `a`.
pub fn apply_planar(
    f: &dyn PlanarMapFamily,
    dir: Direction,
    x: Interval,
    y: Interval,
    a: Interval,
) -> Result<(Interval, Interval)> {
    let (fx, fy) = planar_jets(f, dir, x, y, a)?;
    Ok((fx.value(), fy.value()))
}

/// `Pf(x, y, t, a) = (f_a(x, y), angle(Df_a(x, y) (cos t, sin t)), a)`.
pub fn apply_pf(f: &dyn PlanarMapFamily, dir: Direction, p: &ChartPoint) -> Result<ChartPoint> {
    let (f1, f2) = planar_jets(f, dir, p.x, p.y, p.a)?;
    let (c, s) = (p.t.cos(), p.t.sin());
    let w1 = f1.partial(0) * c + f1.partial(1) * s;
    let w2 = f2.partial(0) * c + f2.partial(1) * s;
    let t = direction_to_angle(&IntervalVector::new(vec![w1, w2]))?;
    Ok(ChartPoint { x: f1.value(), y: f2.value(), t, a: p.a })
}

/// Enclosure of `D(Pf)` over the box, in the variable order `(x, y, t, a)`.
///
/// With `w = Df (cos t, sin t)` and `t' = pi/2 - atan(w1/w2)`, the angle row is
/// `(w1 dw2 - w2 dw1) / |w|^2`; the derivatives of `w` come from the Hessian of `f`.
pub fn derivative_pf(f: &dyn PlanarMapFamily, dir: Direction, p: &ChartPoint) -> Result<IntervalMatrix> {
    let (f1, f2) = planar_jets(f, dir, p.x, p.y, p.a)?;
    let (c, s) = (p.t.cos(), p.t.sin());
    let w = |j: &Jet2| j.partial(0) * c + j.partial(1) * s;
    // d/d(x, y, t, a) of w_i.
    let dw = |j: &Jet2| {
        [
            j.second(0, 0) * c + j.second(0, 1) * s,
            j.second(0, 1) * c + j.second(1, 1) * s,
            -(j.partial(0) * s) + j.partial(1) * c,
            j.second(0, 2) * c + j.second(1, 2) * s,
        ]
    };
    let (w1, w2) = (w(&f1), w(&f2));
    let (d1, d2) = (dw(&f1), dw(&f2));
    let norm2 = w1.sqr() + w2.sqr();
    if norm2.contains_zero() {
        return Err(Error::Domain("image direction enclosure contains zero"));
    }
    let angle_row: Vec<Interval> = (0..4).map(|k| (w1 * d2[k] - w2 * d1[k]) / norm2).collect();
    let z = Interval::ZERO;
    let rows = vec![
        vec![f1.partial(0), f1.partial(1), z, f1.partial(2)],
        vec![f2.partial(0), f2.partial(1), z, f2.partial(2)],
        angle_row,
        vec![z, z, z, Interval::ONE],
    ];
    IntervalMatrix::from_rows(rows)?.finite()
}

/// A map between boxes of a fixed dimension with an enclosable derivative.
pub trait ChartMap: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &IntervalVector) -> Result<IntervalVector>;
    fn derivative(&self, z: &IntervalVector) -> Result<IntervalMatrix>;
}

/// `Pf` (or `Pf^{-1}`) on `(x, y, t, a)`.
#[derive(Clone)]
pub struct ProjectiveMap {
    pub family: Arc<dyn PlanarMapFamily>,
    pub direction: Direction,
}

impl ProjectiveMap {
    pub fn new(family: Arc<dyn PlanarMapFamily>, direction: Direction) -> Self {
        ProjectiveMap { family, direction }
    }

    pub fn inverse(&self) -> ProjectiveMap {
        let direction = match self.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        ProjectiveMap { family: self.family.clone(), direction }
    }

    pub fn apply(&self, p: &ChartPoint) -> Result<ChartPoint> {
        apply_pf(self.family.as_ref(), self.direction, p)
    }
}

impl ChartMap for ProjectiveMap {
    fn dim(&self) -> usize {
        4
    }

    fn eval(&self, z: &IntervalVector) -> Result<IntervalVector> {
        Ok(self.apply(&ChartPoint::from_vector(z)?)?.to_vector())
    }

    fn derivative(&self, z: &IntervalVector) -> Result<IntervalMatrix> {
        derivative_pf(self.family.as_ref(), self.direction, &ChartPoint::from_vector(z)?)
    }
}

/// `(x, y, t) -> Pf(x, y, t, a)` restricted to the first three coordinates,
/// with the parameter ranging over a fixed interval.
#[derive(Clone)]
pub struct ParamSliceMap {
    pub map: ProjectiveMap,
    pub param: Interval,
}

impl ParamSliceMap {
    fn lift(&self, z: &IntervalVector) -> Result<IntervalVector> {
        if z.dim() != 3 {
            return Err(Error::ShapeMismatch(format!("slice point of dim {}", z.dim())));
        }
        Ok(IntervalVector::new(vec![z[0], z[1], z[2], self.param]))
    }

    /// Full 4x4 derivative over the lifted box, including the parameter column.
    pub fn lifted_derivative(&self, z: &IntervalVector) -> Result<IntervalMatrix> {
        self.map.derivative(&self.lift(z)?)
    }
}

impl ChartMap for ParamSliceMap {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, z: &IntervalVector) -> Result<IntervalVector> {
        let w = self.map.eval(&self.lift(z)?)?;
        Ok(IntervalVector::new(w.entries()[..3].to_vec()))
    }

    fn derivative(&self, z: &IntervalVector) -> Result<IntervalMatrix> {
        let d = self.lifted_derivative(z)?;
        Ok(d.select(&[0, 1, 2], &[0, 1, 2]))
    }
}
