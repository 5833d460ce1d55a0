//! Cone conditions: positive definiteness of `V = Dᵀ Q_M D - Q_N` over an
//! interval enclosure of the derivative `D` in local coordinates.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hset::{HSet, QuadraticForm};
use crate::interval::{Interval, IntervalMatrix};
use crate::projective::ChartMap;

/// Result of the interval Cholesky test on one vertex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexOutcome {
    pub signs: Vec<i8>,
    pub passed: bool,
    /// Smallest certified pivot lower bound (nonpositive on failure).
    pub min_pivot: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RumpOutcome {
    pub positive_definite: bool,
    pub vertices: Vec<VertexOutcome>,
    pub min_pivot: f64,
}

/// Lower bounds of the Cholesky pivots of every member of `a`, or the index
/// of the first pivot that could not be certified positive.
pub fn interval_cholesky_pivots(a: &IntervalMatrix) -> std::result::Result<Vec<f64>, (usize, f64)> {
    let n = a.rows();
    let mut l = IntervalMatrix::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let mut p = a.get(k, k);
        for j in 0..k {
            p -= l.get(k, j).sqr();
        }
        if !p.is_positive() || !p.is_finite() {
            return Err((k, p.lo()));
        }
        pivots.push(p.lo());
        let lkk = p.sqrt().expect("positive pivot");
        l.set(k, k, lkk);
        for i in k + 1..n {
            let mut s = a.get(i, k);
            for j in 0..k {
                s -= l.get(i, j) * l.get(k, j);
            }
            l.set(i, k, s / lkk);
        }
    }
    Ok(pivots)
}

/// Vertex criterion: a symmetric interval matrix `A_c + [-1, 1] A_0` is
/// positive definite iff every `A_c - diag(z) A_0 diag(z)`, `z ∈ {±1}^n` with
/// `z_0 = +1`, is.
pub fn rump_positive_definite(a: &IntervalMatrix) -> Result<RumpOutcome> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("positive definiteness of a non-square matrix".into()));
    }
    let n = a.rows();
    if n > 20 {
        return Err(Error::ShapeMismatch(format!("vertex enumeration for n = {n}")));
    }
    let a = a.symmetrize()?;
    let center = a.mid();
    let radius = a.radius();
    let vertices: Vec<VertexOutcome> = (0..1u32 << (n - 1))
        .into_par_iter()
        .map(|bits| {
            let signs: Vec<i8> = (0..n)
                .map(|i| if i == 0 || bits & (1 << (i - 1)) == 0 { 1 } else { -1 })
                .collect();
            vertex_outcome(&center, &radius, signs)
        })
        .collect();
    let positive_definite = vertices.iter().all(|v| v.passed);
    let min_pivot = vertices.iter().map(|v| v.min_pivot).fold(f64::INFINITY, f64::min);
    Ok(RumpOutcome { positive_definite, vertices, min_pivot })
}

fn vertex_outcome(center: &DMatrix<f64>, radius: &DMatrix<f64>, signs: Vec<i8>) -> VertexOutcome {
    let n = center.nrows();
    let mut az = IntervalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = (signs[i] * signs[j]) as f64;
            az.set(i, j, Interval::point(center[(i, j)]) - Interval::point(radius[(i, j)]) * s);
        }
    }
    match interval_cholesky_pivots(&az) {
        Ok(p) => VertexOutcome {
            signs,
            passed: true,
            min_pivot: p.into_iter().fold(f64::INFINITY, f64::min),
        },
        Err((_, lo)) => VertexOutcome { signs, passed: false, min_pivot: lo.min(0.0) },
    }
}

/// `D = M_tgt^{-1} DF M_src` over the whole source set, hulled over a grid of sub-boxes.
pub fn local_derivative(src: &HSet, tgt: &HSet, map: &dyn ChartMap, grid: &[usize]) -> Result<IntervalMatrix> {
    let mut hull: Option<IntervalMatrix> = None;
    for b in src.grid_boxes(grid)? {
        let x = src.from_normalized(&b)?;
        let df = map.derivative(&x)?;
        hull = Some(match hull {
            None => df,
            Some(h) => h.hull(&df)?,
        });
    }
    let df = hull.expect("grid has at least one box");
    tgt.inv_coord().mat_mul(&df)?.mat_mul(&src.coord_interval())?.finite()
}

/// `Dᵀ Q_tgt D - Q_src`, symmetrized.
pub fn cone_matrix_from_derivative(d: &IntervalMatrix, q_src: &QuadraticForm, q_tgt: &QuadraticForm) -> Result<IntervalMatrix> {
    let v = d.transpose().mat_mul(&q_tgt.matrix())?.mat_mul(d)?.sub(&q_src.matrix())?;
    v.symmetrize()?.finite()
}

pub fn cone_matrix(
    src: &HSet,
    q_src: &QuadraticForm,
    tgt: &HSet,
    q_tgt: &QuadraticForm,
    map: &dyn ChartMap,
    grid: &[usize],
) -> Result<IntervalMatrix> {
    let d = local_derivative(src, tgt, map, grid)?;
    cone_matrix_from_derivative(&d, q_src, q_tgt)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeCertificate {
    pub link: String,
    pub v: IntervalMatrix,
    pub v_center: Vec<Vec<f64>>,
    pub v_radius: Vec<Vec<f64>>,
    pub outcome: RumpOutcome,
    pub positive_definite: bool,
}

impl ConeCertificate {
    pub fn from_matrix(link: impl Into<String>, v: IntervalMatrix) -> Result<Self> {
        let outcome = rump_positive_definite(&v)?;
        let rows = |m: DMatrix<f64>| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        Ok(ConeCertificate {
            link: link.into(),
            v_center: rows(v.mid()),
            v_radius: rows(v.radius()),
            positive_definite: outcome.positive_definite,
            outcome,
            v,
        })
    }
}

pub fn check_cone(
    src: &HSet,
    q_src: &QuadraticForm,
    tgt: &HSet,
    q_tgt: &QuadraticForm,
    map: &dyn ChartMap,
    grid: &[usize],
) -> Result<ConeCertificate> {
    let v = cone_matrix(src, q_src, tgt, q_tgt, map, grid)?;
    ConeCertificate::from_matrix(format!("{} => {}", src.name(), tgt.name()), v)
}

/// Cone certificate for every consecutive pair; `grids` may be empty (no subdivision).
pub fn check_cone_chain(
    sets: &[HSet],
    forms: &[QuadraticForm],
    map: &dyn ChartMap,
    grids: &[Vec<usize>],
) -> Result<Vec<Result<ConeCertificate>>> {
    if sets.len() < 2 || forms.len() != sets.len() {
        return Err(Error::Config(format!("{} sets with {} forms", sets.len(), forms.len())));
    }
    if !grids.is_empty() && grids.len() != sets.len() - 1 {
        return Err(Error::Config("one cone grid per link expected".into()));
    }
    Ok((0..sets.len() - 1)
        .into_par_iter()
        .map(|k| {
            let grid = grids.get(k).cloned().unwrap_or_else(|| vec![1; sets[k].dim()]);
            check_cone(&sets[k], &forms[k], &sets[k + 1], &forms[k + 1], map, &grid)
        })
        .collect())
}
