//! Certificates that a parameterized invariant manifold of a hyperbolic fixed
//! point crosses an h-set as a disk compatible with the chain's cones.
//!
//! The map is studied on a 3-dimensional set `Ñ` (position and direction) with
//! the parameter ranging over an interval `C`. In local coordinates of `Ñ`, with
//! `D` the derivative enclosure and `Q` a diagonal form, the constants are
//!
//! * `A`: certified lower bound of the spectrum of `DᵀQD - (1+ε)Q`;
//! * `M = Σ_i |q_i| ‖row_i D‖ |∂_λ f_i|`;
//! * `L = ‖β‖ max ‖(∂_λ f)_stable‖²`;
//! * `Γ` with `A - 2MΓ - LΓ² > 0`, and `δ = Γ² / ‖α‖`.
//!
//! The disk is compatible with the 4-dimensional form whose parameter
//! coefficient is `p` once `δ |p| > 1`.

use serde::{Deserialize, Serialize};

use crate::cones::{cone_matrix_from_derivative, rump_positive_definite, ConeCertificate};
use crate::covering::{check_covering, CoveringCertificate};
use crate::error::{Error, Result};
use crate::hset::{HSet, QuadraticForm};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::projective::{ParamSliceMap, ProjectiveMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskOptions {
    /// Slack in `Q(f(z1) - f(z2)) >= (1 + ε) Q(z1 - z2) + A |z1 - z2|²`.
    pub epsilon: f64,
    /// Fraction of the largest admissible `Γ` that is used.
    pub gamma_safety: f64,
    /// Relative width at which the bisection for `A` stops.
    pub a_tolerance: f64,
}

impl Default for DiskOptions {
    fn default() -> Self {
        DiskOptions { epsilon: 1e-6, gamma_safety: 0.99, a_tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskConstants {
    /// `[certified, first failing]` bracket; the lower bound is `A`.
    pub a: Interval,
    pub m: Interval,
    pub l: Interval,
    pub gamma: f64,
    /// Enclosure of `A - 2MΓ - LΓ²` with `A`, `M`, `L` at their certified bounds.
    pub gamma_check: Interval,
    pub delta: Interval,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskCertificate {
    pub side: Side,
    pub set: String,
    pub parameter: Interval,
    pub constants: DiskConstants,
    pub self_covering: CoveringCertificate,
    pub cone: ConeCertificate,
    pub param_coefficient: f64,
    /// Enclosure of `δ |p|`; must exceed 1.
    pub final_product: Interval,
    pub verified: bool,
}

/// Largest `α` (up to the tolerance) with `v - αI` certified positive definite.
pub fn compute_a(v: &IntervalMatrix, rel_tol: f64) -> Result<Interval> {
    let n = v.rows();
    let shifted = |alpha: f64| -> Result<bool> {
        let mut w = v.clone();
        for i in 0..n {
            w.set(i, i, v.get(i, i) - Interval::point(alpha));
        }
        Ok(rump_positive_definite(&w)?.positive_definite)
    };
    if !shifted(0.0)? {
        return Err(Error::Inconclusive("cone matrix is not certified positive definite".into()));
    }
    // The smallest eigenvalue of any member is below every diagonal entry.
    let mut hi = (0..n).map(|i| v.get(i, i).hi()).fold(f64::INFINITY, f64::min);
    let mut lo = 0.0;
    if shifted(hi)? {
        return Ok(Interval::point(hi));
    }
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if shifted(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval::new(lo, hi)
}

/// `Σ_i |q_i| ‖row_i(d)‖ |g_i|` with `g` the parameter derivative.
pub fn compute_m(d: &IntervalMatrix, param_derivative: &IntervalVector, q: &QuadraticForm) -> Result<Interval> {
    if d.rows() != q.dim() || param_derivative.dim() != q.dim() {
        return Err(Error::ShapeMismatch("constant M inputs".into()));
    }
    Ok((0..q.dim())
        .map(|i| Interval::point(q.coeff(i).abs()) * d.row(i).norm() * param_derivative[i].abs())
        .sum())
}

/// `‖β‖ ‖g_stable‖²`.
pub fn compute_l(param_derivative: &IntervalVector, q: &QuadraticForm) -> Result<Interval> {
    if param_derivative.dim() != q.dim() {
        return Err(Error::ShapeMismatch("constant L inputs".into()));
    }
    let stable_sq: Interval = q.stable_axes().iter().map(|&i| param_derivative[i].sqr()).sum();
    Ok(Interval::point(q.beta_norm()) * stable_sq)
}

/// `A - 2MΓ - LΓ²` in interval arithmetic.
pub fn gamma_condition(a: f64, m: f64, l: f64, gamma: f64) -> Interval {
    let g = Interval::point(gamma);
    Interval::point(a) - Interval::point(2.0) * Interval::point(m) * g - Interval::point(l) * g.sqr()
}

/// A `Γ > 0` with `A - 2MΓ - LΓ² > 0` certified, taking `safety` times the positive root.
pub fn choose_gamma(a: f64, m: f64, l: f64, safety: f64) -> Result<(f64, Interval)> {
    if !(a > 0.0) {
        return Err(Error::Inconclusive(format!("A = {a} is not positive")));
    }
    if m < 0.0 || l < 0.0 || !(safety > 0.0 && safety < 1.0) {
        return Err(Error::Config("M, L must be nonnegative and the safety factor in (0, 1)".into()));
    }
    let root = if l > 0.0 {
        // (-M + sqrt(M² + AL)) / L, written without cancellation.
        a / (m + (m * m + a * l).sqrt())
    } else if m > 0.0 {
        a / (2.0 * m)
    } else {
        1.0 / safety
    };
    let mut gamma = safety * root;
    for _ in 0..60 {
        let check = gamma_condition(a, m, l, gamma);
        if check.is_positive() {
            return Ok((gamma, check));
        }
        gamma *= 0.9;
    }
    Err(Error::Inconclusive("no Γ satisfying A - 2MΓ - LΓ² > 0 found".into()))
}

/// Inputs of [`verify_disk`].
pub struct DiskProblem<'a> {
    pub side: Side,
    /// 3-dimensional set in `(x, y, t)`.
    pub set: &'a HSet,
    pub form: &'a QuadraticForm,
    /// Parameter coefficient of the 4-dimensional form on the matching chain set.
    pub param_coefficient: f64,
    /// `Pf` for the stable side, `Pf^{-1}` for the unstable side.
    pub map: ProjectiveMap,
    pub parameter: Interval,
    pub grid: Vec<usize>,
}

pub fn verify_disk(problem: &DiskProblem<'_>, opts: &DiskOptions) -> Result<DiskCertificate> {
    let set = problem.set;
    let q = problem.form;
    let label = match problem.side {
        Side::Stable => "stable disk",
        Side::Unstable => "unstable disk",
    };
    let context = |e: Error| match e {
        Error::Inconclusive(m) => Error::Inconclusive(format!("{label}: {m}")),
        other => other,
    };
    if set.dim() != 3 || q.dim() != 3 || q.unstable_axes() != set.unstable_axes() {
        return Err(Error::Config(format!("{label}: expects a 3-dimensional set with a matching form")));
    }
    let slice = ParamSliceMap { map: problem.map.clone(), param: problem.parameter };

    let self_covering = check_covering(set, set, &slice, &problem.grid, None).map_err(context)?;

    let full = slice.lifted_derivative(&set.global_hull()?)?;
    let inv = set.inv_coord();
    let d = inv
        .mat_mul(&full.select(&[0, 1, 2], &[0, 1, 2]))?
        .mat_mul(&set.coord_interval())?
        .finite()?;
    let param_derivative = inv.mat_vec(&full.col(3).entries()[..3].iter().copied().collect())?;

    let v = cone_matrix_from_derivative(&d, q, q)?;
    let cone = ConeCertificate::from_matrix(format!("{} => {}", set.name(), set.name()), v)?;
    if !cone.positive_definite {
        return Err(context(Error::Inconclusive("cone condition on the set fails".into())));
    }

    let v_eps = d.transpose().mat_mul(&q.matrix())?.mat_mul(&d)?.sub(&q_eps_matrix(q, opts.epsilon))?;
    let a = compute_a(&v_eps.symmetrize()?, opts.a_tolerance).map_err(context)?;
    let m = compute_m(&d, &param_derivative, q)?;
    let l = compute_l(&param_derivative, q)?;

    let alpha = q.alpha_norm();
    let p = problem.param_coefficient.abs();
    let (mut gamma, mut gamma_check) = choose_gamma(a.lo(), m.hi(), l.hi(), opts.gamma_safety).map_err(context)?;
    if m.hi() == 0.0 && l.hi() == 0.0 {
        // Any Γ works; take one that clears the final comparison with room to spare.
        gamma = gamma.max((2.0 * alpha / p).sqrt());
        gamma_check = gamma_condition(a.lo(), 0.0, 0.0, gamma);
    }
    let delta = Interval::point(gamma).sqr() / Interval::point(alpha);
    let final_product = delta * Interval::point(p);
    let verified = final_product.lo() > 1.0 && gamma_check.is_positive();
    if !verified {
        return Err(context(Error::Inconclusive(format!(
            "δ·|p| = {final_product:?} does not exceed 1"
        ))));
    }
    Ok(DiskCertificate {
        side: problem.side,
        set: set.name().to_string(),
        parameter: problem.parameter,
        constants: DiskConstants { a, m, l, gamma, gamma_check, delta, epsilon: opts.epsilon },
        self_covering,
        cone,
        param_coefficient: problem.param_coefficient,
        final_product,
        verified,
    })
}

/// `(1 + ε) Q` as an interval matrix, rounded outward.
fn q_eps_matrix(q: &QuadraticForm, epsilon: f64) -> IntervalMatrix {
    let f = Interval::ONE + Interval::point(epsilon);
    q.matrix().scale(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_of_diagonal_matrix_is_its_minimum() {
        let v = IntervalMatrix::diag(&[Interval::point(2.0), Interval::point(3.0), Interval::point(5.0)]);
        let a = compute_a(&v, 1e-12).unwrap();
        assert!(a.lo() <= 2.0 && a.lo() > 2.0 - 1e-9, "{a:?}");
    }

    #[test]
    fn a_requires_positive_definiteness() {
        let v = IntervalMatrix::diag(&[Interval::point(1.0), Interval::point(-1.0)]);
        assert!(compute_a(&v, 1e-9).is_err());
    }

    #[test]
    fn linear_gamma_case() {
        let (g, check) = choose_gamma(2.0, 1.0, 0.0, 0.99).unwrap();
        assert!((g - 0.99).abs() < 1e-15);
        assert!(check.is_positive());
    }

    #[test]
    fn quadratic_gamma_case_is_below_root() {
        let (a, m, l) = (0.099394300936541294, 0.084042214456891598, 0.0070394636406844067);
        let (g, check) = choose_gamma(a, m, l, 0.99).unwrap();
        let root = (-m + (m * m + a * l).sqrt()) / l;
        assert!(g < root && g > 0.98 * root);
        assert!(check.is_positive());
        assert!(root > 0.577 && root < 0.578);
    }

    #[test]
    fn parameter_free_map_has_zero_m_and_l() {
        let d = IntervalMatrix::identity(3);
        let q = QuadraticForm::new(vec![1.0, -1.0, 1.0]).unwrap();
        let g = IntervalVector::zeros(3);
        assert_eq!(compute_m(&d, &g, &q).unwrap(), Interval::ZERO);
        assert_eq!(compute_l(&g, &q).unwrap(), Interval::ZERO);
    }

    #[test]
    fn l_uses_stable_components_only() {
        let q = QuadraticForm::new(vec![2.0, -3.0, 1.0]).unwrap();
        let g = IntervalVector::from_points(&[10.0, 2.0, 10.0]);
        assert_eq!(compute_l(&g, &q).unwrap(), Interval::point(12.0));
    }
}
