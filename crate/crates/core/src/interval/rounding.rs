//! Directed rounding for binary64 without touching the FPU rounding mode.
//!
//! Each operation is computed in round-to-nearest and the exact rounding error
//! is recovered with an error-free transformation (TwoSum, FMA residuals). The
//! sign of that error tells which neighbour of the rounded result bounds the
//! exact value. Near the underflow threshold the residuals are no longer exact,
//! so those cases fall back to unconditional one-ulp widening.

/// Below this magnitude FMA residuals may underflow.
const TINY: f64 = 1.0e-280;
/// Above this magnitude residual computations may overflow.
const HUGE: f64 = 1.0e280;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Returns `(down, up)` bounds for the exact value `s + e`.
#[inline]
fn bracket(s: f64, e: f64) -> (f64, f64) {
    if e < 0.0 {
        (s.next_down(), s)
    } else if e > 0.0 {
        (s, s.next_up())
    } else {
        (s, s)
    }
}

/// Bounds for a result that overflowed to an infinity in round-to-nearest.
#[inline]
fn overflowed(s: f64) -> (f64, f64) {
    if s > 0.0 {
        (f64::MAX, s)
    } else if s < 0.0 {
        (s, f64::MIN)
    } else {
        (s, s)
    }
}

#[inline]
fn widen(x: f64) -> (f64, f64) {
    (x.next_down(), x.next_up())
}

#[inline]
pub(crate) fn add(a: f64, b: f64) -> (f64, f64) {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return overflowed(s);
    }
    bracket(s, e)
}

#[inline]
pub(crate) fn sub(a: f64, b: f64) -> (f64, f64) {
    add(a, -b)
}

#[inline]
pub(crate) fn mul(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    if !p.is_finite() {
        return overflowed(p);
    }
    if p.abs() < TINY {
        return widen(p);
    }
    let e = a.mul_add(b, -p);
    bracket(p, e)
}

#[inline]
pub(crate) fn div(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 0.0);
    }
    let q = a / b;
    if !q.is_finite() {
        return overflowed(q);
    }
    let qa = q.abs();
    if qa < TINY || qa > HUGE || b.abs() < TINY || b.abs() > HUGE || a.abs() < TINY {
        return widen(q);
    }
    // a = q*b + r exactly, so a/b = q + r/b.
    let r = (-q).mul_add(b, a);
    let sign = if (r > 0.0) == (b > 0.0) { 1.0 } else { -1.0 };
    if r == 0.0 {
        (q, q)
    } else {
        bracket(q, sign)
    }
}

#[inline]
pub(crate) fn sqrt(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    let s = x.sqrt();
    if x < TINY || x > HUGE {
        let (lo, hi) = widen(s);
        return (lo.max(0.0), hi);
    }
    let r = (-s).mul_add(s, x);
    bracket(s, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_operations_are_not_widened() {
        assert_eq!(add(1.0, 3.0), (4.0, 4.0));
        assert_eq!(mul(-1.5, 4.0), (-6.0, -6.0));
        assert_eq!(div(1.0, 4.0), (0.25, 0.25));
        assert_eq!(sqrt(9.0), (3.0, 3.0));
    }

    #[test]
    fn inexact_operations_bracket() {
        let (lo, hi) = add(0.1, 0.2);
        assert!(lo < hi);
        assert_eq!(hi, lo.next_up());
        let (lo, hi) = div(1.0, 3.0);
        assert_eq!(hi, lo.next_up());
        assert!(lo * 3.0 <= 1.0);
        let (lo, hi) = sqrt(2.0);
        assert_eq!(hi, lo.next_up());
        assert!(lo.mul_add(lo, -2.0) < 0.0);
        assert!(hi.mul_add(hi, -2.0) > 0.0);
    }

    #[test]
    fn subnormal_products_fall_back_to_widening() {
        let (lo, hi) = mul(1e-200, 1e-200);
        assert!(lo <= 0.0 && hi > 0.0);
    }
}
