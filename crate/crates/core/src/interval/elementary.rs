//! Rigorous sin, cos and atan.
//!
//! Point arguments are reduced against a three-part splitting of pi/2, the
//! reduced argument is fed to a truncated Taylor series in interval Horner
//! form, and the Lagrange remainder is added as a symmetric interval.

use std::sync::OnceLock;

use super::Interval;

const SIN_TERMS: usize = 14;
const ATAN_TERMS: usize = 24;
/// Beyond this magnitude the reduction is not attempted and [-1, 1] is returned.
const REDUCTION_LIMIT: f64 = 1.0e8;

/// Leading 33 bits of pi/2, so that `k * HEAD` is exact for `|k| < 2^20`.
fn half_pi_head() -> f64 {
    f64::from_bits(std::f64::consts::FRAC_PI_2.to_bits() & !((1u64 << 20) - 1))
}

/// `FRAC_PI_2 - head`, exact and at most 20 bits long.
fn half_pi_mid() -> f64 {
    std::f64::consts::FRAC_PI_2 - half_pi_head()
}

/// Enclosure of `pi/2 - FRAC_PI_2`.
fn half_pi_tail() -> Interval {
    let t = 6.123_233_995_736_766e-17_f64;
    Interval::raw(t.next_down(), t.next_up())
}

/// `(-1)^j / (2j+1)!` and `(-1)^j / (2j)!` for `j < SIN_TERMS`.
fn taylor_coefficients() -> &'static (Vec<Interval>, Vec<Interval>) {
    static COEFFS: OnceLock<(Vec<Interval>, Vec<Interval>)> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut odd = Vec::with_capacity(SIN_TERMS);
        let mut even = Vec::with_capacity(SIN_TERMS);
        let mut c_even = Interval::ONE;
        let mut c_odd = Interval::ONE;
        even.push(c_even);
        odd.push(c_odd);
        for j in 1..SIN_TERMS {
            let k = (2 * j) as f64;
            c_even = -(c_even / Interval::point((k - 1.0) * k));
            c_odd = -(c_odd / Interval::point(k * (k + 1.0)));
            even.push(c_even);
            odd.push(c_odd);
        }
        (odd, even)
    })
}

fn atan_coefficients() -> &'static Vec<Interval> {
    static COEFFS: OnceLock<Vec<Interval>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        (0..ATAN_TERMS)
            .map(|j| {
                let c = Interval::ONE / Interval::point((2 * j + 1) as f64);
                if j % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    })
}

fn horner(coeffs: &[Interval], s: Interval) -> Interval {
    coeffs
        .iter()
        .rev()
        .fold(Interval::ZERO, |acc, &c| acc * s + c)
}

/// Upper bound on `|r|^n / d`.
fn remainder_bound(r: Interval, n: u32, d: Interval) -> Interval {
    let m = (r.abs().powi(n) / d).hi();
    Interval::raw(-m, m)
}

fn factorial(n: u32) -> Interval {
    (1..=n).fold(Interval::ONE, |acc, k| acc * Interval::point(k as f64))
}

fn sin_series(r: Interval) -> Interval {
    let (odd, _) = taylor_coefficients();
    let n = 2 * SIN_TERMS as u32 + 1;
    // Leading term kept separate so Horner rounding only touches the small tail.
    let s = r.sqr();
    r + (r * s) * horner(&odd[1..], s) + remainder_bound(r, n, factorial(n))
}

fn cos_series(r: Interval) -> Interval {
    let (_, even) = taylor_coefficients();
    let n = 2 * SIN_TERMS as u32;
    let s = r.sqr();
    Interval::ONE - s * 0.5 + s.sqr() * horner(&even[2..], s) + remainder_bound(r, n, factorial(n))
}

fn unit() -> Interval {
    Interval::raw(-1.0, 1.0)
}

fn clamp_unit(x: Interval) -> Interval {
    x.intersect(&unit()).unwrap_or(x)
}

/// Returns `(sin x, cos x)` for a point `x`.
fn sin_cos_point(x: f64) -> (Interval, Interval) {
    if !x.is_finite() || x.abs() > REDUCTION_LIMIT {
        return (unit(), unit());
    }
    let k = (x / std::f64::consts::FRAC_PI_2).round();
    let ki = Interval::point(k);
    // x - k*head is exact by Sterbenz; the small corrections are summed first
    // so the reduced argument picks up a single rounding.
    let lead = Interval::point(x) - ki * Interval::point(half_pi_head());
    let r = lead - (ki * Interval::point(half_pi_mid()) + ki * half_pi_tail());
    let s = sin_series(r);
    let c = cos_series(r);
    let (sin, cos) = match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    (clamp_unit(sin), clamp_unit(cos))
}

/// Does `[lo, hi]` possibly contain a point `offset + 2 pi m`?
fn hits_lattice(x: Interval, offset: Interval) -> bool {
    let two_pi = Interval::PI * 2.0;
    let m0 = ((x.lo() - offset.mid()) / two_pi.mid()).floor();
    (-1..=2).any(|dm| {
        let p = offset + two_pi * Interval::point(m0 + dm as f64);
        p.overlaps(&x)
    })
}

fn periodic(x: Interval, f: fn(f64) -> (Interval, Interval), pick: usize, max_at: Interval, min_at: Interval) -> Interval {
    if !x.is_finite() || x.width() >= 2.0 * Interval::PI.lo() || x.mag() > REDUCTION_LIMIT {
        return unit();
    }
    let at = |v: f64| {
        let (s, c) = f(v);
        if pick == 0 {
            s
        } else {
            c
        }
    };
    let mut out = at(x.lo()).hull(&at(x.hi()));
    if hits_lattice(x, max_at) {
        out = Interval::raw(out.lo(), 1.0);
    }
    if hits_lattice(x, min_at) {
        out = Interval::raw(-1.0, out.hi());
    }
    out
}

impl Interval {
    pub fn sin(&self) -> Interval {
        periodic(*self, sin_cos_point, 0, Interval::HALF_PI, -Interval::HALF_PI)
    }

    pub fn cos(&self) -> Interval {
        periodic(*self, sin_cos_point, 1, Interval::ZERO, Interval::PI)
    }

    /// Monotone arctangent.
    pub fn atan(&self) -> Interval {
        let lo = atan_point(self.lo());
        let hi = atan_point(self.hi());
        Interval::raw(lo.lo(), hi.hi())
    }
}

fn atan_point(x: f64) -> Interval {
    if x.is_nan() {
        return Interval::raw(-Interval::HALF_PI.hi(), Interval::HALF_PI.hi());
    }
    if x < 0.0 {
        return -atan_point(-x);
    }
    if x == 0.0 {
        return Interval::ZERO;
    }
    if x > 1.0 {
        if x.is_infinite() {
            return Interval::HALF_PI;
        }
        // atan x = pi/2 - atan(1/x), with 1/x enclosed and atan monotone.
        let q = Interval::ONE / Interval::point(x);
        let t = atan_unit(q.lo()).hull(&atan_unit(q.hi()));
        return Interval::HALF_PI - t;
    }
    atan_unit(x)
}

/// Arctangent of `y` in `[0, 1]`.
fn atan_unit(y: f64) -> Interval {
    if y <= 0.414 {
        return atan_series(Interval::point(y));
    }
    // atan y = pi/4 + atan((y - 1)/(y + 1)), with |(y-1)/(y+1)| <= 0.415.
    let yi = Interval::point(y);
    let z = (yi - 1.0) / (yi + 1.0);
    Interval::QUARTER_PI + atan_series(z)
}

fn atan_series(z: Interval) -> Interval {
    let n = 2 * ATAN_TERMS as u32 + 1;
    let s = z.sqr();
    z + (z * s) * horner(&atan_coefficients()[1..], s) + remainder_bound(z, n, Interval::point(n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn ulps(x: Interval) -> u64 {
        x.hi().to_bits().abs_diff(x.lo().to_bits())
    }

    #[test]
    fn sin_cos_enclose_libm_values() {
        for &x in &[0.0, 0.1, 0.5, 1.0, 2.0, 3.0, -4.0, 10.0, 100.0, 1234.5678, -std::f64::consts::FRAC_PI_4] {
            let p = Interval::point(x);
            let (s, c) = (p.sin(), p.cos());
            assert!(s.contains(x.sin()) || (s.lo() - x.sin()).abs() < 1e-15, "sin {x}: {s:?}");
            assert!(c.contains(x.cos()) || (c.lo() - x.cos()).abs() < 1e-15, "cos {x}: {c:?}");
            assert!(s.width() < 1e-14 && c.width() < 1e-14);
        }
    }

    #[test]
    fn reduction_constants_split_half_pi() {
        assert_eq!(half_pi_head() + half_pi_mid(), FRAC_PI_2);
        assert_eq!(half_pi_head().to_bits() & ((1 << 20) - 1), 0);
    }

    #[test]
    fn point_widths_stay_within_a_few_ulps() {
        let mut worst = (0, 0, 0);
        for i in 0..2000 {
            let x = -6.0 + 12.0 * (i as f64 + 0.5) / 2000.0;
            let p = Interval::point(x);
            worst.0 = worst.0.max(ulps(p.sin()));
            worst.1 = worst.1.max(ulps(p.cos()));
            worst.2 = worst.2.max(ulps(p.atan()));
        }
        println!("worst widths in ulps (sin, cos, atan): {worst:?}");
        assert!(worst.0 <= 8 && worst.1 <= 8 && worst.2 <= 8, "{worst:?}");
    }

    #[test]
    fn sin_detects_interior_maximum() {
        let x = Interval::raw(0.0, Interval::PI.hi());
        let s = x.sin();
        assert_eq!(s.hi(), 1.0);
        assert!(s.lo() <= 0.0 && s.lo() > -1e-15);
    }

    #[test]
    fn cos_detects_interior_minimum() {
        let c = Interval::raw(3.0, 3.5).cos();
        assert_eq!(c.lo(), -1.0);
        assert!(c.contains(3.5f64.cos()));
    }

    #[test]
    fn wide_arguments_give_unit_range() {
        assert_eq!(Interval::raw(0.0, 7.0).sin(), Interval::raw(-1.0, 1.0));
    }

    #[test]
    fn sin_of_zero_is_exact() {
        assert_eq!(Interval::ZERO.sin(), Interval::ZERO);
        assert_eq!(Interval::ZERO.cos(), Interval::ONE);
    }

    #[test]
    fn atan_special_values() {
        assert!(Interval::ONE.atan().contains(FRAC_PI_4));
        assert!(Interval::point(-1.0).atan().contains(-FRAC_PI_4));
        assert_eq!(Interval::ZERO.atan(), Interval::ZERO);
        let big = Interval::point(1e300).atan();
        assert!(big.contains(FRAC_PI_2));
        assert!(big.hi() < PI);
    }

    #[test]
    fn atan_encloses_libm() {
        for &x in &[0.2, 0.414, 0.5, 0.9, 1.5, 3.0, 50.0, -7.0] {
            let a = Interval::point(x).atan();
            assert!((a.mid() - x.atan()).abs() < 4e-16 * x.atan().abs().max(1.0), "atan {x}: {a:?}");
        }
    }

    #[test]
    fn atan_is_monotone_on_intervals() {
        let a = Interval::raw(-0.5, 2.0).atan();
        assert!(a.contains((-0.5f64).atan()) && a.contains(2.0f64.atan()));
    }
}
