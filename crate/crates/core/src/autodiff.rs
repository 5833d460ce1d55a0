//! Second-order forward-mode differentiation with interval coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};

/// Value, gradient and symmetric Hessian of a function of `n` variables,
/// each enclosed over an input box.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    value: Interval,
    grad: Vec<Interval>,
    /// Row-major `n x n`; kept exactly symmetric.
    hess: Vec<Interval>,
}

impl Jet2 {
    pub fn constant(value: Interval, n: usize) -> Jet2 {
        Jet2 {
            value,
            grad: vec![Interval::ZERO; n],
            hess: vec![Interval::ZERO; n * n],
        }
    }

    /// The `i`-th independent variable ranging over `x`.
    pub fn variable(i: usize, x: Interval, n: usize) -> Result<Jet2> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, count: n });
        }
        let mut j = Jet2::constant(x, n);
        j.grad[i] = Interval::ONE;
        Ok(j)
    }

    /// Independent variables over a box, one per coordinate.
    pub fn variables(x: &IntervalVector) -> Vec<Jet2> {
        let n = x.dim();
        (0..n)
            .map(|i| Jet2::variable(i, x[i], n).expect("index below dimension"))
            .collect()
    }

    pub fn n(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> Interval {
        self.value
    }

    pub fn grad(&self) -> IntervalVector {
        IntervalVector::new(self.grad.clone())
    }

    pub fn partial(&self, i: usize) -> Interval {
        self.grad[i]
    }

    pub fn second(&self, i: usize, j: usize) -> Interval {
        self.hess[i * self.n() + j]
    }

    pub fn hess(&self) -> IntervalMatrix {
        let n = self.n();
        IntervalMatrix::new(n, n, self.hess.clone()).expect("square hessian")
    }

    fn assert_same_n(&self, other: &Jet2) {
        assert_eq!(self.n(), other.n(), "jets over different variable counts");
    }

    fn from_parts(value: Interval, grad: Vec<Interval>, mut hess: Vec<Interval>) -> Jet2 {
        let n = grad.len();
        for i in 0..n {
            for j in i + 1..n {
                hess[j * n + i] = hess[i * n + j];
            }
        }
        Jet2 { value, grad, hess }
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    pub fn chain(&self, f0: Interval, f1: Interval, f2: Interval) -> Jet2 {
        let n = self.n();
        let grad = self.grad.iter().map(|&g| f1 * g).collect();
        let mut hess = vec![Interval::ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                hess[i * n + j] = f1 * self.hess[i * n + j] + f2 * (self.grad[i] * self.grad[j]);
            }
        }
        Jet2::from_parts(f0, grad, hess)
    }

    pub fn sqr(&self) -> Jet2 {
        let v = self.value;
        self.chain(v.sqr(), v * 2.0, Interval::point(2.0))
    }

    pub fn recip(&self) -> Result<Jet2> {
        let v = self.value;
        let r = v.recip()?;
        let r2 = r.sqr();
        Ok(self.chain(r, -r2, r2 * r * 2.0))
    }

    pub fn try_div(&self, other: &Jet2) -> Result<Jet2> {
        self.assert_same_n(other);
        Ok(self * &other.recip()?)
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        let s = self.value.sqrt()?;
        if s.contains_zero() {
            return Err(Error::Domain("sqrt derivative at zero"));
        }
        let d1 = Interval::point(0.5) / s;
        let d2 = -(d1 / (self.value * 2.0));
        Ok(self.chain(s, d1, d2))
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(c, -s, -c)
    }

    pub fn atan(&self) -> Jet2 {
        let u = self.value;
        let d = Interval::ONE + u.sqr();
        let d1 = Interval::ONE / d;
        let d2 = -(u * 2.0) / d.sqr();
        self.chain(u.atan(), d1, d2)
    }

    pub fn scale(&self, s: Interval) -> Jet2 {
        Jet2 {
            value: self.value * s,
            grad: self.grad.iter().map(|&g| g * s).collect(),
            hess: self.hess.iter().map(|&h| h * s).collect(),
        }
    }

    pub fn shift(&self, c: Interval) -> Jet2 {
        Jet2 { value: self.value + c, ..self.clone() }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(Interval::is_finite)
            && self.hess.iter().all(Interval::is_finite)
    }

    pub fn finite(self) -> Result<Jet2> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Overflow)
        }
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.assert_same_n(rhs);
        Jet2 {
            value: self.value + rhs.value,
            grad: self.grad.iter().zip(&rhs.grad).map(|(&a, &b)| a + b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.assert_same_n(rhs);
        Jet2 {
            value: self.value - rhs.value,
            grad: self.grad.iter().zip(&rhs.grad).map(|(&a, &b)| a - b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        self.assert_same_n(rhs);
        let n = self.n();
        let (u, v) = (self, rhs);
        let grad = (0..n).map(|i| u.value * v.grad[i] + v.value * u.grad[i]).collect();
        let mut hess = vec![Interval::ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let k = i * n + j;
                hess[k] = u.value * v.hess[k]
                    + v.value * u.hess[k]
                    + (u.grad[i] * v.grad[j] + u.grad[j] * v.grad[i]);
            }
        }
        Jet2::from_parts(u.value * v.value, grad, hess)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-Interval::ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &Jet2) -> Jet2 {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        -&self
    }
}

impl Add<Interval> for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Interval) -> Jet2 {
        self.shift(rhs)
    }
}

impl Add<Interval> for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Interval) -> Jet2 {
        self.shift(rhs)
    }
}

impl Sub<Interval> for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Interval) -> Jet2 {
        self.shift(-rhs)
    }
}

impl Mul<Interval> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Interval) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<Interval> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Interval) -> Jet2 {
        self.scale(rhs)
    }
}
