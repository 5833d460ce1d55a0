//! Oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::rc::Rc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tangency::autodiff::Jet2;
use tangency::cones::rump_positive_definite;
use tangency::{Interval, IntervalMatrix, IntervalVector};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Exact value of a finite double.
pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn contains_rat(iv: &Interval, q: &BigRational) -> bool {
    rat(iv.lo()) <= *q && *q <= rat(iv.hi())
}

/// Decides whether `[c - r, c + r]` lies inside `iv`; `None` when too close to call.
fn encloses_ball(iv: &Interval, c: &BigRational, r: &BigRational) -> Option<bool> {
    let (lo, hi) = (rat(iv.lo()), rat(iv.hi()));
    if lo <= c - r && c + r <= hi {
        Some(true)
    } else if c + r < lo || c - r > hi {
        Some(false)
    } else {
        None
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Taylor polynomial of sin (`odd`) or cos in Horner form, with its Lagrange remainder bound.
fn sin_cos_series(x: &BigRational, odd: bool, terms: u32) -> (BigRational, BigRational) {
    let x2 = x * x;
    let first = if odd { 1 } else { 0 };
    // p = 1 - x²/((n+1)(n+2)) p, from the innermost term outwards.
    let mut p = BigRational::one();
    for t in (0..terms - 1).rev() {
        let n = first + 2 * t;
        let d = BigRational::from_integer(BigInt::from((n + 1) * (n + 2)));
        p = BigRational::one() - &x2 * p / d;
    }
    let sum = if odd { x * p } else { p };
    let n = first + 2 * terms;
    let rem = pow(&x.abs(), n) / BigRational::from_integer(factorial(n));
    (sum, rem)
}

/// Alternating series for atan, `|x| <= 1/2`.
fn atan_series(x: &BigRational, terms: u32) -> (BigRational, BigRational) {
    let x2 = x * x;
    let mut sum = BigRational::zero();
    for k in (0..terms).rev() {
        let c = BigRational::new(BigInt::from(if k % 2 == 0 { 1 } else { -1 }), BigInt::from(2 * k + 1));
        sum = c + &x2 * sum;
    }
    let n = 2 * terms + 1;
    (x * sum, pow(&x.abs(), n) / BigRational::from_integer(BigInt::from(n)))
}

fn pow(x: &BigRational, n: u32) -> BigRational {
    (0..n).fold(BigRational::one(), |a, _| a * x)
}

/// Rigorous containment of `sin x`, `cos x` or `atan x` (`|x| <= 1/2` for atan).
pub fn elementary_contains(name: &str, x: f64, iv: &Interval) -> Option<bool> {
    let q = rat(x);
    let (c, r) = match name {
        "sin" => sin_cos_series(&q, true, 28),
        "cos" => sin_cos_series(&q, false, 28),
        "atan" => atan_series(&q, 30),
        _ => panic!("no oracle for {name}"),
    };
    encloses_ball(iv, &c, &r)
}

/// A finite double with a random exponent in `[-e, e]`.
pub fn random_f64(r: &mut StdRng, e: i32) -> f64 {
    let m: f64 = r.gen_range(1.0..2.0);
    let s = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    s * m * 2f64.powi(r.gen_range(-e..=e))
}

pub fn random_interval(r: &mut StdRng, e: i32) -> Interval {
    let a = random_f64(r, e);
    if r.gen_bool(0.1) {
        return Interval::point(a);
    }
    let w = a.abs() * 2f64.powi(r.gen_range(-30..=2));
    Interval::hull_of(a, a + w).unwrap()
}

pub fn sample_in(r: &mut StdRng, x: &Interval) -> f64 {
    if x.is_point() {
        return x.lo();
    }
    match r.gen_range(0..10) {
        0 => x.lo(),
        1 => x.hi(),
        _ => r.gen_range(x.lo()..=x.hi()),
    }
}

pub fn subinterval(r: &mut StdRng, x: &Interval) -> Interval {
    let a = sample_in(r, x);
    let b = sample_in(r, x);
    Interval::hull_of(a, b).unwrap()
}

#[derive(Debug, Default)]
pub struct SuiteStats {
    pub samples: usize,
    pub violations: usize,
    pub undecided: usize,
    pub messages: Vec<String>,
}

impl SuiteStats {
    pub fn fail(&mut self, msg: String) {
        self.violations += 1;
        if self.messages.len() < 10 {
            self.messages.push(msg);
        }
    }
}

pub const BINARY_OPS: [&str; 4] = ["add", "sub", "mul", "div"];
pub const UNARY_OPS: [&str; 7] = ["sqr", "sqrt", "abs", "powi3", "sin", "cos", "atan"];

pub fn apply_binary(op: &str, x: Interval, y: Interval) -> Option<Interval> {
    match op {
        "add" => Some(x + y),
        "sub" => Some(x - y),
        "mul" => Some(x * y),
        "div" => x.checked_div(&y).ok(),
        _ => unreachable!(),
    }
}

pub fn exact_binary(op: &str, x: f64, y: f64) -> BigRational {
    let (a, b) = (rat(x), rat(y));
    match op {
        "add" => a + b,
        "sub" => a - b,
        "mul" => a * b,
        "div" => a / b,
        _ => unreachable!(),
    }
}

pub fn apply_unary(op: &str, x: Interval) -> Option<Interval> {
    match op {
        "sqr" => Some(x.sqr()),
        "sqrt" => x.sqrt().ok(),
        "abs" => Some(x.abs()),
        "powi3" => Some(x.powi(3)),
        "sin" => Some(x.sin()),
        "cos" => Some(x.cos()),
        "atan" => Some(x.atan()),
        _ => unreachable!(),
    }
}

/// Point soundness of one unary operation at `x`: exact for the algebraic
/// operations, a correctly rounded reference widened by one ulp for the
/// transcendental ones.
pub fn unary_point_sound(op: &str, x: f64, iv: &Interval) -> bool {
    let q = rat(x);
    match op {
        "sqr" => contains_rat(iv, &(&q * &q)),
        "abs" => contains_rat(iv, &q.abs()),
        "powi3" => contains_rat(iv, &(&q * &q * &q)),
        "sqrt" => {
            let (lo, hi) = (rat(iv.lo()), rat(iv.hi()));
            iv.lo() <= 0.0 || (&lo * &lo <= q && (iv.hi().is_infinite() || q <= &hi * &hi))
        }
        "sin" | "cos" | "atan" => {
            let r = match op {
                "sin" => x.sin(),
                "cos" => x.cos(),
                _ => x.atan(),
            };
            // The reference is within one ulp of the true value, so a sound
            // enclosure must meet that window.
            iv.hi() >= r.next_down() && iv.lo() <= r.next_up()
        }
        _ => unreachable!(),
    }
}

/// Inclusion monotonicity and point soundness over random intervals.
pub fn interval_suite(samples: usize, seed: u64) -> SuiteStats {
    let mut r = rng(seed);
    let mut st = SuiteStats::default();
    for i in 0..samples {
        st.samples += 1;
        let x = random_interval(&mut r, 12);
        let xs = subinterval(&mut r, &x);
        let px = sample_in(&mut r, &xs);
        if i % 2 == 0 {
            let op = BINARY_OPS[r.gen_range(0..BINARY_OPS.len())];
            let y = random_interval(&mut r, 12);
            let ys = subinterval(&mut r, &y);
            let py = sample_in(&mut r, &ys);
            let (Some(big), Some(small)) = (apply_binary(op, x, y), apply_binary(op, xs, ys)) else {
                continue;
            };
            if !small.subset_of(&big) {
                st.fail(format!("{op}: {xs:?} {ys:?} -> {small:?} not in {big:?}"));
            }
            if !contains_rat(&small, &exact_binary(op, px, py)) {
                st.fail(format!("{op}({px:e}, {py:e}) not in {small:?}"));
            }
        } else {
            let op = UNARY_OPS[r.gen_range(0..UNARY_OPS.len())];
            let (x, xs, px) = if op == "sqrt" { (x.abs(), xs.abs(), px.abs()) } else { (x, xs, px) };
            let (Some(big), Some(small)) = (apply_unary(op, x), apply_unary(op, xs)) else {
                continue;
            };
            if !small.subset_of(&big) {
                st.fail(format!("{op}: {xs:?} -> {small:?} not in {big:?}"));
            }
            if !unary_point_sound(op, px, &small) {
                st.fail(format!("{op}({px:e}) not in {small:?}"));
            }
        }
    }
    st
}

/// Rigorous series check of sin, cos (on `[-4, 4]`) and atan (on `[-1/2, 1/2]`) at points.
pub fn elementary_series_suite(samples: usize, seed: u64) -> SuiteStats {
    let mut r = rng(seed);
    let mut st = SuiteStats::default();
    for i in 0..samples {
        st.samples += 1;
        let (name, x) = match i % 3 {
            0 => ("sin", r.gen_range(-4.0..4.0)),
            1 => ("cos", r.gen_range(-4.0..4.0)),
            _ => ("atan", r.gen_range(-0.5..0.5)),
        };
        let iv = apply_unary(name, Interval::point(x)).unwrap();
        match elementary_contains(name, x, &iv) {
            Some(true) => {}
            Some(false) => st.fail(format!("{name}({x:e}) not in {iv:?}")),
            None => st.undecided += 1,
        }
    }
    st
}

/// Expression trees evaluated both in doubles and in jets.
#[derive(Clone)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Rc<Expr>, Rc<Expr>),
    Sub(Rc<Expr>, Rc<Expr>),
    Mul(Rc<Expr>, Rc<Expr>),
    Div(Rc<Expr>, Rc<Expr>),
    Neg(Rc<Expr>),
    Sqr(Rc<Expr>),
    Sqrt(Rc<Expr>),
    Sin(Rc<Expr>),
    Cos(Rc<Expr>),
    Atan(Rc<Expr>),
}

pub fn v(i: usize) -> Expr {
    Expr::Var(i)
}

pub fn k(c: f64) -> Expr {
    Expr::Const(c)
}

impl Expr {
    pub fn sqr(self) -> Expr {
        Expr::Sqr(Rc::new(self))
    }
    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Rc::new(self))
    }
    pub fn sin(self) -> Expr {
        Expr::Sin(Rc::new(self))
    }
    pub fn cos(self) -> Expr {
        Expr::Cos(Rc::new(self))
    }
    pub fn atan(self) -> Expr {
        Expr::Atan(Rc::new(self))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Sqr(a) => a.eval(x).powi(2),
            Expr::Sqrt(a) => a.eval(x).sqrt(),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
            Expr::Atan(a) => a.eval(x).atan(),
        }
    }

    pub fn jet(&self, x: &[Jet2]) -> Jet2 {
        let n = x[0].n();
        match self {
            Expr::Var(i) => x[*i].clone(),
            Expr::Const(c) => Jet2::constant(Interval::point(*c), n),
            Expr::Add(a, b) => a.jet(x) + b.jet(x),
            Expr::Sub(a, b) => a.jet(x) - b.jet(x),
            Expr::Mul(a, b) => a.jet(x) * b.jet(x),
            Expr::Div(a, b) => a.jet(x).try_div(&b.jet(x)).expect("denominator away from zero"),
            Expr::Neg(a) => -a.jet(x),
            Expr::Sqr(a) => a.jet(x).sqr(),
            Expr::Sqrt(a) => a.jet(x).sqrt().expect("positive radicand"),
            Expr::Sin(a) => a.jet(x).sin(),
            Expr::Cos(a) => a.jet(x).cos(),
            Expr::Atan(a) => a.jet(x).atan(),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $var:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$var(Rc::new(self), Rc::new(rhs))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Rc::new(self))
    }
}

/// Fifty smooth expressions in three variables, all defined near `(0.7, -0.4, 1.3)`.
pub fn jet_corpus() -> Vec<(&'static str, Expr)> {
    let (x, y, z) = (v(0), v(1), v(2));
    vec![
        ("x", x.clone()),
        ("x+y", x.clone() + y.clone()),
        ("x-y", x.clone() - y.clone()),
        ("x*y", x.clone() * y.clone()),
        ("x*y*z", x.clone() * y.clone() * z.clone()),
        ("x/z", x.clone() / z.clone()),
        ("1/z", k(1.0) / z.clone()),
        ("x^2", x.clone().sqr()),
        ("(x+y)^2", (x.clone() + y.clone()).sqr()),
        ("x^2*y", x.clone().sqr() * y.clone()),
        ("sqrt z", z.clone().sqrt()),
        ("sqrt(x^2+z^2)", (x.clone().sqr() + z.clone().sqr()).sqrt()),
        ("sin x", x.clone().sin()),
        ("cos y", y.clone().cos()),
        ("atan z", z.clone().atan()),
        ("sin(x*y)", (x.clone() * y.clone()).sin()),
        ("cos(x+z)", (x.clone() + z.clone()).cos()),
        ("atan(y/z)", (y.clone() / z.clone()).atan()),
        ("sin x cos y", x.clone().sin() * y.clone().cos()),
        ("sin^2+cos^2", x.clone().sin().sqr() + x.clone().cos().sqr()),
        ("henon x", k(1.4) - x.clone().sqr() + k(0.3) * y.clone()),
        ("henon inverse y", (x.clone() - z.clone() + y.clone().sqr()) / k(-0.3)),
        ("quadratic form", x.clone().sqr() - k(4.0) * y.clone().sqr() + k(0.25) * z.clone().sqr()),
        ("cubic", x.clone() * x.clone() * x.clone()),
        ("quartic", x.clone().sqr().sqr()),
        ("x^2 y^2", x.clone().sqr() * y.clone().sqr()),
        ("rational", (x.clone() + k(2.0)) / (y.clone() + k(3.0))),
        ("nested sin", x.clone().sin().sin()),
        ("nested cos", (y.clone().cos() + z.clone()).cos()),
        ("atan of sum", (x.clone() + y.clone() + z.clone()).atan()),
        ("sqrt of sum", (x.clone() + z.clone() + k(1.0)).sqrt()),
        ("product of sqrt", z.clone().sqrt() * (x.clone() + k(1.0)).sqrt()),
        ("neg", -(x.clone() * z.clone())),
        ("angle push x", x.clone().cos() * k(-2.0) * z.clone() + x.clone().sin()),
        ("angle push y", z.clone().cos()),
        ("angle chart", (z.clone().sin() / (k(-2.0) * x.clone() * z.clone().cos() + z.clone().sin() * k(-0.3))).atan()),
        ("slope", (y.clone() + k(0.5) * z.clone()) / (k(2.0) + x.clone() * z.clone())),
        ("sin(x)/x", x.clone().sin() / x.clone()),
        ("exp-like", k(1.0) + x.clone() + x.clone().sqr() / k(2.0) + x.clone() * x.clone() * x.clone() / k(6.0)),
        ("cos(2x)", (k(2.0) * x.clone()).cos()),
        ("sin(x+y+z)", (x.clone() + y.clone() + z.clone()).sin()),
        ("yz/(1+x^2)", y.clone() * z.clone() / (k(1.0) + x.clone().sqr())),
        ("atan(x) atan(z)", x.clone().atan() * z.clone().atan()),
        ("sqrt(1+sin^2)", (k(1.0) + y.clone().sin().sqr()).sqrt()),
        ("difference of squares", (x.clone() - y.clone()) * (x.clone() + y.clone())),
        ("z^3 - xz", z.clone() * z.clone() * z.clone() - x.clone() * z.clone()),
        ("cos(xyz)", (x.clone() * y.clone() * z.clone()).cos()),
        ("1/(1+y^2)", k(1.0) / (k(1.0) + y.clone().sqr())),
        ("sin(y) atan(x)", y.clone().sin() * x.clone().atan()),
        ("sqrt(z) cos(x) - y", z.sqrt() * x.cos() - y),
    ]
}

pub const JET_BASE: [f64; 3] = [0.7, -0.4, 1.3];

/// Central-difference gradient and Hessian of `e` at `p`.
pub fn finite_differences(e: &Expr, p: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = p.len();
    let h1 = 1e-6;
    let h2 = 1e-4;
    let at = |d: &[(usize, f64)]| {
        let mut q = p.to_vec();
        for &(i, s) in d {
            q[i] += s;
        }
        e.eval(&q)
    };
    let grad = (0..n).map(|i| (at(&[(i, h1)]) - at(&[(i, -h1)])) / (2.0 * h1)).collect();
    let mut hess = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            hess[i][j] = if i == j {
                (at(&[(i, h2)]) - 2.0 * at(&[]) + at(&[(i, -h2)])) / (h2 * h2)
            } else {
                (at(&[(i, h2), (j, h2)]) - at(&[(i, h2), (j, -h2)]) - at(&[(i, -h2), (j, h2)]) + at(&[(i, -h2), (j, -h2)]))
                    / (4.0 * h2 * h2)
            };
        }
    }
    (grad, hess)
}

/// Whether the jet enclosure of every first and second derivative of `e` at
/// the point `p` contains the finite-difference estimate, up to the
/// truncation and cancellation error of the difference quotients.
pub fn jet_matches_differences(e: &Expr, p: &[f64]) -> Result<(), String> {
    let jets = Jet2::variables(&IntervalVector::from_points(p));
    let j = e.jet(&jets);
    let (g, h) = finite_differences(e, p);
    let scale = 1.0 + e.eval(p).abs();
    let near = |iv: Interval, x: f64, tol: f64| iv.lo() - tol <= x && x <= iv.hi() + tol;
    for i in 0..p.len() {
        if !near(j.partial(i), g[i], 1e-7 * scale) {
            return Err(format!("d/dx{i}: jet {:?}, difference {:e}", j.partial(i), g[i]));
        }
        for k in 0..p.len() {
            if !near(j.second(i, k), h[i][k], 1e-4 * scale) {
                return Err(format!("d2/dx{i}dx{k}: jet {:?}, difference {:e}", j.second(i, k), h[i][k]));
            }
        }
    }
    if !j.value().contains(e.eval(p)) {
        return Err(format!("value {:?} misses {:e}", j.value(), e.eval(p)));
    }
    Ok(())
}

/// A random symmetric interval matrix whose center is near the boundary of positive definiteness.
pub fn random_symmetric(r: &mut StdRng, n: usize) -> IntervalMatrix {
    let b = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    let shift = r.gen_range(-0.3..0.6);
    let c = &b * b.transpose() + DMatrix::identity(n, n) * shift;
    let scale = r.gen_range(0.0..0.4);
    let mut m = IntervalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let rad = scale * r.gen_range(0.0..1.0) * (0.1 + c[(i, j)].abs());
            let iv = Interval::centered(c[(i, j)], rad).unwrap();
            m.set(i, j, iv);
            m.set(j, i, iv);
        }
    }
    m
}

fn min_eigenvalue(a: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(a).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Symmetric members of `m`: every corner of the upper triangle plus random interior points.
pub fn symmetric_members(r: &mut StdRng, m: &IntervalMatrix, random: usize) -> Vec<DMatrix<f64>> {
    let n = m.rows();
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let build = |pick: &dyn Fn(usize, Interval) -> f64| {
        let mut a = DMatrix::zeros(n, n);
        for (t, &(i, j)) in idx.iter().enumerate() {
            let x = pick(t, m.get(i, j));
            a[(i, j)] = x;
            a[(j, i)] = x;
        }
        a
    };
    let mut out = Vec::new();
    for bits in 0..1u32 << idx.len() {
        out.push(build(&|t, iv: Interval| if bits & (1 << t) == 0 { iv.lo() } else { iv.hi() }));
    }
    for _ in 0..random {
        let picks: Vec<f64> = idx.iter().map(|&(i, j)| {
            let iv = m.get(i, j);
            if iv.is_point() { iv.lo() } else { r.gen_range(iv.lo()..=iv.hi()) }
        }).collect();
        out.push(build(&|t, _| picks[t]));
    }
    out
}

#[derive(Debug, Default)]
pub struct RumpStats {
    pub matrices: usize,
    pub certified: usize,
    /// Certified positive definite yet a sampled member has a nonpositive eigenvalue.
    pub unsound: usize,
    /// Not certified although every sampled member is positive definite.
    pub inconclusive: usize,
}

pub fn rump_suite(matrices: usize, seed: u64) -> RumpStats {
    let mut r = rng(seed);
    let mut st = RumpStats::default();
    for i in 0..matrices {
        let n = 2 + i % 2;
        let m = random_symmetric(&mut r, n);
        let certified = rump_positive_definite(&m).unwrap().positive_definite;
        let worst = symmetric_members(&mut r, &m, 200).into_iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min);
        st.matrices += 1;
        if certified {
            st.certified += 1;
            if worst <= 0.0 {
                st.unsound += 1;
            }
        } else if worst > 0.0 {
            st.inconclusive += 1;
        }
    }
    st
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap()
}
