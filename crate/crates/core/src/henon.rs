//! The Hénon family `H_a(x, y) = (a - x² + b y, x)` and the end-to-end
//! tangency proof built on it.
//!
//! The chain `N_0 => N_1 => ... => N_15` follows the projectivized orbit of a
//! point close to a homoclinic tangency, from the unstable direction at the
//! fixed point back to its stable direction. Centers and frames are generated
//! from the configuration; only their validity is certified.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autodiff::Jet2;
use crate::cones::{check_cone, ConeCertificate};
use crate::covering::{check_covering, AxisLink, CoveringCertificate};
use crate::error::{Error, Result};
use crate::hset::{HSet, QuadraticForm};
use crate::interval::{Interval, IntervalVector};
use crate::manifold::{verify_disk, DiskCertificate, DiskOptions, DiskProblem, Side};
use crate::stage::Stage;
use crate::projective::{
    angle_to_direction, direction_to_angle, ChartPoint, Direction, PlanarMapFamily, ProjectiveMap,
};

/// Built-in chain data for b = -0.3.
pub const DEFAULT_CONFIG: &str = include_str!("../config/henon_default.json");

/// `H_a(x, y) = (a - x² + b y, x)` with `b` fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HenonFamily {
    pub b: Interval,
}

impl HenonFamily {
    pub fn new(b: Interval) -> Result<Self> {
        if b.contains_zero() || !b.is_finite() {
            return Err(Error::Config(format!("Hénon map needs b != 0, got {b:?}")));
        }
        Ok(HenonFamily { b })
    }

    /// Planar image on intervals.
    pub fn map(&self, z: &IntervalVector, a: Interval) -> IntervalVector {
        IntervalVector::new(vec![a - z[0].sqr() + self.b * z[1], z[0]])
    }

    pub fn map_inverse(&self, z: &IntervalVector, a: Interval) -> IntervalVector {
        IntervalVector::new(vec![z[1], (z[0] - a + z[1].sqr()) / self.b])
    }

    /// `x₀ = y₀ = (b - √((b - 1)² + 4a) - 1) / 2`.
    pub fn fixed_point(&self, a: Interval) -> Result<IntervalVector> {
        let b = self.b;
        let disc = ((b - 1.0).sqr() + a * 4.0).sqrt()?;
        let x = (b - disc - 1.0) * 0.5;
        IntervalVector::new(vec![x, x]).finite()
    }

    /// `[[-2x, b], [1, 0]]`.
    pub fn jacobian(&self, z: &IntervalVector) -> [[Interval; 2]; 2] {
        [[z[0] * -2.0, self.b], [Interval::ONE, Interval::ZERO]]
    }
}

impl PlanarMapFamily for HenonFamily {
    fn name(&self) -> &str {
        "henon"
    }

    fn forward(&self, x: &Jet2, y: &Jet2, a: &Jet2) -> Result<(Jet2, Jet2)> {
        Ok((a - &x.sqr() + y * self.b, x.clone()))
    }

    fn inverse(&self, x: &Jet2, y: &Jet2, a: &Jet2) -> Result<(Jet2, Jet2)> {
        let num = x - a + y.sqr();
        Ok((y.clone(), num * self.b.recip()?))
    }
}

/// `coeff · λ^lambda_pow · μ^mu_pow · growth^growth_pow`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormTerm {
    pub coeff: f64,
    #[serde(default)]
    pub lambda_pow: i32,
    #[serde(default)]
    pub mu_pow: i32,
    #[serde(default)]
    pub growth_pow: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormRow {
    pub u: FormTerm,
    pub s: FormTerm,
    pub t: FormTerm,
    pub a: FormTerm,
}

/// Half-widths in units of `diameter_scale`; the parameter half-width is
/// `param_radius · param_growth^a_pow`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterRow {
    pub u: f64,
    pub s: f64,
    pub t: f64,
    pub a_pow: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnstableAxes {
    pub before_switch: Vec<usize>,
    pub after_switch: Vec<usize>,
}

/// Everything that defines the Hénon chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenonConfig {
    pub family: String,
    pub a0: f64,
    pub b: f64,
    pub param_radius: f64,
    pub lambda: f64,
    pub mu: f64,
    /// Offsets of the seed from the fixed point along the eigenvectors.
    pub seed_unstable: f64,
    pub seed_stable: f64,
    /// First chain index whose frame follows the stable direction.
    pub switch_index: usize,
    pub orbit_width_limit: f64,
    pub diameter_scale: f64,
    pub param_growth: f64,
    pub form_growth: f64,
    pub diameters: Vec<DiameterRow>,
    pub forms: Vec<FormRow>,
    pub unstable_axes: UnstableAxes,
}

impl HenonConfig {
    pub fn default_config() -> HenonConfig {
        serde_json::from_str(DEFAULT_CONFIG).expect("embedded configuration parses")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.family != "henon" {
            return bad(format!("unknown family {:?}", self.family));
        }
        let finite = [self.a0, self.b, self.lambda, self.mu, self.seed_unstable, self.seed_stable];
        if finite.iter().any(|x| !x.is_finite()) {
            return bad("non-finite constant".into());
        }
        if self.b == 0.0 {
            return bad("b must be nonzero".into());
        }
        let positive = [
            ("param_radius", self.param_radius),
            ("orbit_width_limit", self.orbit_width_limit),
            ("diameter_scale", self.diameter_scale),
            ("param_growth", self.param_growth),
            ("form_growth", self.form_growth),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let n = self.diameters.len();
        if n < 4 || self.forms.len() != n {
            return bad(format!("{n} diameter rows and {} form rows", self.forms.len()));
        }
        if self.switch_index < 3 || self.switch_index > n - 2 {
            return bad(format!("switch_index {} outside 3..={}", self.switch_index, n - 2));
        }
        Ok(())
    }

    pub fn set_count(&self) -> usize {
        self.diameters.len()
    }

    fn term(&self, t: &FormTerm) -> f64 {
        t.coeff * self.lambda.powi(t.lambda_pow) * self.mu.powi(t.mu_pow) * self.form_growth.powi(t.growth_pow)
    }

    /// Coefficients `(u, s, t, a)` of the form on set `i`.
    pub fn form_coeffs(&self, i: usize) -> Vec<f64> {
        let r = &self.forms[i];
        vec![self.term(&r.u), self.term(&r.s), self.term(&r.t), self.term(&r.a)]
    }

    /// Half-widths `(u, s, t, a)` of set `i`.
    pub fn half_widths(&self, i: usize) -> Vec<f64> {
        let r = &self.diameters[i];
        let k = self.diameter_scale;
        vec![r.u * k, r.s * k, r.t * k, self.param_radius * self.param_growth.powi(r.a_pow)]
    }

    pub fn unstable_axes_of(&self, i: usize) -> Vec<usize> {
        if i < self.switch_index {
            self.unstable_axes.before_switch.clone()
        } else {
            self.unstable_axes.after_switch.clone()
        }
    }
}

/// Smallest interval containing every real that rounds to `x`.
fn decimal(x: f64) -> Interval {
    Interval::hull_of(x.next_down(), x.next_up()).expect("finite constant")
}

fn normalize(v: &IntervalVector) -> Result<IntervalVector> {
    let n = v.norm();
    Ok(v.map(|x| x / n)).and_then(|w| w.finite())
}

/// Rigorous enclosures of the constants derived from the configuration.
#[derive(Clone, Debug)]
pub struct HenonProofData {
    pub config: HenonConfig,
    pub family: HenonFamily,
    pub a0: Interval,
    pub fixed_point: IntervalVector,
    pub unstable_dir: IntervalVector,
    pub stable_dir: IntervalVector,
    pub seed: IntervalVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedQuality {
    /// `‖H⁻¹(z₁) - z₀‖`.
    pub backward_distance: Interval,
    /// `‖H^{n-2}(z₁) - z₀‖`, `n` the number of sets.
    pub forward_distance: Interval,
    pub forward_steps: usize,
    /// Final tangent direction of the orbit in eigenvector coordinates (floating point estimate).
    pub final_direction: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResiduals {
    /// `‖DH(z₀) u₀ - λ u₀‖` and `‖DH(z₀) s₀ - μ s₀‖`.
    pub unstable: Interval,
    pub stable: Interval,
}

impl HenonProofData {
    pub fn new(config: &HenonConfig) -> Result<Self> {
        config.validate()?;
        let family = HenonFamily::new(decimal(config.b))?;
        let a0 = decimal(config.a0);
        let fixed_point = family.fixed_point(a0)?;
        let x0 = fixed_point[0];
        let root = (x0.sqr() + family.b).sqrt()?;
        let unstable_dir = normalize(&IntervalVector::new(vec![-x0 + root, Interval::ONE]))?;
        let stable_dir = normalize(&IntervalVector::new(vec![-x0 - root, Interval::ONE]))?;
        let seed = fixed_point
            .add(&unstable_dir.scale(decimal(config.seed_unstable)))?
            .add(&stable_dir.scale(decimal(config.seed_stable)))?;
        Ok(HenonProofData { config: config.clone(), family, a0, fixed_point, unstable_dir, stable_dir, seed })
    }

    /// `a₀ ± param_radius`.
    pub fn parameter(&self) -> Interval {
        self.parameter_with_radius(self.config.param_radius)
    }

    fn parameter_with_radius(&self, r: f64) -> Interval {
        self.a0 + Interval::hull_of(-r, r).expect("finite radius")
    }

    pub fn projective_map(&self) -> ProjectiveMap {
        ProjectiveMap::new(Arc::new(self.family), Direction::Forward)
    }

    /// `H_{a₀}(z₀) - z₀`.
    pub fn fixed_point_residual(&self) -> Result<IntervalVector> {
        self.family.map(&self.fixed_point, self.a0).sub(&self.fixed_point)
    }

    pub fn eigen_residuals(&self) -> Result<EigenResiduals> {
        let j = self.family.jacobian(&self.fixed_point);
        let apply = |v: &IntervalVector| {
            IntervalVector::new(vec![j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]])
        };
        let r = |v: &IntervalVector, ev: f64| -> Result<Interval> {
            Ok(apply(v).sub(&v.scale(Interval::point(ev)))?.norm())
        };
        Ok(EigenResiduals {
            unstable: r(&self.unstable_dir, self.config.lambda)?,
            stable: r(&self.stable_dir, self.config.mu)?,
        })
    }

    pub fn seed_quality(&self) -> Result<SeedQuality> {
        let back = self.family.map_inverse(&self.seed, self.a0).sub(&self.fixed_point)?.norm();
        let steps = self.config.set_count() - 2;
        let mut z = self.seed.clone();
        for _ in 0..steps {
            z = self.family.map(&z, self.a0).finite()?;
        }
        let forward = z.sub(&self.fixed_point)?.norm();

        // Floating-point estimate only: the angle is too sensitive for an enclosure.
        let map = self.projective_map();
        let (z1, t) = (self.seed.mid(), direction_to_angle(&self.unstable_dir)?.mid());
        let mut c = [z1[0], z1[1], t];
        for _ in 0..steps {
            let p = ChartPoint::new(Interval::point(c[0]), Interval::point(c[1]), Interval::point(c[2]), self.a0)?;
            let q = map.apply(&p)?;
            c = [q.x.mid(), q.y.mid(), q.t.mid()];
        }
        let dir = angle_to_direction(Interval::point(c[2])).mid();
        let (u, s) = (self.unstable_dir.mid(), self.stable_dir.mid());
        let frame = DMatrix::from_column_slice(2, 2, &[u[0], u[1], s[0], s[1]]);
        let inv = frame.try_inverse().ok_or(Error::Singular)?;
        let c = inv * nalgebra::DVector::from_column_slice(&dir);
        Ok(SeedQuality {
            backward_distance: back,
            forward_distance: forward,
            forward_steps: steps,
            final_direction: [c[0], c[1]],
        })
    }
}

/// Center of one chain set with the width of the enclosure it was taken from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub center: Vec<f64>,
    pub enclosure_width: f64,
}

/// The sets, forms and disk data of the proof.
#[derive(Clone, Debug)]
pub struct HenonChain {
    pub sets: Vec<HSet>,
    pub forms: Vec<QuadraticForm>,
    pub orbit: Vec<OrbitPoint>,
    pub stable_disk_set: HSet,
    pub stable_disk_form: QuadraticForm,
    pub unstable_disk_set: HSet,
    pub unstable_disk_form: QuadraticForm,
}

fn unit(v: &[f64]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

fn frame4(u: [f64; 2], s: [f64; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            u[0], s[0], 0.0, 0.0, //
            u[1], s[1], 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
}

fn frame3(u: [f64; 2], s: [f64; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[u[0], s[0], 0.0, u[1], s[1], 0.0, 0.0, 0.0, 1.0])
}

/// Midpoint direction `(cos t, sin t)` of an angle enclosure.
fn direction_of(t: Interval) -> [f64; 2] {
    unit(&angle_to_direction(t).mid())
}

/// Image of the direction `v` at `z` under the tangent map of `H_{a}` (or its inverse).
fn push_direction(map: &ProjectiveMap, z: &[f64], v: [f64; 2], a: Interval) -> Result<[f64; 2]> {
    let t = direction_to_angle(&IntervalVector::from_points(&v))?;
    let p = ChartPoint::new(Interval::point(z[0]), Interval::point(z[1]), t, a)?;
    Ok(direction_of(map.apply(&p)?.t))
}

pub fn build_chain(data: &HenonProofData) -> Result<HenonChain> {
    let cfg = &data.config;
    let n = cfg.set_count();
    let k = cfg.switch_index;
    let map = data.projective_map();
    let a0 = data.a0;
    let z0 = data.fixed_point.mid();
    let u0 = unit(&data.unstable_dir.mid());
    let s0 = unit(&data.stable_dir.mid());
    let t_u0 = direction_to_angle(&data.unstable_dir)?;
    let t_s0 = direction_to_angle(&data.stable_dir)?;

    // Centers: c_0 = (z₀, u₀), c_1 = (z₁, u₀), c_{n-1} = (z₀, s₀). The tangent
    // angle of the forward orbit of c_1 is hypersensitive near the end of the
    // chain, so c_2..c_{k-1} follow c_1 forward while c_k..c_{n-2} are pulled
    // back from (H^{n-2}(z₁), s₀), where the angle dynamics contract.
    let inverse = map.inverse();
    let point = |x: &[f64], t: Interval, w: f64| OrbitPoint {
        center: vec![x[0], x[1], t.mid(), a0.mid()],
        enclosure_width: w,
    };
    let step = |m: &ProjectiveMap, c: &[f64], i: usize| -> Result<OrbitPoint> {
        // Restart from the previous midpoint: a single step keeps the enclosure thin.
        let p = ChartPoint::new(Interval::point(c[0]), Interval::point(c[1]), Interval::point(c[2]), a0)?;
        let q = m.apply(&p)?;
        let width = q.to_vector().max_width();
        if width > cfg.orbit_width_limit {
            return Err(Error::OrbitBlowup { step: i, width });
        }
        Ok(point(&[q.x.mid(), q.y.mid()], q.t, width))
    };
    let mut orbit = vec![point(&z0, t_u0, data.fixed_point.max_width().max(t_u0.width()))];
    let z1 = data.seed.mid();
    orbit.push(point(&z1, Interval::point(t_u0.mid()), 0.0));
    for i in 2..k {
        let next = step(&map, &orbit[i - 1].center, i)?;
        orbit.push(next);
    }
    let mut end = orbit[k - 1].center.clone();
    for i in k..n {
        end = step(&map, &end, i)?.center;
    }
    end[2] = t_s0.mid();
    let mut tail = vec![step(&inverse, &end, n - 2)?];
    for i in (k..n - 2).rev() {
        let next = step(&inverse, &tail.last().expect("nonempty").center, i)?;
        tail.push(next);
    }
    orbit.extend(tail.into_iter().rev());
    orbit.push(point(&z0, t_s0, data.fixed_point.max_width().max(t_s0.width())));

    let z = |i: usize| &orbit[i].center[..2];
    let dir = |i: usize| direction_of(Interval::point(orbit[i].center[2]));

    let mut us = vec![u0; n];
    let mut ss = vec![s0; n];
    for i in 2..k {
        us[i] = dir(i);
        let next = dir(i + 1);
        ss[i] = push_direction(&inverse, z(i + 1), [-next[1], next[0]], a0)?;
    }
    for i in k..n - 1 {
        ss[i] = dir(i);
        us[i] = if i == k {
            push_direction(&map, z(k - 1), ss[k - 1], a0)?
        } else {
            push_direction(&map, z(i - 1), us[i - 1], a0)?
        };
    }

    let mut sets = Vec::with_capacity(n);
    let mut forms = Vec::with_capacity(n);
    for i in 0..n {
        let set = HSet::new(
            format!("N{i}"),
            orbit[i].center.clone(),
            frame4(us[i], ss[i]),
            cfg.half_widths(i),
            cfg.unstable_axes_of(i),
        )?;
        forms.push(QuadraticForm::for_set(cfg.form_coeffs(i), &set)?);
        sets.push(set);
    }

    let last = n - 1;
    let minor = |i: usize| -> Vec<f64> { cfg.half_widths(i)[..3].to_vec() };
    let stable_disk_set = HSet::new(
        format!("N{last}~"),
        orbit[last].center[..3].to_vec(),
        frame3(u0, s0),
        minor(last),
        vec![0, 2],
    )?;
    let stable_disk_form = QuadraticForm::for_set(cfg.form_coeffs(last)[..3].to_vec(), &stable_disk_set)?;
    let unstable_disk_set =
        HSet::new("N0~", orbit[0].center[..3].to_vec(), frame3(u0, s0), minor(0), vec![1, 2])?;
    let unstable_disk_form = QuadraticForm::for_set(
        cfg.form_coeffs(0)[..3].iter().map(|c| -c).collect(),
        &unstable_disk_set,
    )?;

    Ok(HenonChain { sets, forms, orbit, stable_disk_set, stable_disk_form, unstable_disk_set, unstable_disk_form })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub parameter: Interval,
    pub b: Interval,
    pub fixed_point_formula: String,
    pub fixed_point: IntervalVector,
    /// The mathematical step from the certified data to the statement; not machine checked.
    pub proof_schema: String,
    pub statement: String,
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyCertificate {
    pub parameter: Interval,
    pub seed: SeedQuality,
    pub orbit: Vec<OrbitPoint>,
    pub coverings: Vec<Stage<CoveringCertificate>>,
    pub cones: Vec<Stage<ConeCertificate>>,
    pub stable_disk: Stage<DiskCertificate>,
    pub unstable_disk: Stage<DiskCertificate>,
    pub conclusion: Conclusion,
    pub verified: bool,
    pub elapsed_seconds: f64,
}

impl TangencyCertificate {
    /// Loci of every failed stage, in chain order.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.coverings {
            out.extend(s.locus().map(|l| format!("covering {l}")));
        }
        for s in &self.cones {
            out.extend(s.locus().map(|l| format!("cone {l}")));
        }
        out.extend(self.unstable_disk.locus().map(|l| format!("disk: {l}")));
        out.extend(self.stable_disk.locus().map(|l| format!("disk: {l}")));
        out
    }
}

/// Knobs of a proof run that are not part of the chain data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofSettings {
    /// Subdivision applied to every covering, cone and disk check unless overridden.
    pub grid: Vec<usize>,
    /// Per-link grid overrides, keyed by the index of the source set.
    #[serde(default)]
    pub link_grids: BTreeMap<usize, Vec<usize>>,
    /// Per-link axis correspondences for the covering checks.
    #[serde(default)]
    pub correspondences: BTreeMap<usize, Vec<AxisLink>>,
    pub disk: DiskOptions,
}

impl Default for ProofSettings {
    fn default() -> Self {
        ProofSettings {
            grid: vec![1],
            link_grids: BTreeMap::new(),
            correspondences: BTreeMap::new(),
            disk: DiskOptions::default(),
        }
    }
}

impl ProofSettings {
    /// A grid spec of length 1 is broadcast to every axis.
    fn grid_for(&self, link: Option<usize>, dim: usize) -> Result<Vec<usize>> {
        let g = link.and_then(|k| self.link_grids.get(&k)).unwrap_or(&self.grid);
        let g = match g.len() {
            1 => vec![g[0]; dim],
            n if n >= dim => g[..dim].to_vec(),
            n => return Err(Error::Config(format!("grid of length {n} for a {dim}-dimensional set"))),
        };
        if g.iter().any(|&k| k == 0) {
            return Err(Error::Config("grid entries must be positive".into()));
        }
        Ok(g)
    }
}

pub const FIXED_POINT_FORMULA: &str = "x0 = y0 = (b - sqrt((b - 1)^2 + 4a) - 1) / 2";

const PROOF_SCHEMA: &str = "The covering relations with cone conditions carry the horizontal disk of the \
center-unstable manifold of the projectivized map at (z0, [u0]) through the chain to the last set, where it \
meets the vertical disk of the center-stable manifold at (z0, [s0]) in exactly one point, transversally. A \
transversal intersection of these manifolds of the projectivized family is a quadratic tangency of the \
stable and unstable curves of the planar family that unfolds generically in the parameter.";

/// `quadratic homoclinic tangency ... for a ∈ a₀ ± r, b = b₀`.
pub fn statement(cfg: &HenonConfig) -> String {
    format!(
        "quadratic homoclinic tangency unfolding generically verified for a ∈ {} ± {:e}, b = {}",
        cfg.a0, cfg.param_radius, cfg.b
    )
}

pub fn run_proof(config: &HenonConfig, settings: &ProofSettings) -> Result<TangencyCertificate> {
    let start = Instant::now();
    let data = HenonProofData::new(config)?;
    let seed = data.seed_quality()?;
    let chain = build_chain(&data)?;
    let map = data.projective_map();
    let n = chain.sets.len();

    let mut grids = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        grids.push(settings.grid_for(Some(k), 4)?);
    }
    let disk_grid = settings.grid_for(None, 3)?;

    let (links, disks) = rayon::join(
        || {
            (0..n - 1)
                .into_par_iter()
                .map(|k| {
                    let (src, tgt) = (&chain.sets[k], &chain.sets[k + 1]);
                    let cov = check_covering(src, tgt, &map, &grids[k], settings.correspondences.get(&k).map(|v| &v[..]));
                    let cone = check_cone(src, &chain.forms[k], tgt, &chain.forms[k + 1], &map, &grids[k]);
                    (
                        Stage::from_result(cov, |_| true, |_| String::new()),
                        Stage::from_result(cone, |c| c.positive_definite, |c| {
                            format!("{}: interval matrix not certified positive definite (min pivot {:e})", c.link, c.outcome.min_pivot)
                        }),
                    )
                })
                .collect::<Vec<_>>()
        },
        || {
            let last = n - 1;
            let stable = DiskProblem {
                side: Side::Stable,
                set: &chain.stable_disk_set,
                form: &chain.stable_disk_form,
                param_coefficient: chain.forms[last].coeff(3),
                map: map.clone(),
                parameter: data.parameter_with_radius(config.half_widths(last)[3]),
                grid: disk_grid.clone(),
            };
            let unstable = DiskProblem {
                side: Side::Unstable,
                set: &chain.unstable_disk_set,
                form: &chain.unstable_disk_form,
                param_coefficient: chain.forms[0].coeff(3),
                map: map.inverse(),
                parameter: data.parameter_with_radius(config.half_widths(0)[3]),
                grid: disk_grid.clone(),
            };
            rayon::join(|| verify_disk(&stable, &settings.disk), || verify_disk(&unstable, &settings.disk))
        },
    );
    let (coverings, cones): (Vec<_>, Vec<_>) = links.into_iter().unzip();
    let pass = |d: &DiskCertificate| d.verified;
    let stable_disk = Stage::from_result(disks.0, pass, |d| format!("{}: not verified", d.set));
    let unstable_disk = Stage::from_result(disks.1, pass, |d| format!("{}: not verified", d.set));

    let verified = coverings.iter().all(Stage::passed)
        && cones.iter().all(Stage::passed)
        && stable_disk.passed()
        && unstable_disk.passed();
    let conclusion = Conclusion {
        parameter: data.parameter(),
        b: data.family.b,
        fixed_point_formula: FIXED_POINT_FORMULA.into(),
        fixed_point: data.fixed_point.clone(),
        proof_schema: PROOF_SCHEMA.into(),
        statement: statement(config),
        asserted: verified,
    };
    Ok(TangencyCertificate {
        parameter: data.parameter(),
        seed,
        orbit: chain.orbit,
        coverings,
        cones,
        stable_disk,
        unstable_disk,
        conclusion,
        verified,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
