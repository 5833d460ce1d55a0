//! Covering relations `N => M` between h-sets.
//!
//! In normalized coordinates the map reads `g(z) = d_M^{-1} M^{-1}(F(c_N + M_N(d_N ⊙ z)) - c_M)`.
//! With a bijection `σ` from the unstable axes of `N` to those of `M` and signs
//! `ε`, the relation holds if
//!
//! * on each wall `z_i = s` of `N` (for unstable `i`), `s ε_i g_{σ(i)}(z) > 1`;
//! * on all of `N`, every stable coordinate of `g(z)` lies in `(-1, 1)`.
//!
//! Both conditions persist along the straight-line homotopy from `g` to the
//! linear model `z -> k P z_u` (`P` the signed permutation, `k > 1`), which has
//! local degree ±1. Failing to verify them is never a disproof.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hset::HSet;
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::projective::ChartMap;

/// Source unstable axis `source` is stretched across target unstable axis `target`,
/// with orientation `sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisLink {
    pub source: usize,
    pub target: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallMargin {
    pub axis: usize,
    pub side: i8,
    /// Hull over the wall's sub-boxes of `s ε g_σ(i) - 1`; the lower bound is the certified margin.
    pub margin: Interval,
    pub boxes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringCertificate {
    pub source: String,
    pub target: String,
    pub correspondence: Vec<AxisLink>,
    pub exit_margins: Vec<WallMargin>,
    /// Hull over all sub-boxes and stable axes of `1 - |g_s|`.
    pub entry_margin: Interval,
    pub grid: Vec<usize>,
}

impl CoveringCertificate {
    /// Smallest certified margin over all conditions.
    pub fn min_margin(&self) -> f64 {
        self.exit_margins
            .iter()
            .map(|w| w.margin.lo())
            .fold(self.entry_margin.lo(), f64::min)
    }
}

/// Normalized-coordinate form of a map between two h-sets.
pub struct LocalMap<'a> {
    src: &'a HSet,
    tgt: &'a HSet,
    map: &'a dyn ChartMap,
    /// `M_N diag(d_N)`.
    src_frame: IntervalMatrix,
    /// `diag(d_M)^{-1} M^{-1}`.
    tgt_frame: IntervalMatrix,
}

impl<'a> LocalMap<'a> {
    pub fn new(src: &'a HSet, tgt: &'a HSet, map: &'a dyn ChartMap) -> Result<Self> {
        if src.dim() != map.dim() || tgt.dim() != map.dim() {
            return Err(Error::ShapeMismatch(format!(
                "map of dim {} between sets of dims {} and {}",
                map.dim(),
                src.dim(),
                tgt.dim()
            )));
        }
        let src_frame = src.coord_interval().scale_cols(&src.diameters_interval())?;
        let inv_d: Vec<Interval> = tgt.diameters().iter().map(|&d| Interval::ONE / Interval::point(d)).collect();
        let tgt_frame = tgt.inv_coord().scale_rows(&inv_d)?;
        Ok(LocalMap { src, tgt, map, src_frame, tgt_frame })
    }

    fn natural(&self, z: &IntervalVector) -> Result<IntervalVector> {
        let x = self.src.from_normalized(z)?;
        let y = self.map.eval(&x)?;
        self.tgt.to_normalized(&y)
    }

    /// Enclosure of `g(z)` over a normalized box: natural extension intersected
    /// with the mean-value form.
    pub fn image(&self, z: &IntervalVector) -> Result<IntervalVector> {
        let nat = self.natural(z)?;
        let mid = IntervalVector::from_points(&z.mid());
        let at_mid = self.natural(&mid)?;
        let x = self.src.from_normalized(z)?;
        let dg = self.tgt_frame.mat_mul(&self.map.derivative(&x)?)?.mat_mul(&self.src_frame)?;
        let mv = at_mid.add(&dg.mat_vec(&z.sub(&mid)?)?)?;
        Ok(nat.intersect(&mv).unwrap_or(mv).finite()?)
    }

    /// Default correspondence: the bijection between unstable axes that
    /// maximizes the smallest stretch `|g(e_i) - g(-e_i)|` along the paired
    /// target axis. Ties go to the first permutation in lexicographic order.
    pub fn detect_correspondence(&self) -> Result<Vec<AxisLink>> {
        let n = self.src.dim();
        let sources = self.src.unstable_axes();
        let targets = self.tgt.unstable_axes();
        if sources.len() != targets.len() {
            return Err(Error::Inconclusive(format!(
                "{} => {}: {} unstable axes cannot cover {}",
                self.src.name(),
                self.tgt.name(),
                sources.len(),
                targets.len()
            )));
        }
        if sources.len() > 8 {
            return Err(Error::ShapeMismatch(format!("{} unstable axes", sources.len())));
        }
        let mut diffs = Vec::with_capacity(sources.len());
        for &i in sources {
            let plus = self.natural(&IntervalVector::unit(i, n))?;
            let minus = self.natural(&IntervalVector::unit(i, n).scale(-Interval::ONE))?;
            let diff = plus.sub(&minus)?;
            diffs.push(targets.iter().map(|&j| diff[j].mid()).collect::<Vec<f64>>());
        }
        let mut best: Option<(f64, Vec<usize>)> = None;
        for perm in permutations(targets.len()) {
            let score = perm.iter().enumerate().map(|(k, &p)| diffs[k][p].abs()).fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, perm));
            }
        }
        let (score, perm) = best.expect("at least one permutation");
        if !(score > 0.0) {
            return Err(Error::Inconclusive(format!(
                "{} => {}: some unstable axis is not stretched",
                self.src.name(),
                self.tgt.name()
            )));
        }
        let links: Vec<AxisLink> = perm
            .iter()
            .enumerate()
            .map(|(k, &p)| AxisLink {
                source: sources[k],
                target: targets[p],
                sign: if diffs[k][p] > 0.0 { 1 } else { -1 },
            })
            .collect();
        validate_correspondence(self.src, self.tgt, &links)?;
        Ok(links)
    }
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

fn validate_correspondence(src: &HSet, tgt: &HSet, links: &[AxisLink]) -> Result<()> {
    let mut sources: Vec<usize> = links.iter().map(|l| l.source).collect();
    let mut targets: Vec<usize> = links.iter().map(|l| l.target).collect();
    sources.sort_unstable();
    targets.sort_unstable();
    let ok = sources == src.unstable_axes()
        && targets == tgt.unstable_axes()
        && links.iter().all(|l| l.sign == 1 || l.sign == -1);
    if ok {
        Ok(())
    } else {
        Err(Error::Inconclusive(format!(
            "{} => {}: correspondence {links:?} is not a signed bijection of unstable axes",
            src.name(),
            tgt.name()
        )))
    }
}

/// Verifies `src => tgt` under `map`; `grid[i]` sub-intervals along axis `i`.
pub fn check_covering(
    src: &HSet,
    tgt: &HSet,
    map: &dyn ChartMap,
    grid: &[usize],
    correspondence: Option<&[AxisLink]>,
) -> Result<CoveringCertificate> {
    if src.unstable_axes().len() != tgt.unstable_axes().len() {
        return Err(Error::Config(format!(
            "{} and {} have different numbers of unstable axes",
            src.name(),
            tgt.name()
        )));
    }
    let local = LocalMap::new(src, tgt, map)?;
    let links = match correspondence {
        Some(c) => {
            validate_correspondence(src, tgt, c)?;
            c.to_vec()
        }
        None => local.detect_correspondence()?,
    };
    let link_name = format!("{} => {}", src.name(), tgt.name());

    let mut exit_margins = Vec::new();
    for link in &links {
        for side in [-1i8, 1] {
            let boxes = src.walls(link.source, side, grid)?;
            let margins: Vec<Result<Interval>> = boxes
                .par_iter()
                .map(|b| {
                    let img = local.image(b)?;
                    let s = Interval::point((side * link.sign) as f64);
                    Ok(s * img[link.target] - Interval::ONE)
                })
                .collect();
            let mut hull: Option<Interval> = None;
            for (k, m) in margins.into_iter().enumerate() {
                let m = m?;
                if !m.is_positive() {
                    return Err(Error::Inconclusive(format!(
                        "{link_name}: wall z{}={side:+} sub-box {k} exit margin {m:?} not positive",
                        link.source
                    )));
                }
                hull = Some(hull.map_or(m, |h| h.hull(&m)));
            }
            exit_margins.push(WallMargin {
                axis: link.source,
                side,
                margin: hull.expect("at least one wall box"),
                boxes: boxes.len(),
            });
        }
    }

    let boxes = src.grid_boxes(grid)?;
    let stable = tgt.stable_axes();
    let entries: Vec<Result<Interval>> = boxes
        .par_iter()
        .map(|b| {
            let img = local.image(b)?;
            Ok(stable
                .iter()
                .map(|&s| Interval::ONE - img[s].abs())
                .reduce(|a, b| a.hull(&b))
                .unwrap_or(Interval::ONE))
        })
        .collect();
    let mut entry: Option<Interval> = None;
    for (k, m) in entries.into_iter().enumerate() {
        let m = m?;
        if !m.is_positive() {
            return Err(Error::Inconclusive(format!(
                "{link_name}: sub-box {k} stable entry margin {m:?} not positive"
            )));
        }
        entry = Some(entry.map_or(m, |h| h.hull(&m)));
    }

    Ok(CoveringCertificate {
        source: src.name().to_string(),
        target: tgt.name().to_string(),
        correspondence: links,
        exit_margins,
        entry_margin: entry.expect("at least one box"),
        grid: grid.to_vec(),
    })
}

/// Per-link settings for [`check_chain`].
#[derive(Clone, Debug, Default)]
pub struct LinkOptions {
    pub grid: Option<Vec<usize>>,
    pub correspondence: Option<Vec<AxisLink>>,
}

/// Checks every consecutive pair; links are verified independently.
pub fn check_chain(
    sets: &[HSet],
    map: &dyn ChartMap,
    options: &[LinkOptions],
) -> Result<Vec<Result<CoveringCertificate>>> {
    if sets.len() < 2 {
        return Err(Error::Config("a chain needs at least two sets".into()));
    }
    let links = sets.len() - 1;
    if !options.is_empty() && options.len() != links {
        return Err(Error::Config(format!("{} link options for {links} links", options.len())));
    }
    Ok((0..links)
        .into_par_iter()
        .map(|k| {
            let opt = options.get(k).cloned().unwrap_or_default();
            let grid = opt.grid.unwrap_or_else(|| vec![1; sets[k].dim()]);
            check_covering(&sets[k], &sets[k + 1], map, &grid, opt.correspondence.as_deref())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Diagonal linear map.
    struct Diag(Vec<f64>);

    impl ChartMap for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn eval(&self, z: &IntervalVector) -> Result<IntervalVector> {
            Ok(z.iter().zip(&self.0).map(|(&x, &s)| x * s).collect())
        }
        fn derivative(&self, _z: &IntervalVector) -> Result<IntervalMatrix> {
            Ok(IntervalMatrix::diag(&self.0.iter().map(|&s| Interval::point(s)).collect::<Vec<_>>()))
        }
    }

    fn square(name: &str, center: f64, d: [f64; 2]) -> HSet {
        HSet::new(name, vec![center, 0.0], DMatrix::identity(2, 2), d.to_vec(), vec![0]).unwrap()
    }

    #[test]
    fn identity_map_does_not_cover() {
        let n = square("N", 0.0, [1.0, 1.0]);
        let err = check_covering(&n, &n, &Diag(vec![1.0, 1.0]), &[1, 1], None).unwrap_err();
        assert!(matches!(err, Error::Inconclusive(_)));
    }

    #[test]
    fn hyperbolic_map_covers() {
        let n = square("N", 0.0, [1.0, 1.0]);
        let cert = check_covering(&n, &n, &Diag(vec![2.0, 0.5]), &[1, 1], None).unwrap();
        assert_eq!(cert.correspondence, vec![AxisLink { source: 0, target: 0, sign: 1 }]);
        assert!(cert.exit_margins.iter().all(|w| w.margin.contains(1.0)));
        assert!(cert.entry_margin.contains(0.5));
    }

    #[test]
    fn orientation_reversal_is_detected() {
        let n = square("N", 0.0, [1.0, 1.0]);
        let cert = check_covering(&n, &n, &Diag(vec![-3.0, 0.5]), &[2, 2], None).unwrap();
        assert_eq!(cert.correspondence[0].sign, -1);
        let wrong = [AxisLink { source: 0, target: 0, sign: 1 }];
        assert!(check_covering(&n, &n, &Diag(vec![-3.0, 0.5]), &[1, 1], Some(&wrong)).is_err());
    }

    #[test]
    fn chain_failure_is_localized() {
        let sets = vec![
            square("N0", 0.0, [1.0, 1.0]),
            square("N1", 0.0, [1.5, 0.9]),
            square("N2", 0.0, [2.0, 0.3]),
        ];
        let out = check_chain(&sets, &Diag(vec![2.0, 0.5]), &[]).unwrap();
        assert!(out[0].is_ok());
        assert!(out[1].is_err());
    }

    #[test]
    fn finer_grid_keeps_success() {
        let n = square("N", 0.0, [1.0, 1.0]);
        let map = Diag(vec![2.0, 0.5]);
        let coarse = check_covering(&n, &n, &map, &[1, 1], None).unwrap();
        let fine = check_covering(&n, &n, &map, &[3, 3], None).unwrap();
        assert!(fine.min_margin() >= coarse.min_margin());
    }

    struct Linear(DMatrix<f64>);

    impl ChartMap for Linear {
        fn dim(&self) -> usize {
            self.0.nrows()
        }
        fn eval(&self, z: &IntervalVector) -> Result<IntervalVector> {
            IntervalMatrix::from_point(&self.0).mat_vec(z)
        }
        fn derivative(&self, _z: &IntervalVector) -> Result<IntervalMatrix> {
            Ok(IntervalMatrix::from_point(&self.0))
        }
    }

    #[test]
    fn correspondence_is_a_bijection_even_when_axes_are_coupled() {
        // The parameter-like axis 2 moves axis 0 more than itself; pairing it with
        // axis 0 would leave axis 0 without a partner.
        let m = DMatrix::from_row_slice(3, 3, &[3.0, 0.0, 2.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.1]);
        let n = HSet::new("N", vec![0.0; 3], DMatrix::identity(3, 3), vec![1.0; 3], vec![0, 2]).unwrap();
        let map = Linear(m);
        let local = LocalMap::new(&n, &n, &map).unwrap();
        let links = local.detect_correspondence().unwrap();
        assert_eq!(links, vec![AxisLink { source: 0, target: 0, sign: 1 }, AxisLink { source: 2, target: 2, sign: 1 }]);
    }

    #[test]
    fn permutations_are_lexicographic() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
        assert_eq!(permutations(3)[5], vec![2, 1, 0]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
