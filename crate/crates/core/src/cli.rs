//! Batch driver: configuration, report assembly and the exit-code contract.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::henon::{self, HenonConfig, ProofSettings, TangencyCertificate};
use crate::manifold::DiskOptions;
use crate::toy::{self, ToyModelParams, ToyReport};

pub const VERIFIED: &str = "VERIFIED";
pub const NOT_VERIFIED: &str = "NOT VERIFIED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofName {
    Henon,
    Toy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyOptions {
    pub params: ToyModelParams,
    pub k: usize,
    pub s: usize,
}

impl Default for ToyOptions {
    fn default() -> Self {
        ToyOptions { params: ToyModelParams::default(), k: 3, s: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofConfig {
    pub proof: ProofName,
    /// Replaces the half-width of the parameter interval.
    pub param_radius: Option<f64>,
    /// Default subdivision per axis; one entry is broadcast to every axis.
    pub grid: Vec<usize>,
    /// Per-link overrides keyed by the index of the source set.
    pub link_grids: BTreeMap<usize, Vec<usize>>,
    pub threads: Option<usize>,
    pub a_tolerance: f64,
    pub gamma_safety: f64,
    /// Chain data; the embedded default when absent.
    pub henon: Option<HenonConfig>,
    pub toy: ToyOptions,
}

impl ProofConfig {
    pub fn new(proof: ProofName) -> Self {
        let disk = DiskOptions::default();
        ProofConfig {
            proof,
            param_radius: None,
            grid: vec![1],
            link_grids: BTreeMap::new(),
            threads: None,
            a_tolerance: disk.a_tolerance,
            gamma_safety: disk.gamma_safety,
            henon: None,
            toy: ToyOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if let Some(r) = self.param_radius {
            if !(r.is_finite() && r > 0.0 && r < 1.0) {
                return bad(format!("parameter radius {r} outside (0, 1)"));
            }
        }
        for g in std::iter::once(&self.grid).chain(self.link_grids.values()) {
            if g.is_empty() || g.iter().any(|&k| k == 0 || k > 64) {
                return bad(format!("grid {g:?}: entries must lie in 1..=64"));
            }
        }
        if self.threads == Some(0) {
            return bad("thread count must be positive".into());
        }
        if !(self.a_tolerance > 0.0 && self.a_tolerance < 1.0) {
            return bad(format!("A tolerance {} outside (0, 1)", self.a_tolerance));
        }
        if !(self.gamma_safety > 0.0 && self.gamma_safety < 1.0) {
            return bad(format!("Γ safety factor {} outside (0, 1)", self.gamma_safety));
        }
        self.toy.params.validate()?;
        if self.toy.k == 0 || self.toy.s == 0 {
            return bad("toy chain needs k, s >= 1".into());
        }
        Ok(())
    }

    /// Chain data with the radius override applied.
    pub fn henon_config(&self) -> Result<HenonConfig> {
        let mut cfg = self.henon.clone().unwrap_or_else(HenonConfig::default_config);
        if let Some(r) = self.param_radius {
            cfg.param_radius = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn settings(&self) -> ProofSettings {
        ProofSettings {
            grid: self.grid.clone(),
            link_grids: self.link_grids.clone(),
            disk: DiskOptions { a_tolerance: self.a_tolerance, gamma_safety: self.gamma_safety, ..DiskOptions::default() },
            ..ProofSettings::default()
        }
    }
}

/// Parses `2` or `2,2,1,1`.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad grid entry {p:?} in {spec:?}"))))
        .collect()
}

/// Parses `K=spec`, a grid override for the link leaving set `K`.
pub fn parse_link_grid(spec: &str) -> Result<(usize, Vec<usize>)> {
    let (k, g) = spec.split_once('=').ok_or_else(|| Error::Config(format!("expected K=GRID, got {spec:?}")))?;
    let k = k.trim().parse().map_err(|_| Error::Config(format!("bad link index in {spec:?}")))?;
    Ok((k, parse_grid(g)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "proof", rename_all = "lowercase")]
pub enum Outcome {
    Henon(Box<TangencyCertificate>),
    Toy(ToyReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ProofConfig,
    pub verdict: String,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
    /// Set when the run stopped before a certificate could be assembled.
    pub error: Option<String>,
    pub outcome: Option<Outcome>,
    pub elapsed_seconds: f64,
}

impl Report {
    pub fn verified(&self) -> bool {
        self.verdict == VERIFIED
    }

    pub fn exit_code(&self) -> i32 {
        if self.verified() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(format!("report serialization: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Report> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("report parse: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::Config(format!("writing {}: {e}", path.display())))
    }
}

/// Outcome, summary lines, failure loci, early-stop error and verdict of one run.
type RunParts = (Option<Outcome>, Vec<String>, Vec<String>, Option<String>, bool);

fn verdict(ok: bool) -> String {
    if ok { VERIFIED } else { NOT_VERIFIED }.to_string()
}

fn henon_report(cfg: &ProofConfig) -> Result<RunParts> {
    let hc = cfg.henon_config()?;
    match henon::run_proof(&hc, &cfg.settings()) {
        Ok(cert) => {
            let failures = cert.failures();
            let mut summary = Vec::new();
            if cert.verified {
                summary.push(henon::statement(&hc));
            } else {
                summary.push(format!("no conclusion for a ∈ {} ± {:e}, b = {}", hc.a0, hc.param_radius, hc.b));
            }
            let passed = |n: usize, of: usize| format!("{n}/{of}");
            let cov = cert.coverings.iter().filter(|s| s.passed()).count();
            let cones = cert.cones.iter().filter(|s| s.passed()).count();
            summary.push(format!("coverings {}, cones {}", passed(cov, cert.coverings.len()), passed(cones, cert.cones.len())));
            for (name, disk) in [("stable disk", &cert.stable_disk), ("unstable disk", &cert.unstable_disk)] {
                summary.push(match disk.certificate() {
                    Some(d) => format!(
                        "{name}: A >= {:.6e}, M <= {:.6e}, L <= {:.6e}, Γ = {}, δ·|p| >= {:.4}",
                        d.constants.a.lo(),
                        d.constants.m.hi(),
                        d.constants.l.hi(),
                        d.constants.gamma,
                        d.final_product.lo()
                    ),
                    None => format!("{name}: failed"),
                });
            }
            let ok = cert.verified;
            Ok((Some(Outcome::Henon(Box::new(cert))), summary, failures, None, ok))
        }
        Err(e @ Error::Config(_)) => Err(e),
        Err(e) => Ok((None, vec!["proof stopped before completion".into()], vec![e.to_string()], Some(e.to_string()), false)),
    }
}

fn toy_report(cfg: &ProofConfig) -> Result<RunParts> {
    let t = &cfg.toy;
    let r = toy::run_toy(t.params, t.k, t.s)?;
    let sub = |ok: bool| if ok { "passed" } else { "failed" };
    let summary = vec![
        format!("toy chain N0..N{} => M0..M{}: {}", t.k, t.s, sub(r.chain_verified)),
        format!("toy cones and switch blocks: {}", sub(r.cones_verified)),
        format!("transversality determinant: {}", sub(r.determinant_verified)),
        format!("orientation notes: {}", r.orientation_flags.len()),
    ];
    let failures = r.failures();
    let ok = r.verified;
    Ok((Some(Outcome::Toy(r)), summary, failures, None, ok))
}

/// Runs the configured proof. Only configuration problems are errors; an
/// inconclusive proof yields a report with verdict `NOT VERIFIED`.
pub fn run(cfg: &ProofConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let work = || match cfg.proof {
        ProofName::Henon => henon_report(cfg),
        ProofName::Toy => toy_report(cfg),
    };
    let (outcome, summary, failures, error, ok) = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        verdict: verdict(ok),
        summary,
        failures,
        error,
        outcome,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Lines printed to standard output.
pub fn human_summary(r: &Report) -> Vec<String> {
    let mut out = vec![r.verdict.clone()];
    out.extend(r.summary.iter().cloned());
    out.extend(r.failures.iter().map(|f| format!("failed: {f}")));
    out.push(format!("elapsed {:.3} s", r.elapsed_seconds));
    out
}
