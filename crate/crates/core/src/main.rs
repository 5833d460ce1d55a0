use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tangency::cli::{self, ProofConfig, ProofName};
use tangency::henon::HenonConfig;
use tangency::{Error, Result};

#[derive(Parser)]
#[command(name = "tangency", version, about = "Certify generically unfolding homoclinic tangencies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a computer-assisted proof.
    Prove {
        #[command(subcommand)]
        target: Target,
    },
    /// Check the analytic model family.
    CheckToy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Index of the switch set.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Index of the last set on the stable side.
        #[arg(long, default_value_t = 2)]
        s: usize,
    },
}

#[derive(Subcommand)]
enum Target {
    /// The Hénon family at b = -0.3.
    Henon {
        #[command(flatten)]
        common: Common,
        /// Half-width of the parameter interval.
        #[arg(long)]
        param_radius: Option<f64>,
        /// Subdivision per axis: `2` or `2,2,1,1`.
        #[arg(long)]
        grid: Option<String>,
        /// Override for one link, `K=GRID`, where K indexes the source set. Repeatable.
        #[arg(long = "link-grid")]
        link_grid: Vec<String>,
        /// JSON chain data replacing the embedded default.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Relative stopping width of the bisection for A.
        #[arg(long)]
        a_tolerance: Option<f64>,
        /// Fraction of the largest admissible Γ that is used.
        #[arg(long)]
        gamma_safety: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn build(cli: Cli) -> Result<(ProofConfig, Option<PathBuf>)> {
    match cli.command {
        Command::Prove { target: Target::Henon { common, param_radius, grid, link_grid, config, a_tolerance, gamma_safety } } => {
            let mut c = ProofConfig::new(ProofName::Henon);
            c.param_radius = param_radius;
            c.threads = common.threads;
            if let Some(g) = grid {
                c.grid = cli::parse_grid(&g)?;
            }
            for s in &link_grid {
                let (k, g) = cli::parse_link_grid(s)?;
                c.link_grids.insert(k, g);
            }
            if let Some(path) = config {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                let hc: HenonConfig = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                c.henon = Some(hc);
            }
            if let Some(t) = a_tolerance {
                c.a_tolerance = t;
            }
            if let Some(g) = gamma_safety {
                c.gamma_safety = g;
            }
            Ok((c, common.report))
        }
        Command::CheckToy { common, lambda, mu, delta, epsilon, k, s } => {
            let mut c = ProofConfig::new(ProofName::Toy);
            c.threads = common.threads;
            c.toy.params = tangency::toy::ToyModelParams { lambda, mu, delta, epsilon };
            c.toy.k = k;
            c.toy.s = s;
            Ok((c, common.report))
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let outcome = build(args).and_then(|(cfg, path)| {
        let report = cli::run(&cfg)?;
        if let Some(p) = &path {
            report.write(p)?;
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            for line in cli::human_summary(&report) {
                println!("{line}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
