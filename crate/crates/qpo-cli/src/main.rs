//! `qpo` — command-line front end for the growth-scale library.
//!
//! Subcommands map to the experiment drivers:
//!   build          construct the smoothed order on the oscillating profile
//!                  and export its curves (exit 0 once artifacts are written)
//!   counterexample eta sweep of the derivative-witness blow-up
//!   verify         construct and gate on the six order checks
//!   disc           mean-vs-max growth comparison in the unit disc
//!   strip          strip-map exactness and mean-order tracking
//!   run <config>   any experiment from a JSON configuration file
//!
//! Flags override configuration fields; the QPO_OUT environment variable
//! overrides the output directory last. Exit codes: 0 pass, 2 check failure,
//! 3 configuration error, 4 runtime/numeric error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpo_core::harness::{parse_config, run_experiment, ExperimentConfig, ExperimentId, RunManifest};
use qpo_core::QpoError;

#[derive(Parser)]
#[command(
    name = "qpo",
    version,
    about = "Growth scales, order construction, and unit-disc growth diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the smoothed order for the oscillating growth profile and
    /// export its curves and anchor ledger (checks are recorded, not gated).
    Build(Overrides),
    /// Sweep the oscillation depth and compare the measured derivative
    /// witness against its analytic blow-up floor.
    Counterexample(Overrides),
    /// Construct the order and gate on its verification checks.
    Verify(Overrides),
    /// Compare integral-mean growth orders against the max-modulus order.
    Disc(Overrides),
    /// Check strip-map exactness and the running mean of the order function.
    Strip(Overrides),
    /// Run any experiment from a JSON configuration file.
    Run {
        /// Path to the configuration file.
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Field overrides applied on top of the configuration (defaults for the
/// direct subcommands, the file contents for `run`).
#[derive(Args)]
struct Overrides {
    /// Lower order target (also the constant order level where one is needed).
    #[arg(long)]
    lambda: Option<f64>,
    /// Upper order target.
    #[arg(long)]
    rho: Option<f64>,
    /// Oscillation depth of the order construction.
    #[arg(long)]
    eta: Option<f64>,
    /// First excursion tolerance (defaults to min{1, eta}/2).
    #[arg(long)]
    eps1: Option<f64>,
    /// Slack exponent in trend bounds.
    #[arg(long)]
    eps: Option<f64>,
    /// Sampling density per decade.
    #[arg(long = "ppd")]
    points_per_decade: Option<usize>,
    /// Angular samples per circle or sector.
    #[arg(long)]
    n_theta: Option<usize>,
    /// Radial horizon for entire-scale experiments.
    #[arg(long)]
    t_max: Option<f64>,
    /// Radial horizon for disc experiments.
    #[arg(long)]
    r_max: Option<f64>,
    /// Strip aperture parameter in (0, 1).
    #[arg(long)]
    q: Option<f64>,
    /// Exponent of the benchmark G = exp(−w^a) in the sector experiment.
    #[arg(long)]
    sector_power: Option<f64>,
    /// Cap on materialized proxy zeros.
    #[arg(long)]
    zero_cap: Option<usize>,
    /// Recorded RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (the QPO_OUT environment variable wins over this).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.rho {
            cfg.rho = v;
        }
        if let Some(v) = self.eta {
            cfg.eta = v;
            // Track the dependent default unless the tolerance is pinned too.
            if self.eps1.is_none() {
                cfg.eps1 = 0.5 * v.min(1.0);
            }
        }
        if let Some(v) = self.eps1 {
            cfg.eps1 = v;
        }
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.points_per_decade {
            cfg.points_per_decade = v;
        }
        if let Some(v) = self.n_theta {
            cfg.n_theta = v;
        }
        if let Some(v) = self.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = self.r_max {
            cfg.r_max = v;
        }
        if let Some(v) = self.q {
            cfg.q = v;
        }
        if let Some(v) = self.sector_power {
            cfg.sector_power = v;
        }
        if let Some(v) = self.zero_cap {
            cfg.zero_cap = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out_dir = v.clone();
        }
        if let Ok(dir) = std::env::var("QPO_OUT") {
            if !dir.is_empty() {
                cfg.out_dir = PathBuf::from(dir);
            }
        }
    }
}

const EXIT_CHECK_FAILURE: u8 = 2;
const EXIT_CONFIG_ERROR: u8 = 3;
const EXIT_RUNTIME_ERROR: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, gate_on_checks) = match &cli.command {
        Command::Build(ov) => (with_overrides(ExperimentId::Thm1, ov), false),
        Command::Counterexample(ov) => (with_overrides(ExperimentId::EtaNecessity, ov), true),
        Command::Verify(ov) => (with_overrides(ExperimentId::Thm1, ov), true),
        Command::Disc(ov) => (with_overrides(ExperimentId::Linden, ov), true),
        Command::Strip(ov) => (with_overrides(ExperimentId::Warschawski, ov), true),
        Command::Run { config, overrides } => {
            let mut cfg = match parse_config(config) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG_ERROR);
                }
            };
            overrides.apply(&mut cfg);
            (cfg, true)
        }
    };

    match run_experiment(&config) {
        Ok(manifest) => {
            print_manifest(&manifest);
            if gate_on_checks && !manifest.all_pass {
                ExitCode::from(EXIT_CHECK_FAILURE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                QpoError::Config(_) => ExitCode::from(EXIT_CONFIG_ERROR),
                _ => ExitCode::from(EXIT_RUNTIME_ERROR),
            }
        }
    }
}

fn with_overrides(id: ExperimentId, overrides: &Overrides) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(id);
    overrides.apply(&mut cfg);
    cfg
}

fn print_manifest(manifest: &RunManifest) {
    for named in &manifest.reports {
        for check in &named.report.checks {
            let status = if check.pass { "PASS" } else { "FAIL" };
            match check.bound {
                Some(b) => println!(
                    "{status} {}: measured = {:.6e}, bound = {:.6e}",
                    check.name, check.measured, b
                ),
                None => println!(
                    "{status} {}: measured = {:.6e} (report-only)",
                    check.name, check.measured
                ),
            }
        }
        for flag in &named.report.flags {
            println!("note [{}]: {flag}", named.name);
        }
    }
    for file in &manifest.files {
        println!(
            "wrote {} ({} bytes)",
            manifest.config.out_dir.join(&file.name).display(),
            file.bytes
        );
    }
    println!(
        "wrote {} (checks: {})",
        manifest.config.out_dir.join("manifest.json").display(),
        if manifest.all_pass { "all pass" } else { "FAILURES" }
    );
}
