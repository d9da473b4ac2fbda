//! Command-line front end: single-point analysis, single simulation, grid
//! sweeps, and a self-validation suite.
//!
//! Exit codes: 0 success, 1 validation failure, 2 invalid or unstable input.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "tandem-aoi",
    about = "Age-of-information analysis and simulation for a two-hop priority tandem",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML config file with RunConfig keys; flags override it.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Total packet generation rate.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Priority-path routing probability in [0, 1].
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Node-1 service rate.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Mean class-1 service time at node 2.
    #[arg(long, global = true)]
    b1: Option<f64>,
    /// Mean class-2 service time at node 2.
    #[arg(long, global = true)]
    b2: Option<f64>,
    /// Class-1 service kind: exp, det, erlang:K, gamma:SHAPE, hyper:CV2.
    #[arg(long, global = true)]
    svc1: Option<String>,
    /// Class-2 service kind.
    #[arg(long, global = true)]
    svc2: Option<String>,
    /// Packets to simulate.
    #[arg(long, global = true)]
    packets: Option<usize>,
    /// Base random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Warmup fraction in [0, 0.5).
    #[arg(long, global = true)]
    warmup: Option<f64>,
    /// Output directory (default: $TANDEM_AOI_OUT or ./out).
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form analysis of one parameter point.
    Analyze {
        #[command(flatten)]
        overrides: Overrides,
        /// Also write transform-inverted CDF samples to the output dir.
        #[arg(long)]
        cdf: bool,
    },
    /// One simulation run with per-class statistics.
    Simulate {
        #[command(flatten)]
        overrides: Overrides,
        /// Write a tab-separated event trace to this file.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Full (p, rho) grid sweep with analytic-vs-simulated CSV panels.
    Sweep {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Reduced-scale self-checks; exit 0 iff all pass.
    Validate {
        #[command(flatten)]
        overrides: Overrides,
        /// Deliberately break an invariant to prove the checks can fail.
        #[arg(long, value_parser = ["priority-inversion"])]
        inject_fault: Option<String>,
    },
}

fn merged_config(ov: &Overrides) -> Result<RunConfig, String> {
    let mut cfg = match &ov.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = ov.lambda {
        cfg.lambda = v;
    }
    if let Some(v) = ov.p {
        cfg.p = v;
    }
    if let Some(v) = ov.mu {
        cfg.mu = v;
    }
    if let Some(v) = ov.b1 {
        cfg.b1 = v;
    }
    if let Some(v) = ov.b2 {
        cfg.b2 = v;
    }
    if let Some(v) = &ov.svc1 {
        cfg.svc1 = v.clone();
    }
    if let Some(v) = &ov.svc2 {
        cfg.svc2 = v.clone();
    }
    if let Some(v) = ov.packets {
        cfg.packets = v;
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if let Some(v) = ov.warmup {
        cfg.warmup = v;
    }
    if let Some(v) = &ov.out {
        cfg.out = Some(v.clone());
    }
    Ok(cfg)
}

// 0 = success, 1 = validation failure, 2 = invalid/unstable input
fn run() -> i32 {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { overrides, cdf } => {
            merged_config(overrides).and_then(|cfg| commands::analyze::run(&cfg, *cdf))
        }
        Command::Simulate { overrides, trace } => {
            merged_config(overrides).and_then(|cfg| commands::simulate::run(&cfg, trace.as_deref()))
        }
        Command::Sweep { overrides } => {
            merged_config(overrides).and_then(|cfg| commands::sweep::run(&cfg))
        }
        Command::Validate {
            overrides,
            inject_fault,
        } => {
            return match merged_config(overrides) {
                Ok(cfg) => match commands::validate::run(&cfg, inject_fault.is_some()) {
                    Ok(true) => 0,
                    Ok(false) => 1,
                    Err(msg) => {
                        eprintln!("error: {msg}");
                        2
                    }
                },
                Err(msg) => {
                    eprintln!("error: {msg}");
                    2
                }
            };
        }
    };
    match result {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn main() {
    std::process::exit(run());
}
