//! `holoball` command-line front end.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::{exponent_arg, phi_arg, usage, RunConfig, Usage};
use holoball::quad::PhiWeight;
use std::path::PathBuf;
use std::process::ExitCode;

const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "\ncommit:   ",
    env!("HOLOBALL_BUILD_COMMIT"),
    "\nrustc:    ",
    env!("HOLOBALL_BUILD_RUSTC"),
    "\ntarget:   ",
    env!("HOLOBALL_BUILD_TARGET"),
    "\nprofile:  ",
    env!("HOLOBALL_BUILD_PROFILE"),
    "\nfeatures: ",
    env!("HOLOBALL_BUILD_FEATURES"),
);

#[derive(Parser)]
#[command(name = "holoball", version, long_version = LONG_VERSION)]
#[command(about = "Norms, moduli of smoothness and norm-equivalence checks for holomorphic polynomials on the ball")]
struct Cli {
    /// JSON run configuration; command-line flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every random choice
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Io {
    /// Polynomial JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Λ-functional, mixed norm, Hardy norm or φ-seminorm of one polynomial
    Norm {
        #[command(flatten)]
        io: Io,
        /// lambda, mixed, hardy or phi
        #[arg(long)]
        functional: Option<String>,
        #[arg(long, value_parser = exponent_arg)]
        p: Option<f64>,
        #[arg(long, value_parser = exponent_arg)]
        q: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        /// Order of the radial derivative in the φ-seminorm
        #[arg(long)]
        n: Option<u32>,
        /// power:A or powerlog:A:B
        #[arg(long, value_parser = phi_arg)]
        phi: Option<PhiWeight>,
    },
    /// CSV table of moduli of smoothness over a δ grid
    Modulus {
        #[command(flatten)]
        io: Io,
        /// minus, unitary, plus or all
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_parser = exponent_arg)]
        p: Option<f64>,
        /// log:LO:HI:N, lin:LO:HI:N or a comma-separated list
        #[arg(long)]
        grid: Option<String>,
        /// Unitary and contraction samples per δ
        #[arg(long)]
        budget: Option<usize>,
    },
    /// CSV of Littlewood-Paley block norms (nu, norm)
    Blocks {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = exponent_arg)]
        p: Option<f64>,
    },
    /// CSV of best-approximation brackets at dyadic degrees
    Approx {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = exponent_arg)]
        p: Option<f64>,
        /// Single approximation degree instead of 1, 2, 4, ...
        #[arg(long)]
        nu: Option<usize>,
        /// Reweighting steps
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Run a verification suite and write report.json plus per-check CSVs
    Verify {
        /// default, empty, a check id, or a suite JSON file
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
        /// Modulus sample budget for every check
        #[arg(long)]
        budget: Option<usize>,
        /// Report directory (default: ./report)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded family of test polynomials as a JSON array
    Generate {
        /// random-decay, lacunary, monomial or block-concentrated
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        levels: Option<u32>,
        /// Monomial exponent, e.g. 3,1
        #[arg(long, value_delimiter = ',')]
        exponent: Option<Vec<u32>>,
        /// Block index for block-concentrated families
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Modulus { .. } => "modulus",
            Command::Blocks { .. } => "blocks",
            Command::Approx { .. } => "approx",
            Command::Verify { .. } => "verify",
            Command::Generate { .. } => "generate",
        }
    }

    /// The flags of this subcommand as a config layer.
    fn flags(&self) -> RunConfig {
        let io = |io: &Io| RunConfig { input: io.input.clone(), output: io.output.clone(), ..Default::default() };
        match self {
            Command::Norm { io: i, functional, p, q, alpha, s, n, phi } => RunConfig {
                functional: functional.clone(),
                p: *p,
                q: *q,
                alpha: *alpha,
                s: *s,
                n: *n,
                phi: phi.clone(),
                ..io(i)
            },
            Command::Modulus { io: i, kind, n, p, grid, budget } => {
                RunConfig { kind: kind.clone(), n: *n, p: *p, grid: grid.clone(), budget: *budget, ..io(i) }
            }
            Command::Blocks { io: i, p } => RunConfig { p: *p, ..io(i) },
            Command::Approx { io: i, p, nu, budget } => RunConfig { p: *p, nu: *nu, budget: *budget, ..io(i) },
            Command::Verify { suite, degree, budget, output } => RunConfig {
                suite: suite.clone(),
                degree: *degree,
                budget: *budget,
                output: output.clone(),
                ..Default::default()
            },
            Command::Generate { nu, count, dim, degree, output, .. } => RunConfig {
                nu: *nu,
                count: *count,
                dim: *dim,
                degree: *degree,
                output: output.clone(),
                ..Default::default()
            },
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let file = match &cli.config {
        Some(path) => RunConfig::read(path)?,
        None => RunConfig::default(),
    };
    if let Some(cmd) = &file.command {
        if cmd != cli.command.name() {
            log::warn!("config file is for `{cmd}`, running `{}`", cli.command.name());
        }
    }
    let top = RunConfig { seed: cli.seed, jobs: cli.jobs, ..cli.command.flags() };
    let cfg = top.over(file);
    if cfg.jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    holoball::par::with_jobs(cfg.jobs, || match &cli.command {
        Command::Norm { .. } => commands::norm(&cfg).map(|_| 0),
        Command::Modulus { .. } => commands::modulus(&cfg).map(|_| 0),
        Command::Blocks { .. } => commands::blocks(&cfg).map(|_| 0),
        Command::Approx { .. } => commands::approx(&cfg).map(|_| 0),
        Command::Verify { .. } => commands::verify(&cfg),
        Command::Generate { generator, gamma, levels, exponent, .. } => {
            let gen = commands::GenFlags { gamma: *gamma, levels: *levels, exponent: exponent.clone() };
            commands::generate(&cfg, generator.as_deref(), &gen).map(|_| 0)
        }
    })
}

/// 2 for bad input, 1 for failed computations.
fn error_status(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<holoball::Error>() {
        Some(inner) if inner.is_config() => 2,
        Some(holoball::Error::Json(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_status(&e))
        }
    }
}
