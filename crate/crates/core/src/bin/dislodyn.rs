use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dislodyn::driver::{self, OUTPUT_ROOT_ENV};
use dislodyn::Error;

/// Dislocation density dynamics simulations.
#[derive(Parser)]
#[command(name = "dislodyn", version, after_help = format!(
    "Relative output directories are placed under ${OUTPUT_ROOT_ENV} when it is set."
))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration.
    Run {
        config: PathBuf,
        #[command(flatten)]
        slab: SlabFlags,
    },
    /// Run every configuration matching a file-name pattern, concurrently.
    Sweep { pattern: String },
    /// Check a configuration without running it.
    Validate { config: PathBuf },
}

/// Overrides for slab (gcz1d) runs.
#[derive(Args)]
struct SlabFlags {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long = "residual-tol")]
    residual_tol: Option<f64>,
    #[arg(long = "snapshot-every")]
    snapshot_every: Option<usize>,
}

impl SlabFlags {
    fn overrides(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        let mut push = |s: &str, k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((s.to_string(), k.to_string(), v));
            }
        };
        push("gcz1d", "n", self.n.map(|v| v.to_string()));
        push("gcz1d", "epsilon", self.epsilon.map(|v| v.to_string()));
        push("gcz1d", "tau", self.tau.map(|v| v.to_string()));
        push("gcz1d", "c0", self.c0.map(|v| v.to_string()));
        push("time", "t_max", self.tmax.map(|v| v.to_string()));
        push("gcz1d", "residual_tol", self.residual_tol.map(|v| v.to_string()));
        push("time", "snapshot_every", self.snapshot_every.map(|v| v.to_string()));
        out
    }
}

/// One `error kind=<kind> message=<text>` line per failure.
fn report(context: &str, e: &Error) {
    match e {
        Error::Config(list) => {
            for c in list {
                eprintln!("error kind=config source={context} key={} message={c}", c.key);
            }
        }
        other => eprintln!("error kind={} source={context} message={other}", other.kind()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, slab } => match driver::run_file(&config, &slab.overrides()) {
            Ok(s) => {
                println!("{} run finished: {} steps, outputs in {}", s.model, s.steps, s.output_dir.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                report(&config.display().to_string(), &e);
                ExitCode::FAILURE
            }
        },
        Command::Validate { config } => match driver::validate_file(&config) {
            Ok(cfg) => {
                println!("{} configuration is valid", cfg.model.kind().name());
                print!("{}", cfg.render());
                ExitCode::SUCCESS
            }
            Err(e) => {
                report(&config.display().to_string(), &e);
                ExitCode::FAILURE
            }
        },
        Command::Sweep { pattern } => match driver::sweep(&pattern) {
            Ok(results) => {
                let mut failed = false;
                for (path, r) in results {
                    match r {
                        Ok(s) => println!("{}: ok ({} steps) -> {}", path.display(), s.steps, s.output_dir.display()),
                        Err(e) => {
                            failed = true;
                            report(&path.display().to_string(), &e);
                        }
                    }
                }
                if failed {
                    ExitCode::FAILURE
                } else {
                    ExitCode::SUCCESS
                }
            }
            Err(e) => {
                report(&pattern, &e);
                ExitCode::FAILURE
            }
        },
    }
}
