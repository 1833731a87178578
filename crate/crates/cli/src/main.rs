use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dca_cli::commands::{cmd_simulate, cmd_sweep, cmd_validate};
use dca_cli::config::{CaseName, FileConfig, Overrides, RunConfig};
use dca_cli::error::{CliError, Result};

#[derive(Parser)]
#[command(name = "dca", version, about = "Discrete condensing aggregation solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation (one per lambda for case2 without --lambda).
    Simulate,
    /// Run the epsilon ladder and tabulate errors against the exact solution.
    Sweep,
    /// Probe the kernel hypotheses and self-check the right-hand side.
    Validate,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, value_enum)]
    case: Option<CaseName>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
    #[arg(long, global = true)]
    atol: Option<f64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

fn load(c: &Common) -> Result<RunConfig> {
    let file = match &c.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let ov = Overrides {
        case: c.case,
        epsilon: c.epsilon,
        lambda: c.lambda,
        output_dir: c.out.clone(),
        rtol: c.rtol,
        atol: c.atol,
        threads: c.threads,
    };
    RunConfig::resolve(file, ov)
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = load(&cli.common)?;
    match cli.command {
        Command::Simulate => {
            for r in cmd_simulate(&cfg)? {
                let s = &r.result.stats;
                println!(
                    "{}: eps = {}, {} accepted / {} rejected steps, hypotheses {}",
                    r.dir.display(),
                    r.epsilon,
                    s.accepted,
                    s.rejected,
                    r.meta.get("hypotheses").unwrap_or("?")
                );
                if !r.diagnostics.passes() {
                    eprintln!("warning: moment checks reported violations in {}", r.dir.display());
                }
            }
            Ok(0)
        }
        Command::Sweep => {
            let rep = cmd_sweep(&cfg)?;
            for t in &rep.tables {
                for (eps, e1) in &t.rows {
                    println!("t = {}  eps = {eps}  E1 = {e1:.6e}", t.t);
                }
                match t.order_estimate() {
                    Ok(p) => println!("t = {}  order estimate = {p:.4}", t.t),
                    Err(e) => println!("t = {}  order estimate unavailable: {e}", t.t),
                }
            }
            println!("wrote {}", cfg.output_dir.display());
            for (eps, msg) in &rep.failures {
                eprintln!("failed: eps = {eps}: {msg}");
            }
            Ok(if rep.failures.is_empty() { 0 } else { 3 })
        }
        Command::Validate => {
            let rep = cmd_validate(&cfg)?;
            for (ok, what) in &rep.checks {
                println!("[{}] {what}", if *ok { "PASS" } else { "FAIL" });
            }
            if !rep.hypotheses.all_pass() {
                println!("hypotheses-unverified");
            }
            if !rep.oracle_ok() {
                return Err(CliError::Validation("oracle self-test failed".into()));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
