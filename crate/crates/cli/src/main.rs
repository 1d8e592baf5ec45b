use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hbf_core::harness::{emit_csv, parse_kv, run_sweep, write_csv, ExperimentConfig, Scenario};
use hbf_core::{hardware_power, Architecture, PowerConstants};

#[derive(Parser, Debug)]
#[command(name = "hbf", version, about = "Hybrid precoding link-level simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a Monte Carlo sweep and write the results as CSV.
    Simulate(SimulateArgs),
    /// Print the hardware power of each architecture.
    PowerTable {
        /// Antennas.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// RF chains of the hybrid architectures.
        #[arg(long = "n-rf", default_value_t = 16)]
        n_rf: usize,
    },
}

#[derive(clap::Args, Debug)]
struct SimulateArgs {
    /// fig4, fig5, fig6 or custom.
    scenario: Scenario,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// SNR grid in dB: `a,b,c` or `start:stop:step`.
    #[arg(long)]
    snr: Option<String>,
    /// User counts: `a,b,c` or `start:stop:step`.
    #[arg(long)]
    users: Option<String>,
    #[arg(long)]
    pilots: Option<usize>,
    /// perfect, estimated or both.
    #[arg(long)]
    csi: Option<String>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file with any setting; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_config(args: &SimulateArgs) -> Result<(ExperimentConfig, Option<PathBuf>)> {
    let mut config = ExperimentConfig::for_scenario(args.scenario);
    let mut out = None;
    if let Some(path) = &args.config {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        for (key, value) in
            parse_kv(&text).with_context(|| format!("parsing {}", path.display()))?
        {
            match key.as_str() {
                "out" => out = Some(PathBuf::from(value)),
                "scenario" => {
                    if value.parse::<Scenario>()? != args.scenario {
                        eprintln!(
                            "note: scenario '{value}' in config file overridden by '{}'",
                            args.scenario
                        );
                    }
                }
                _ => config
                    .set(&key, &value)
                    .with_context(|| format!("in {}", path.display()))?,
            }
        }
    }
    for item in &args.set {
        let Some((key, value)) = item.split_once('=') else {
            bail!("--set expects KEY=VALUE, got '{item}'");
        };
        config.set(key.trim(), value.trim())?;
    }
    let flags = [
        ("trials", args.trials.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("snr", args.snr.clone()),
        ("users", args.users.clone()),
        ("pilots", args.pilots.map(|v| v.to_string())),
        ("csi", args.csi.clone()),
    ];
    for (key, value) in flags {
        if let Some(value) = value {
            config.set(key, &value)?;
        }
    }
    config.validate()?;
    Ok((config, args.out.clone().or(out)))
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let (config, out) = build_config(args)?;
    let start = Instant::now();
    let result = run_sweep(&config)?;
    match &out {
        Some(path) => emit_csv(&result, path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_csv(&result, &mut lock)?;
            lock.flush()?;
        }
    }
    eprintln!(
        "{}: {} rows from {} trials in {:.1?} (config {}, failed trials {})",
        config.scenario,
        result.rows.len(),
        config.trials,
        start.elapsed(),
        config.hash(),
        result.meta("failed_trials").unwrap_or("0"),
    );
    if let Some(path) = out {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn power_table(n: usize, n_rf: usize) -> Result<()> {
    if n == 0 || n_rf == 0 {
        bail!("--n and --n-rf must be positive");
    }
    let constants = PowerConstants::default();
    println!("{:<14} {:>8} {:>14}", "architecture", "rf", "hardware_mW");
    for arch in Architecture::ALL {
        let chains = if arch == Architecture::FullyDigital {
            n
        } else {
            n_rf
        };
        println!(
            "{:<14} {:>8} {:>14}",
            arch.name(),
            chains,
            hardware_power(arch, n, n_rf, &constants)
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::PowerTable { n, n_rf } => power_table(*n, *n_rf),
    }
}
