use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use photonstat_cli::commands::{cmd_g2dn, cmd_g2tau, cmd_phase, cmd_simulate, resolve_seed};
use photonstat_cli::reproduce::{run_reproduction, DEFAULT_SEED};
use photonstat_cli::units::parse_duration;
use photonstat_core::Time;

/// Pulsed single-photon-source click-stream simulator and correlation
/// analyzer.
#[derive(Parser)]
#[command(name = "photonstat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a click stream and write it with a run manifest.
    Simulate {
        /// Configuration file (key = value); defaults apply for missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output click-stream file.
        #[arg(long)]
        out: PathBuf,
        /// Seed override (also honors PHOTONSTAT_SEED).
        #[arg(long)]
        seed: Option<u64>,
        /// Write the text format instead of PCS1 binary.
        #[arg(long)]
        text: bool,
    },
    /// Unconditioned correlation g2(tau) of a click-stream file, as CSV.
    G2tau {
        #[arg(long)]
        input: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "0.5us", value_parser = parse_duration)]
        bin_width: Time,
        #[arg(long, default_value = "50us", value_parser = parse_duration)]
        max_tau: Time,
        /// Split onto a detector pair and cross-correlate instead of
        /// auto-correlating one detector.
        #[arg(long)]
        hbt: bool,
        /// Seed for the beam-splitter routing (HBT mode).
        #[arg(long, default_value_t = 0)]
        split_seed: u64,
    },
    /// Conditioned correlation g2(dN) of a click-stream file, as CSV.
    G2dn {
        #[arg(long)]
        input: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Pump period.
        #[arg(long, default_value = "5us", value_parser = parse_duration)]
        period: Time,
        /// Bright span at the start of each period.
        #[arg(long, default_value = "2us", value_parser = parse_duration)]
        bright: Time,
        /// Window half-width W: counts cover dN in -W..=W.
        #[arg(long, default_value_t = 5)]
        window: usize,
        /// Bootstrap replicates for the error bars (0 disables).
        #[arg(long, default_value_t = 1000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        bootstrap_seed: u64,
    },
    /// Phase jitter from atomic motion during one pulse.
    Phase {
        /// Axial velocity in mm/s.
        #[arg(long, default_value_t = 5.0)]
        velocity: f64,
        #[arg(long, default_value = "2us", value_parser = parse_duration)]
        pulse: Time,
        /// Wavelength in nm.
        #[arg(long, default_value_t = photonstat_core::phase::DEFAULT_WAVELENGTH_NM)]
        wavelength: f64,
        /// Also sample this many uniform velocities and report statistics.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Histogram CSV for the sampled |dphi| values.
        #[arg(long)]
        hist_out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the full reproduction and write CSVs plus a pass/fail report.
    Reproduce {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            out,
            seed,
            text,
        } => cmd_simulate(config.as_deref(), &out, seed, text),
        Command::G2tau {
            input,
            out,
            bin_width,
            max_tau,
            hbt,
            split_seed,
        } => cmd_g2tau(&input, &out, bin_width, max_tau, hbt, split_seed),
        Command::G2dn {
            input,
            out,
            period,
            bright,
            window,
            replicates,
            bootstrap_seed,
        } => cmd_g2dn(
            &input,
            &out,
            period,
            bright,
            window,
            replicates,
            bootstrap_seed,
        ),
        Command::Phase {
            velocity,
            pulse,
            wavelength,
            samples,
            hist_out,
            seed,
        } => cmd_phase(
            velocity,
            pulse,
            wavelength,
            samples,
            hist_out.as_deref(),
            seed,
        ),
        Command::Reproduce { out_dir, seed } => {
            return match resolve_seed(seed, DEFAULT_SEED)
                .and_then(|(seed, _)| run_reproduction(&out_dir, seed))
            {
                Ok(outcome) => {
                    print!("{}", outcome.report);
                    if outcome.all_pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
