// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sipf_cli::presets::run_preset;
use sipf_cli::{parse_config, write_outputs, CliError, Result, Runner};

#[derive(Debug, Parser)]
#[command(
    name = "sipf",
    version,
    about = "Stepped-impedance Purcell filter sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the sweep described by a configuration file.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output.directory`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Filter S-parameters from 1 kHz to 10 GHz.
    #[command(name = "figure-1c")]
    Figure1c {
        #[arg(long, default_value = "out/figure-1c")]
        out: PathBuf,
    },
    /// Lifetime with and without the integrated filter.
    #[command(name = "figure-1d")]
    Figure1d {
        #[arg(long, default_value = "out/figure-1d")]
        out: PathBuf,
    },
    /// Standalone filter behind package traces of 5 to 20 mm.
    #[command(name = "figure-2")]
    Figure2 {
        #[arg(long, default_value = "out/figure-2")]
        out: PathBuf,
    },
    /// Standalone filter with a 10 mm trace against no filter.
    #[command(name = "figure-3b")]
    Figure3b {
        #[arg(long, default_value = "out/figure-3b")]
        out: PathBuf,
    },
}

fn run_config(path: &Path, out: Option<PathBuf>) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = parse_config(&text)?;
    let run = Runner::new().run(&cfg)?;
    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    write_outputs(&dir, std::slice::from_ref(&run), &[])
}

fn figure(name: &str, out: &Path) -> Result<Vec<PathBuf>> {
    let report = run_preset(name, &mut Runner::new())?;
    let files = write_outputs(out, &report.runs, &report.extra)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report.summary).expect("summary serializes")
    );
    Ok(files)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => run_config(&config, out),
        Command::Figure1c { out } => figure("figure-1c", &out),
        Command::Figure1d { out } => figure("figure-1d", &out),
        Command::Figure2 { out } => figure("figure-2", &out),
        Command::Figure3b { out } => figure("figure-3b", &out),
    };
    match result {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
