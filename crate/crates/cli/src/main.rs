//! `octorb`: batch verification, catalog export, enumeration and reduction of
//! Rota-Baxter operators on the split octonions.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
//! I/O errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "octorb", version, about = "Rota-Baxter operators on the split octonions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit the report as JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Maximum number of search candidates.
    #[arg(long, global = true, env = "OCTORB_BUDGET", default_value_t = octorb::search::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads for searches (1 forces serial execution).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Base field: q (rationals) or fp (needs --p).
    #[arg(long, global = true, value_enum, default_value_t = FieldArg::Q)]
    pub field: FieldArg,
    /// Characteristic for --field fp.
    #[arg(long, global = true)]
    pub p: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldArg {
    #[value(alias = "Q")]
    Q,
    #[value(alias = "FP", alias = "Fp")]
    Fp,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the multiplication table: unit, alternativity, quadratic and norm laws.
    VerifyAlgebra {
        /// Number of random elements and pairs.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Check that each numbered map and the classical involution is the kind of
    /// map it is claimed to be.
    VerifyMaps,
    /// Build catalog operators and run the Rota-Baxter check on each.
    VerifyCatalog {
        /// theorem1, corollary1..6, lemma1..7, prop18 or all.
        #[arg(long, default_value = "all")]
        source: String,
        /// Fix alpha instead of sweeping sample values.
        #[arg(long)]
        alpha: Option<String>,
        /// Fix beta instead of sweeping sample values.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Run the Rota-Baxter check on an operator file.
    Check { file: PathBuf },
    /// Print the conjugation-invariant fingerprint of an operator file.
    Fingerprint { file: PathBuf },
    /// Write one operator file per case of a source.
    CatalogDump {
        #[arg(long)]
        source: String,
        #[arg(long)]
        alpha: Option<String>,
        /// Defaults to 1 for cases that use it.
        #[arg(long)]
        beta: Option<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Exhaustive search over a prime field with constrained image and kernel.
    Enumerate {
        /// N1, I1, I2, N2, N3, I3 or S4.
        #[arg(long)]
        image: String,
        /// Vectors the kernel must contain, separated by ';'. Each is a
        /// combination like `e11 + 2 ve22` or eight comma-separated scalars.
        /// Defaults to the proven kernels for N3, I3 and S4; `none` disables.
        #[arg(long)]
        kernel: Option<String>,
        /// Keep only operators whose image is the whole target.
        #[arg(long)]
        exact: bool,
        /// Group operators into orbits and match them to catalog cases.
        #[arg(long)]
        orbits: bool,
    },
    /// Reduce an operator to the canonical representative of its orbit.
    Reduce {
        file: PathBuf,
        /// Write the representative here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a conjugation script on an operator, or the built-in scripts.
    ReplayScript {
        /// Script JSON file.
        script: Option<PathBuf>,
        /// Operator the script starts from.
        input: Option<PathBuf>,
        /// Operator the script should produce.
        #[arg(long)]
        expect: Option<PathBuf>,
        /// Replay the shipped scripts instead (`all` or a name).
        #[arg(long)]
        builtin: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
