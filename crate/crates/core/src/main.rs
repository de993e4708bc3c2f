use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phondeq::cli::{self, CliError, Options, RunConfig};

#[derive(Parser)]
#[command(name = "phondeq", version, about = "Phonon-induced dephasing and concurrence of two donor charge qubits")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add the inter-bit rates γ11, γ22, γ12 to the rate table.
    #[arg(long)]
    components: bool,
    /// Do not fail when a full-coth oracle check exceeds the threshold.
    #[arg(long)]
    informational: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Disentanglement rate and its extrema.
    Rate(Common),
    /// Concurrence for each temperature ratio.
    Concurrence(Common),
    /// All figure datasets.
    Figures(Common),
    /// Compare the closed forms with the phonon mode-sum oracle.
    OracleCheck(Common),
    /// Plateau concurrence over angle, center distance, or temperature.
    Sweep(Common),
}

fn run(args: Args) -> Result<u8, CliError> {
    let (common, command) = match &args.command {
        Command::Rate(c) => (c, "rate"),
        Command::Concurrence(c) => (c, "concurrence"),
        Command::Figures(c) => (c, "figures"),
        Command::OracleCheck(c) => (c, "oracle-check"),
        Command::Sweep(c) => (c, "sweep"),
    };
    let cfg = RunConfig::from_path(&common.config)?.resolve()?;
    let opts = Options { out: common.out.clone(), components: common.components, informational: common.informational };
    let files = match command {
        "rate" => cli::cmd_rate(&cfg, &opts)?,
        "concurrence" => cli::cmd_concurrence(&cfg, &opts)?,
        "figures" => cli::cmd_figures(&cfg, &opts)?,
        "sweep" => cli::cmd_sweep(&cfg, &opts)?,
        _ => {
            let report = cli::cmd_oracle_check(&cfg, &opts)?;
            println!("{}", report.summary());
            if let Some(w) = report.regime_warning() {
                eprintln!("warning: {w}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            return Ok(report.exit_code(opts.informational));
        }
    };
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
