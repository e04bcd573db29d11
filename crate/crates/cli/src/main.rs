use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qudit_cluster_cli::{
    cmd_clifford_report, cmd_compile_gate, cmd_dj, cmd_run_pattern, cmd_verify, CliError, GateKind, Mode,
    Report, RunConfig, Suite, DEFAULT_TOLERANCE,
};

/// Simulate and verify measurement-based computation on qudit cluster states.
#[derive(Debug, Parser)]
#[command(name = "qudit-cluster", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Qudit dimension.
    #[arg(long = "dim", short = 'd', global = true, default_value_t = 3)]
    dim: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comparison tolerance.
    #[arg(long, global = true, env = "QC_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Branch selection for pattern runs.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Execute a measurement pattern on a cluster graph.
    RunPattern {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Recover (a, b) from f(x, y) = (x - a)(y - b).
    Dj {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Compile a single-qudit gate into a pattern on a linear cluster.
    CompileGate {
        #[arg(long, value_enum)]
        gate: GateKind,
        /// Power of ZX for `--gate zx`.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Comma-separated phases; random (from --seed) when omitted.
        #[arg(long, allow_hyphen_values = true)]
        phases: Option<String>,
        /// Also write the pattern in the text format.
        #[arg(long)]
        pattern_out: Option<PathBuf>,
    },
    /// List every symplectic action with the generator word that realises it.
    CliffordReport,
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let c = &cli.common;
    let cfg = RunConfig::new(c.dim, c.seed, c.tolerance, c.mode)?;
    match cli.command {
        Command::Verify { suite } => cmd_verify(suite, &cfg),
        Command::RunPattern { graph, pattern } => {
            let g = std::fs::read_to_string(&graph)?;
            let p = std::fs::read_to_string(&pattern)?;
            cmd_run_pattern(&g, &p, &cfg)
        }
        Command::Dj { a, b } => cmd_dj(a, b, &cfg),
        Command::CompileGate {
            gate,
            k,
            phases,
            pattern_out,
        } => {
            let (report, text) = cmd_compile_gate(gate, k, phases.as_deref(), &cfg)?;
            if let Some(path) = pattern_out {
                std::fs::write(path, text)?;
            }
            Ok(report)
        }
        Command::CliffordReport => cmd_clifford_report(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    match run(cli).and_then(|r| r.write(out.as_deref()).map(|()| r)) {
        Ok(report) => ExitCode::from(report.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
