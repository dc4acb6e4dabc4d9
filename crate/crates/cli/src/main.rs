use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mrp_cli::{
    cmd_analyze, cmd_perturb, cmd_simulate, cmd_verify, code, emit, resolve_seed, CliError, Fault,
    Format, Outcome, PerturbOptions, Render, SimulateOptions, SubsetChoice, Tolerances,
    VerifyOptions,
};

/// Analysis of finite unichain Markov reward processes.
///
/// Exit codes: 0 success, 1 parse or validation error, 2 chain is not
/// unichain, 3 numerical failure, 4 a checked property was violated.
#[derive(Parser)]
#[command(name = "mrp", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,
    /// Tolerance for residuals of solved quantities (default: per check).
    #[arg(long, global = true)]
    tol_solve: Option<f64>,
    /// Tolerance for inequality and constancy checks (default: per check).
    #[arg(long, global = true)]
    tol_check: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    NegatePassageBias,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary distribution, passage times, bias and Kemeny's constant.
    Analyze { chain: PathBuf },
    /// Perturbation bounds against the actual deviation of a perturbed chain.
    Perturb {
        chain: PathBuf,
        perturbed: PathBuf,
        /// Enumerate every subset of recurrent states.
        #[arg(long, conflicts_with = "sampled_subset")]
        exact_subset: bool,
        /// Search a seeded random sample of subsets.
        #[arg(long)]
        sampled_subset: bool,
        /// Report one start state of the perturbed chain (0-based).
        #[arg(long, conflicts_with = "all_starts")]
        start: Option<usize>,
        /// Report every start state (default).
        #[arg(long)]
        all_starts: bool,
        /// Seed of the sampled subset search (MRP_SEED overrides).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Finite-horizon concentration check by seeded simulation of the perturbed chain.
    Simulate {
        chain: PathBuf,
        perturbed: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        ell: u64,
        /// Confidence levels, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.05")]
        delta: Vec<f64>,
        #[arg(long, default_value_t = 1_000)]
        replicas: u64,
        /// Base seed; replica k uses seed + k (MRP_SEED overrides).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start state (0-based).
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// Randomized self-check of every property on random instances.
    Verify {
        #[arg(long, default_value_t = 1_000)]
        trials: u64,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Seed of the first trial (MRP_SEED overrides).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

fn print<R: serde::Serialize + Render>(
    outcome: Outcome<R>,
    format: Format,
) -> Result<i32, CliError> {
    print!("{}", emit(&outcome.report, format)?);
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    Ok(outcome.exit_code())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let c = cli.common;
    if let Some(threads) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let format = match c.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    let tolerances = Tolerances {
        solve: c.tol_solve,
        check: c.tol_check,
    };
    match cli.command {
        Command::Analyze { chain } => print(cmd_analyze(&chain, tolerances)?, format),
        Command::Perturb {
            chain,
            perturbed,
            exact_subset,
            sampled_subset,
            start,
            all_starts: _,
            seed,
        } => {
            let subsets = match (exact_subset, sampled_subset) {
                (true, _) => SubsetChoice::Exact,
                (_, true) => SubsetChoice::Sampled,
                _ => SubsetChoice::Auto,
            };
            let opts = PerturbOptions {
                subsets,
                start,
                seed: resolve_seed(seed)?,
                tolerances,
            };
            print(cmd_perturb(&chain, &perturbed, &opts)?, format)
        }
        Command::Simulate {
            chain,
            perturbed,
            ell,
            delta,
            replicas,
            seed,
            start,
        } => {
            let opts = SimulateOptions {
                ell,
                deltas: delta,
                replicas,
                seed: resolve_seed(seed)?,
                start,
            };
            print(cmd_simulate(&chain, &perturbed, &opts)?, format)
        }
        Command::Verify {
            trials,
            max_n,
            seed,
            inject_fault,
        } => {
            let fault = inject_fault.map(|FaultArg::NegatePassageBias| Fault::NegatePassageBias);
            let opts = VerifyOptions {
                trials,
                max_n,
                seed: resolve_seed(seed)?,
                tolerances,
                fault,
            };
            let outcome = cmd_verify(&opts)?;
            if let Some(w) = &outcome.report.warning {
                eprintln!("warning: {w}");
            }
            print(outcome, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the parse exit code; help and version succeed
            return ExitCode::from(if e.use_stderr() { code::PARSE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
