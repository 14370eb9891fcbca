use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod fixtures;

use commands::{Config, Outcome};

#[derive(Parser)]
#[command(name = "entropic", version, about = "Entropic inequalities for marginal scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for projection and proving (default: all cores).
    #[arg(long, global = true, value_parser = positive_usize)]
    threads: Option<usize>,

    /// Slack allowed on entropy-valued (floating point) inputs.
    #[arg(long, global = true, default_value_t = entropic::entropy::DEFAULT_TOLERANCE, value_parser = positive_f64)]
    tolerance: f64,

    /// Limit on combined row pairs during Fourier-Motzkin elimination.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = positive_u64)]
    budget: u64,

    /// Redundancy removal during projection.
    #[arg(long, global = true, value_enum, default_value_t = RedundancyArg::Exact)]
    redundancy: RedundancyArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RedundancyArg {
    Pairwise,
    Exact,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Porta,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConvertTarget {
    Text,
    Porta,
}

#[derive(Subcommand)]
enum Command {
    /// Project the (constrained) polymatroid cone onto a scenario.
    Project {
        /// Scenario file, or a Bayes-net file (projects onto its observed variables
        /// under the local Markov conditions).
        input: PathBuf,
        /// Ground set size; defaults to the scenario's.
        #[arg(long)]
        n: Option<usize>,
        /// Conditional-independence constraints, one `I(S:T|R)` per line.
        #[arg(long)]
        ci: Option<PathBuf>,
        /// Write the inequality file here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the system in another format next to the output file.
        #[arg(long, value_enum, requires = "output")]
        export: Option<ExportFormat>,
    },
    /// Evaluate a model's entropies or a partial vector against an inequality file.
    Check { input: PathBuf, inequalities: PathBuf },
    /// Extend a partial vector to a polymatroid on [n].
    Extend {
        /// Partial-vector or model file.
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ci: Option<PathBuf>,
    },
    /// Decide whether each row of an inequality file is Shannon-type.
    Prove {
        inequalities: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ci: Option<PathBuf>,
    },
    /// Search for a joint distribution reproducing a marginal model.
    MarginalLp {
        model: PathBuf,
        /// Refuse models with more joint outcomes than this.
        #[arg(long, default_value_t = entropic::entropy::DEFAULT_OUTCOME_CAP as u64, value_parser = positive_u64)]
        cap: u64,
    },
    /// Print the entropy vector of a distribution or model file.
    Entropy { input: PathBuf },
    /// Emit a named fixture (`entropic fixture list` shows the names).
    Fixture {
        name: String,
        /// Size parameter for the cycle fixtures.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Translate inequality files between the text and PORTA formats.
    Convert {
        /// Inequality file; `.ieq` files are read as PORTA.
        input: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Ground set size of a PORTA input.
        #[arg(long)]
        n: Option<usize>,
        /// Scenario whose nonempty members are a PORTA input's coordinates.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let cfg = Config {
        json: cli.json,
        tolerance: cli.tolerance,
        budget: cli.budget,
        redundancy: match cli.redundancy {
            RedundancyArg::Pairwise => entropic::polyhedra::Redundancy::Pairwise,
            RedundancyArg::Exact => entropic::polyhedra::Redundancy::Exact,
        },
    };
    match cli.command {
        Command::Project { input, n, ci, output, export } => {
            commands::project(&cfg, &input, n, ci.as_deref(), output.as_deref(), export.is_some())
        }
        Command::Check { input, inequalities } => commands::check(&cfg, &input, &inequalities),
        Command::Extend { input, n, ci } => commands::extend(&cfg, &input, n, ci.as_deref()),
        Command::Prove { inequalities, n, ci } => commands::prove(&cfg, &inequalities, n, ci.as_deref()),
        Command::MarginalLp { model, cap } => commands::marginal_lp(&cfg, &model, cap),
        Command::Entropy { input } => commands::entropy(&cfg, &input),
        Command::Fixture { name, n } => fixtures::emit(&name, n),
        Command::Convert { input, to, n, scenario, output } => {
            commands::convert(&input, to == ConvertTarget::Porta, n, scenario.as_deref(), output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = matches!(
                e.downcast_ref::<entropic::Error>(),
                Some(entropic::Error::BudgetExhausted { .. })
            );
            ExitCode::from(if budget { 3 } else { 2 })
        }
    }
}
