//! `sct`: batch front end to the proof kernel and validity oracle.
//!
//! Exit codes: 0 success, 1 negative result, 2 usage or I/O error,
//! 3 unknown (budget exhausted).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "sct", version, about = "Sequent-calculus workbench for first-order logic with equality")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct BudgetArgs {
    /// Wall-clock budget for proof and countermodel search.
    #[arg(long, default_value_t = 5000)]
    budget_ms: u64,
    /// Largest universe tried by the countermodel search.
    #[arg(long, default_value_t = 3)]
    model_max_size: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Re-check a saved proof; exit 0 only if it is complete.
    Check { path: PathBuf },
    /// Search for a proof; on failure look for a countermodel.
    Prove {
        /// Sequent text; read from stdin when absent or `-`.
        sequent: Option<String>,
        /// Write the proof here (only when one is found).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Traffic-light validity status: green, red or yellow.
    Status {
        sequent: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Suggest the next rule for a sequent.
    Hint {
        sequent: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run the HTTP session service.
    Serve {
        /// Defaults to SCT_PORT, then 8077.
        #[arg(long)]
        port: Option<u16>,
    },
    /// Export a proof as LaTeX or a sequent as an SMT-LIB query.
    Export {
        /// Proof JSON path for --latex; sequent text for --smtlib. Stdin when absent.
        input: Option<String>,
        #[arg(long, conflicts_with = "smtlib", required_unless_present = "smtlib")]
        latex: bool,
        #[arg(long)]
        smtlib: bool,
    },
    /// Compare partial instantiation against the diagonal ground enumeration; prints CSV.
    Bench {
        /// Stop the diagonal enumeration after this many positions.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = commands::Output::new(cli.json);
    let code = match cli.command {
        Command::Check { path } => commands::check(&out, &path),
        Command::Prove { sequent, out: path, budget } => {
            commands::prove(&out, sequent.as_deref(), path.as_deref(), &budget.into())
        }
        Command::Status { sequent, budget } => commands::status(&out, sequent.as_deref(), &budget.into()),
        Command::Hint { sequent, budget } => commands::hint(&out, sequent.as_deref(), &budget.into()),
        Command::Serve { port } => commands::serve(port),
        Command::Export { input, latex, .. } => commands::export(&out, input.as_deref(), latex),
        Command::Bench { limit, budget } => commands::bench(&out, limit, &budget.into()),
    };
    ExitCode::from(code)
}

impl From<BudgetArgs> for sct_core::SearchBudget {
    fn from(b: BudgetArgs) -> Self {
        let mut budget = sct_core::SearchBudget::with_timeout(std::time::Duration::from_millis(b.budget_ms.max(1)));
        budget.model_max_size = b.model_max_size.max(1);
        budget
    }
}
