use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcnkit_cli::commands::{self, EXIT_INPUT_ERROR};
use lcnkit_cli::{Format, GraphKind};

/// Controllability, observability and observability synthesis for logical
/// control networks.
///
/// Exit codes: 0 affirmative, 3 negative verdict, 2 input error, 4 search
/// cap reached.
#[derive(Parser)]
#[command(name = "lcnkit", version, about)]
struct Args {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Is the transition graph strongly connected?
    CheckControllability { network: PathBuf },
    /// Can every pair of initial states be told apart?
    CheckObservability {
        network: PathBuf,
        /// Also write the observability graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Substitute a state-feedback controller.
    ApplyFeedback {
        network: PathBuf,
        controller: PathBuf,
        /// Write the feedback system here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a state feedback that makes the network observable.
    Synthesize {
        network: PathBuf,
        /// Give up after this many candidates (exit 4).
        #[arg(long)]
        max_candidates: Option<u64>,
        /// Write the controller here when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Candidate counts before and after within-class pruning.
    Bounds { network: PathBuf },
    /// Render a graph as DOT.
    ExportGraph {
        network: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphKind::Transition)]
        kind: GraphKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let f = args.format;
    let result = match &args.command {
        Command::CheckControllability { network } => commands::check_controllability(network, f),
        Command::CheckObservability { network, dot } => {
            commands::check_observability(network, dot.as_deref(), f)
        }
        Command::ApplyFeedback {
            network,
            controller,
            out,
        } => commands::apply_feedback_cmd(network, controller, out.as_deref(), f),
        Command::Synthesize {
            network,
            max_candidates,
            out,
        } => commands::synthesize(network, *max_candidates, out.as_deref(), f),
        Command::Bounds { network } => commands::bounds(network, f),
        Command::ExportGraph { network, kind, out } => {
            commands::export_graph(network, *kind, out.as_deref())
        }
    };
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.output.as_bytes()).is_err() {
                return ExitCode::from(EXIT_INPUT_ERROR);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
