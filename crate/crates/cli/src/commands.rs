//! Command implementations. Each returns the text to print and the exit
//! code; nothing here touches stdout directly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lcnkit::analysis::{export_dot, is_controllable, observability_graph, transition_graph};
use lcnkit::synthesis::{bounds as compute_bounds, synthesize_observability_with, PruneRule};
use lcnkit::{apply_feedback, Lcn, SynthesisOptions, SynthesisReport, Verdict};
use serde::Serialize;

use crate::files::{self, ControllerFile, FileError};

pub const EXIT_AFFIRMATIVE: u8 = 0;
pub const EXIT_INPUT_ERROR: u8 = 2;
pub const EXIT_NEGATIVE: u8 = 3;
pub const EXIT_INCOMPLETE: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// One JSON document.
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphKind {
    Transition,
    Observability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub output: String,
}

fn emit<T: Serialize>(
    format: Format,
    report: &T,
    text: impl FnOnce() -> String,
    code: u8,
) -> Outcome {
    let output = match format {
        Format::Text => text(),
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize to JSON");
            s.push('\n');
            s
        }
    };
    Outcome { code, output }
}

fn write_file(path: &Path, contents: &str) -> Result<(), FileError> {
    fs::write(path, contents).map_err(|source| FileError::Write {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Serialize)]
struct Unreachable {
    source: usize,
    target: usize,
}

#[derive(Debug, Serialize)]
struct ControllabilityReport {
    controllable: bool,
    witness: Option<Unreachable>,
    adjacency: Vec<Vec<u64>>,
}

pub fn check_controllability(network: &Path, format: Format) -> Result<Outcome, FileError> {
    let lcn = files::load_network(network)?;
    let c = is_controllable(&lcn);
    let adj = transition_graph(&lcn).adjacency().clone();
    let report = ControllabilityReport {
        controllable: c.controllable,
        witness: c
            .witness
            .map(|(source, target)| Unreachable { source, target }),
        adjacency: (0..adj.rows()).map(|r| adj.row(r).to_vec()).collect(),
    };
    let code = if c.controllable {
        EXIT_AFFIRMATIVE
    } else {
        EXIT_NEGATIVE
    };
    Ok(emit(
        format,
        &report,
        || {
            let mut s = format!("controllable: {}\n", report.controllable);
            if let Some(w) = &report.witness {
                writeln!(s, "no path from state {} to state {}", w.source, w.target).unwrap();
            }
            s.push_str("adjacency:\n");
            for row in &report.adjacency {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                writeln!(s, "  {}", cells.join(" ")).unwrap();
            }
            s
        },
        code,
    ))
}

#[derive(Debug, Serialize)]
struct IndistinguishablePair {
    pair: [usize; 2],
    path: Vec<String>,
    cycle_entry: String,
}

#[derive(Debug, Serialize)]
struct ObservabilityReport {
    observable: bool,
    witness: Option<IndistinguishablePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dot: Option<PathBuf>,
}

pub fn check_observability(
    network: &Path,
    dot: Option<&Path>,
    format: Format,
) -> Result<Outcome, FileError> {
    let lcn = files::load_network(network)?;
    let graph = observability_graph(&lcn);
    if let Some(path) = dot {
        write_file(path, &export_dot(&graph))?;
    }
    let o = graph.check();
    let n = lcn.state_dim();
    let rendered = o.witness.as_ref().map(|w| w.render(n));
    let report = ObservabilityReport {
        observable: o.observable,
        witness: o.witness.map(|w| IndistinguishablePair {
            pair: [w.pair.0, w.pair.1],
            path: w.path.iter().map(|v| v.label(n)).collect(),
            cycle_entry: w.cycle_entry.label(n),
        }),
        dot: dot.map(Path::to_owned),
    };
    let code = if o.observable {
        EXIT_AFFIRMATIVE
    } else {
        EXIT_NEGATIVE
    };
    Ok(emit(
        format,
        &report,
        || {
            let mut s = format!("observable: {}\n", report.observable);
            if let (Some(w), Some(path)) = (&report.witness, &rendered) {
                writeln!(
                    s,
                    "states {} and {} are indistinguishable: {path}",
                    w.pair[0], w.pair[1]
                )
                .unwrap();
            }
            if let Some(p) = &report.dot {
                writeln!(s, "observability graph written to {}", p.display()).unwrap();
            }
            s
        },
        code,
    ))
}

/// Writes the feedback system to `out`, or prints it when `out` is absent.
pub fn apply_feedback_cmd(
    network: &Path,
    controller: &Path,
    out: Option<&Path>,
    format: Format,
) -> Result<Outcome, FileError> {
    let lcn = files::load_network(network)?;
    let fb = files::load_controller(controller, &lcn)?;
    let closed = apply_feedback(&lcn, &fb).map_err(|e| FileError::Invalid {
        path: controller.to_owned(),
        problems: vec![e.to_string()],
    })?;
    if let Some(path) = out {
        files::save_network(path, &closed)?;
    }
    let file = files::NetworkFile::from_lcn(&closed);
    Ok(emit(
        format,
        &file,
        || match out {
            Some(path) => format!(
                "feedback system (N = {}, M = {}) written to {}\n",
                closed.state_dim(),
                closed.input_dim(),
                path.display()
            ),
            None => files::network_text(None, &closed),
        },
        EXIT_AFFIRMATIVE,
    ))
}

fn factor_product(factors: &[u128]) -> String {
    factors
        .iter()
        .map(u128::to_string)
        .collect::<Vec<_>>()
        .join(" × ")
}

fn synthesis_text(lcn: &Lcn, r: &SynthesisReport, out: Option<&Path>) -> String {
    let mut s = format!(
        "verdict: {}\n",
        serde_json::to_value(r.verdict).unwrap().as_str().unwrap()
    );
    if let Some(g) = &r.witness {
        writeln!(s, "controller: g = {g}").unwrap();
        if r.already_observable {
            s.push_str("network is observable without feedback\n");
        }
        if let Some(path) = out {
            writeln!(s, "controller written to {}", path.display()).unwrap();
        }
    }
    writeln!(s, "naive bound: {}", r.naive_bound).unwrap();
    writeln!(
        s,
        "refined bound: {} ({})",
        r.refined_bound,
        factor_product(&r.num_factors)
    )
    .unwrap();
    writeln!(s, "candidates checked: {}", r.candidates_checked).unwrap();
    for (rule, count) in &r.pruned_by {
        let name = match rule {
            PruneRule::WithinClassCollision => "within-class collision",
            PruneRule::NotExamined => "not examined",
        };
        writeln!(s, "pruned ({name}): {count}").unwrap();
    }
    if let Some(w) = &r.constant_block {
        writeln!(
            s,
            "states {} and {} share an output and have constant blocks that defeat every controller",
            w.first, w.second
        )
        .unwrap();
    }
    if let Some(i) = r.colliding_class {
        let members = &lcnkit::synthesis::output_partition(lcn).classes[i - 1].members;
        writeln!(
            s,
            "output class {i} {members:?} cannot be mapped to distinct successors"
        )
        .unwrap();
    }
    s
}

pub fn synthesize(
    network: &Path,
    max_candidates: Option<u64>,
    out: Option<&Path>,
    format: Format,
) -> Result<Outcome, FileError> {
    let lcn = files::load_network(network)?;
    let options = SynthesisOptions {
        max_candidates,
        ..SynthesisOptions::default()
    };
    let report = synthesize_observability_with(&lcn, &options);
    let code = match report.verdict {
        Verdict::Synthesized => EXIT_AFFIRMATIVE,
        Verdict::NotSynthesizable => EXIT_NEGATIVE,
        Verdict::DecisionIncomplete => EXIT_INCOMPLETE,
    };
    let written = match (&report.witness, out) {
        (Some(g), Some(path)) => {
            files::save_controller(path, &ControllerFile::closed_loop(g))?;
            Some(path)
        }
        _ => None,
    };
    Ok(emit(
        format,
        &report,
        || synthesis_text(&lcn, &report, written),
        code,
    ))
}

pub fn bounds(network: &Path, format: Format) -> Result<Outcome, FileError> {
    let lcn = files::load_network(network)?;
    let b = compute_bounds(&lcn);
    Ok(emit(
        format,
        &b,
        || {
            format!(
                "naive bound: {}\nrefined bound: {} ({})\n",
                b.naive,
                b.refined,
                factor_product(&b.num_factors)
            )
        },
        EXIT_AFFIRMATIVE,
    ))
}

/// DOT text goes to `out` when given, otherwise to stdout regardless of
/// `format`.
pub fn export_graph(
    network: &Path,
    kind: GraphKind,
    out: Option<&Path>,
) -> Result<Outcome, FileError> {
    let lcn = files::load_network(network)?;
    let dot = match kind {
        GraphKind::Transition => export_dot(&transition_graph(&lcn)),
        GraphKind::Observability => export_dot(&observability_graph(&lcn)),
    };
    let output = match out {
        Some(path) => {
            write_file(path, &dot)?;
            String::new()
        }
        None => dot,
    };
    Ok(Outcome {
        code: EXIT_AFFIRMATIVE,
        output,
    })
}
