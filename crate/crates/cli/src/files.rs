//! Network and controller files.
//!
//! Files are TOML unless the path ends in `.json`. Every index is 1-based, as
//! in `δ_n[i_1, …, i_k]`: `L = [2, 2, 1, 3]` with `N = 4` is `δ_4[2,2,1,3]`.
//!
//! ```toml
//! N = 4
//! M = 2
//! Q = 2
//! L = [2, 2, 1, 3, 4, 4, 2, 2]   # state-major: block i holds the M successors of state i
//! H = [1, 1, 1, 2]               # optional; identity when omitted (then Q = N)
//! ```
//!
//! Instead of `L`/`H` a `[truth_table]` may list one row of successors per
//! state in `transition` and the outputs in `output`.

use std::fs;
use std::path::{Path, PathBuf};

use lcnkit::{ClosedLoopController, Lcn, LcnParts, ModelError, StateFeedback};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}:\n{}", .problems.iter().map(|p| format!("  - {p}")).collect::<Vec<_>>().join("\n"))]
    Invalid {
        path: PathBuf,
        problems: Vec<String>,
    },
}

impl FileError {
    fn invalid(path: &Path, problems: Vec<String>) -> Self {
        FileError::Invalid {
            path: path.to_owned(),
            problems,
        }
    }

    fn from_model(path: &Path, err: ModelError) -> Self {
        let problems = match err {
            ModelError::Invalid(v) => v.iter().map(ToString::to_string).collect(),
            other => vec![other.to_string()],
        };
        Self::invalid(path, problems)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Syntax {
    Toml,
    Json,
}

impl Syntax {
    fn of(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Syntax::Json,
            _ => Syntax::Toml,
        }
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Read {
        path: path.to_owned(),
        source,
    })?;
    let parsed = match Syntax::of(path) {
        Syntax::Toml => toml::from_str(&text).map_err(|e| e.message().to_owned()),
        Syntax::Json => serde_json::from_str(&text).map_err(|e| e.to_string()),
    };
    parsed.map_err(|message| FileError::Parse {
        path: path.to_owned(),
        message,
    })
}

fn render<T: Serialize>(value: &T, syntax: Syntax) -> String {
    match syntax {
        Syntax::Toml => toml::to_string(value).expect("file types serialize to TOML"),
        Syntax::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("file types serialize to JSON");
            s.push('\n');
            s
        }
    }
}

fn write<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    fs::write(path, render(value, Syntax::of(path))).map_err(|source| FileError::Write {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthTable {
    /// Row `i` lists the successors of state `i` under inputs `1..=M`.
    pub transition: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    #[serde(rename = "N")]
    pub state_dim: usize,
    #[serde(rename = "M")]
    pub input_dim: usize,
    /// Required whenever an output map is given.
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub output_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_factors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_factors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_factors: Option<Vec<usize>>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<usize>>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_table: Option<TruthTable>,
}

impl NetworkFile {
    /// Validates into a network, reporting every problem found.
    pub fn to_lcn(&self, path: &Path) -> Result<Lcn, FileError> {
        let output = match (&self.output, &self.truth_table) {
            (
                Some(_),
                Some(TruthTable {
                    output: Some(_), ..
                }),
            ) => {
                return Err(FileError::invalid(
                    path,
                    vec!["H and truth_table.output are mutually exclusive".into()],
                ))
            }
            (Some(h), _) => Some(h.clone()),
            (None, Some(t)) => t.output.clone(),
            (None, None) => None,
        };
        let output_dim = match (self.output_dim, &output) {
            (Some(q), _) => q,
            (None, None) => self.state_dim,
            (None, Some(_)) => {
                return Err(FileError::invalid(
                    path,
                    vec!["Q is required when an output map is given".into()],
                ))
            }
        };
        let transition = match (&self.transition, &self.truth_table) {
            (Some(l), None) => l.clone(),
            (None, Some(t)) => {
                let lcn = Lcn::from_truth_table(
                    self.state_dim,
                    self.input_dim,
                    output_dim,
                    &t.transition,
                    output.as_deref(),
                )
                .map_err(|e| FileError::from_model(path, e))?;
                lcn.transition_matrix().indices()
            }
            _ => {
                return Err(FileError::invalid(
                    path,
                    vec!["exactly one of L and truth_table must be given".into()],
                ))
            }
        };
        Lcn::try_from(LcnParts {
            state_dim: self.state_dim,
            input_dim: self.input_dim,
            output_dim,
            state_factors: self.state_factors.clone(),
            input_factors: self.input_factors.clone(),
            output_factors: self.output_factors.clone(),
            transition,
            output,
        })
        .map_err(|e| FileError::from_model(path, e))
    }

    /// `L`/`H` form with every field explicit.
    pub fn from_lcn(lcn: &Lcn) -> Self {
        let parts = lcn.to_parts();
        Self {
            state_dim: parts.state_dim,
            input_dim: parts.input_dim,
            output_dim: Some(parts.output_dim),
            state_factors: parts.state_factors,
            input_factors: parts.input_factors,
            output_factors: parts.output_factors,
            transition: Some(parts.transition),
            output: parts.output,
            truth_table: None,
        }
    }
}

/// A controller file holds either a closed-loop `g` or `P` with `G`.
///
/// ```toml
/// g = [1, 2, 2, 1]          # u = δ_M[g] ⋉ x
/// ```
/// ```toml
/// P = 2
/// G = [1, 2, 2, 2, 1, 2, 1, 2]   # state-major M×P blocks
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<usize>>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub new_input_dim: Option<usize>,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<Vec<usize>>,
}

impl ControllerFile {
    /// Validates against a network with `state_dim` states and `input_dim`
    /// inputs.
    pub fn to_feedback(
        &self,
        path: &Path,
        state_dim: usize,
        input_dim: usize,
    ) -> Result<StateFeedback, FileError> {
        let (p, gain) = match (&self.g, self.new_input_dim, &self.gain) {
            (Some(g), None, None) => (1, g),
            (None, Some(p), Some(gain)) => (p, gain),
            _ => {
                return Err(FileError::invalid(
                    path,
                    vec!["give either g, or both P and G".into()],
                ))
            }
        };
        let mut problems = Vec::new();
        if gain.len() != state_dim * p {
            problems.push(format!(
                "controller has {} entries, network needs N·P = {}",
                gain.len(),
                state_dim * p
            ));
        }
        for (pos, &u) in gain.iter().enumerate() {
            if u == 0 || u > input_dim {
                problems.push(format!(
                    "controller entry {} is {u}, expected 1..={input_dim}",
                    pos + 1
                ));
            }
        }
        if !problems.is_empty() {
            return Err(FileError::invalid(path, problems));
        }
        StateFeedback::new(state_dim, input_dim, p, gain)
            .map_err(|e| FileError::from_model(path, e))
    }

    pub fn closed_loop(g: &ClosedLoopController) -> Self {
        Self {
            g: Some(g.inputs().to_vec()),
            new_input_dim: None,
            gain: None,
        }
    }

    pub fn from_feedback(fb: &StateFeedback) -> Self {
        let gain = fb.gain().indices();
        if fb.is_closed_loop() {
            Self {
                g: Some(gain),
                new_input_dim: None,
                gain: None,
            }
        } else {
            Self {
                g: None,
                new_input_dim: Some(fb.new_input_dim()),
                gain: Some(gain),
            }
        }
    }
}

pub fn load_network(path: &Path) -> Result<Lcn, FileError> {
    read::<NetworkFile>(path)?.to_lcn(path)
}

pub fn save_network(path: &Path, lcn: &Lcn) -> Result<(), FileError> {
    write(path, &NetworkFile::from_lcn(lcn))
}

/// Network file text in the syntax implied by `path`.
pub fn network_text(path: Option<&Path>, lcn: &Lcn) -> String {
    render(
        &NetworkFile::from_lcn(lcn),
        path.map_or(Syntax::Toml, Syntax::of),
    )
}

pub fn load_controller(path: &Path, lcn: &Lcn) -> Result<StateFeedback, FileError> {
    read::<ControllerFile>(path)?.to_feedback(path, lcn.state_dim(), lcn.input_dim())
}

pub fn save_controller(path: &Path, file: &ControllerFile) -> Result<(), FileError> {
    write(path, file)
}
