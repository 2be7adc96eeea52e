//! Logical control networks in algebraic form.
//!
//! A network with `N` states, `M` inputs and `Q` outputs is stored as two
//! logical matrices: the transition matrix `L ∈ L_{N×NM}` and the output
//! matrix `H ∈ L_{Q×N}`, so that `x(t+1) = L ⋉ x(t) ⋉ u(t)` and
//! `y(t) = H ⋉ x(t)`.
//!
//! `L` is state-major: since `δ_N^i ⋉ δ_M^j = δ_{NM}^{(i-1)M+j}`, column
//! `(i-1)M + j` holds the successor of state `i` under input `j`, and the
//! `i`-th block of `M` consecutive columns is `L_i`.
//!
//! Value sets of individual nodes are identified with basis vectors via
//! `δ_n^i ~ (n-i)/(n-1)`; for Boolean nodes `δ_2^1` is true and `δ_2^2` is
//! false. Only the vector side is modelled here.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stp::LogicalMatrix;

/// One violated network invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ZeroDimension {
        name: String,
    },
    TransitionLength {
        expected: usize,
        actual: usize,
    },
    TransitionIndex {
        position: usize,
        index: usize,
        bound: usize,
    },
    OutputLength {
        expected: usize,
        actual: usize,
    },
    OutputIndex {
        position: usize,
        index: usize,
        bound: usize,
    },
    /// `H` omitted while `Q ≠ N`.
    ImplicitOutputNeedsSquare {
        state_dim: usize,
        output_dim: usize,
    },
    FactorProduct {
        name: String,
        product: usize,
        dim: usize,
    },
    FactorTooSmall {
        name: String,
        factor: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension { name } => write!(f, "{name} must be positive"),
            Violation::TransitionLength { expected, actual } => {
                write!(f, "L column count {actual} ≠ {expected}")
            }
            Violation::TransitionIndex {
                position,
                index,
                bound,
            } => write!(
                f,
                "L index out of range: column {position} has {index}, expected 1..={bound}"
            ),
            Violation::OutputLength { expected, actual } => {
                write!(f, "H column count {actual} ≠ {expected}")
            }
            Violation::OutputIndex {
                position,
                index,
                bound,
            } => write!(
                f,
                "H index out of range: column {position} has {index}, expected 1..={bound}"
            ),
            Violation::ImplicitOutputNeedsSquare {
                state_dim,
                output_dim,
            } => write!(
                f,
                "H omitted but Q = {output_dim} differs from N = {state_dim}"
            ),
            Violation::FactorProduct { name, product, dim } => {
                write!(f, "{name} multiply to {product}, expected {dim}")
            }
            Violation::FactorTooSmall { name, factor } => {
                write!(
                    f,
                    "{name} contain {factor}; every factor must be at least 2"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid network: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("{what} index {index} is outside 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("truth table has no entry for state {state}{}", .input.map(|u| format!(", input {u}")).unwrap_or_default())]
    MissingEntry { state: usize, input: Option<usize> },
    #[error("truth table has an entry for state {state}{} beyond the declared dimensions", .input.map(|u| format!(", input {u}")).unwrap_or_default())]
    ExtraEntry { state: usize, input: Option<usize> },
    #[error("controller expects {expected_states} states and {expected_inputs} inputs, network has {states} and {inputs}")]
    DimensionMismatch {
        expected_states: usize,
        expected_inputs: usize,
        states: usize,
        inputs: usize,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Unchecked description of a network, as read from a file. All indices are
/// 1-based; `output` of `None` stands for the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LcnParts {
    pub state_dim: usize,
    pub input_dim: usize,
    pub output_dim: usize,
    pub state_factors: Option<Vec<usize>>,
    pub input_factors: Option<Vec<usize>>,
    pub output_factors: Option<Vec<usize>>,
    pub transition: Vec<usize>,
    pub output: Option<Vec<usize>>,
}

impl LcnParts {
    /// Checks every invariant and reports all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        for (name, dim) in [
            ("N", self.state_dim),
            ("M", self.input_dim),
            ("Q", self.output_dim),
        ] {
            if dim == 0 {
                out.push(Violation::ZeroDimension { name: name.into() });
            }
        }
        let n = self.state_dim;
        let expected = n.saturating_mul(self.input_dim);
        if self.transition.len() != expected {
            out.push(Violation::TransitionLength {
                expected,
                actual: self.transition.len(),
            });
        }
        for (pos, &idx) in self.transition.iter().enumerate() {
            if idx == 0 || idx > n {
                out.push(Violation::TransitionIndex {
                    position: pos + 1,
                    index: idx,
                    bound: n,
                });
            }
        }
        match &self.output {
            Some(h) => {
                if h.len() != n {
                    out.push(Violation::OutputLength {
                        expected: n,
                        actual: h.len(),
                    });
                }
                for (pos, &idx) in h.iter().enumerate() {
                    if idx == 0 || idx > self.output_dim {
                        out.push(Violation::OutputIndex {
                            position: pos + 1,
                            index: idx,
                            bound: self.output_dim,
                        });
                    }
                }
            }
            None if self.output_dim != n => out.push(Violation::ImplicitOutputNeedsSquare {
                state_dim: n,
                output_dim: self.output_dim,
            }),
            None => {}
        }
        for (name, factors, dim) in [
            ("state_factors", &self.state_factors, self.state_dim),
            ("input_factors", &self.input_factors, self.input_dim),
            ("output_factors", &self.output_factors, self.output_dim),
        ] {
            let Some(factors) = factors else { continue };
            for &f in factors {
                if f < 2 {
                    out.push(Violation::FactorTooSmall {
                        name: name.into(),
                        factor: f,
                    });
                }
            }
            let product = factors
                .iter()
                .try_fold(1usize, |acc, &f| acc.checked_mul(f))
                .unwrap_or(usize::MAX);
            if product != dim {
                out.push(Violation::FactorProduct {
                    name: name.into(),
                    product,
                    dim,
                });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

/// Checks a raw network description; see [`LcnParts::validate`].
pub fn validate(parts: &LcnParts) -> Result<(), Vec<Violation>> {
    parts.validate()
}

/// A validated logical control network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lcn {
    input_dim: usize,
    state_factors: Option<Vec<usize>>,
    input_factors: Option<Vec<usize>>,
    output_factors: Option<Vec<usize>>,
    transition: LogicalMatrix,
    output: LogicalMatrix,
}

impl TryFrom<LcnParts> for Lcn {
    type Error = ModelError;

    fn try_from(parts: LcnParts) -> Result<Self, Self::Error> {
        parts.validate().map_err(ModelError::Invalid)?;
        let n = parts.state_dim;
        let transition =
            LogicalMatrix::from_zero_based(n, parts.transition.iter().map(|i| i - 1).collect());
        let output = match &parts.output {
            Some(h) => {
                LogicalMatrix::from_zero_based(parts.output_dim, h.iter().map(|i| i - 1).collect())
            }
            None => LogicalMatrix::identity(n),
        };
        Ok(Self {
            input_dim: parts.input_dim,
            state_factors: parts.state_factors,
            input_factors: parts.input_factors,
            output_factors: parts.output_factors,
            transition,
            output,
        })
    }
}

impl Lcn {
    /// Builds a network from 1-based `L` and optional `H` column lists.
    pub fn new(
        state_dim: usize,
        input_dim: usize,
        output_dim: usize,
        transition: &[usize],
        output: Option<&[usize]>,
    ) -> Result<Self, ModelError> {
        Self::try_from(LcnParts {
            state_dim,
            input_dim,
            output_dim,
            transition: transition.to_vec(),
            output: output.map(<[usize]>::to_vec),
            ..LcnParts::default()
        })
    }

    /// Builds a network from `transition[i-1][j-1]` = successor of state `i`
    /// under input `j` and `output[i-1]` = output of state `i` (identity when
    /// `None`). Every entry must be present; extra rows or entries are
    /// rejected as well.
    pub fn from_truth_table(
        state_dim: usize,
        input_dim: usize,
        output_dim: usize,
        transition: &[Vec<usize>],
        output: Option<&[usize]>,
    ) -> Result<Self, ModelError> {
        let mut flat = Vec::with_capacity(state_dim * input_dim);
        for state in 1..=state_dim {
            let row = transition.get(state - 1).ok_or(ModelError::MissingEntry {
                state,
                input: Some(1),
            })?;
            for input in 1..=input_dim {
                flat.push(*row.get(input - 1).ok_or(ModelError::MissingEntry {
                    state,
                    input: Some(input),
                })?);
            }
            if row.len() > input_dim {
                return Err(ModelError::ExtraEntry {
                    state,
                    input: Some(input_dim + 1),
                });
            }
        }
        if transition.len() > state_dim {
            return Err(ModelError::ExtraEntry {
                state: state_dim + 1,
                input: None,
            });
        }
        if let Some(h) = output {
            if h.len() < state_dim {
                return Err(ModelError::MissingEntry {
                    state: h.len() + 1,
                    input: None,
                });
            }
            if h.len() > state_dim {
                return Err(ModelError::ExtraEntry {
                    state: state_dim + 1,
                    input: None,
                });
            }
        }
        Self::new(state_dim, input_dim, output_dim, &flat, output)
    }

    /// Attaches factor metadata; their products must match the dimensions.
    pub fn with_factors(
        self,
        state_factors: Option<Vec<usize>>,
        input_factors: Option<Vec<usize>>,
        output_factors: Option<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let mut parts = self.to_parts();
        parts.state_factors = state_factors;
        parts.input_factors = input_factors;
        parts.output_factors = output_factors;
        Self::try_from(parts)
    }

    /// Same network with `H` replaced.
    pub fn with_output(&self, output_dim: usize, output: &[usize]) -> Result<Self, ModelError> {
        let mut parts = self.to_parts();
        parts.output_dim = output_dim;
        parts.output = Some(output.to_vec());
        parts.output_factors = None;
        Self::try_from(parts)
    }

    /// Raw description with `H` always explicit.
    pub fn to_parts(&self) -> LcnParts {
        LcnParts {
            state_dim: self.state_dim(),
            input_dim: self.input_dim,
            output_dim: self.output_dim(),
            state_factors: self.state_factors.clone(),
            input_factors: self.input_factors.clone(),
            output_factors: self.output_factors.clone(),
            transition: self.transition.indices(),
            output: Some(self.output.indices()),
        }
    }

    pub fn state_dim(&self) -> usize {
        self.transition.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output.rows()
    }

    pub fn state_factors(&self) -> Option<&[usize]> {
        self.state_factors.as_deref()
    }

    pub fn input_factors(&self) -> Option<&[usize]> {
        self.input_factors.as_deref()
    }

    pub fn output_factors(&self) -> Option<&[usize]> {
        self.output_factors.as_deref()
    }

    /// `L`.
    pub fn transition_matrix(&self) -> &LogicalMatrix {
        &self.transition
    }

    /// `H`.
    pub fn output_matrix(&self) -> &LogicalMatrix {
        &self.output
    }

    fn check_state(&self, x: usize) -> Result<(), ModelError> {
        if x == 0 || x > self.state_dim() {
            Err(ModelError::IndexOutOfRange {
                what: "state",
                index: x,
                bound: self.state_dim(),
            })
        } else {
            Ok(())
        }
    }

    /// `L_i`, the `N×M` block of columns belonging to state `i`.
    pub fn block(&self, i: usize) -> Result<LogicalMatrix, ModelError> {
        self.check_state(i)?;
        let m = self.input_dim;
        Ok(LogicalMatrix::from_zero_based(
            self.state_dim(),
            self.transition.raw()[(i - 1) * m..i * m].to_vec(),
        ))
    }

    /// Successor of state `x` under input `u`.
    pub fn step(&self, x: usize, u: usize) -> Result<usize, ModelError> {
        self.check_state(x)?;
        if u == 0 || u > self.input_dim {
            return Err(ModelError::IndexOutOfRange {
                what: "input",
                index: u,
                bound: self.input_dim,
            });
        }
        Ok(self.next0(x - 1, u - 1) + 1)
    }

    /// Output of state `x`.
    pub fn output(&self, x: usize) -> Result<usize, ModelError> {
        self.check_state(x)?;
        Ok(self.out0(x - 1) + 1)
    }

    /// 0-based successor lookup.
    #[inline]
    pub(crate) fn next0(&self, x: usize, u: usize) -> usize {
        self.transition.raw()[x * self.input_dim + u]
    }

    /// 0-based output lookup.
    #[inline]
    pub(crate) fn out0(&self, x: usize) -> usize {
        self.output.raw()[x]
    }

    /// Tabulates the transition and output functions, the inverse of
    /// [`Lcn::from_truth_table`].
    pub fn tabulate(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let m = self.input_dim;
        let transition = self
            .transition
            .indices()
            .chunks(m)
            .map(<[usize]>::to_vec)
            .collect();
        (transition, self.output.indices())
    }
}

/// A state-feedback controller `u(t) = G ⋉ x(t) ⋉ v(t)` with
/// `G ∈ L_{M×NP}`; `P = 1` is the closed-loop case.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateFeedback {
    state_dim: usize,
    new_input_dim: usize,
    gain: LogicalMatrix,
}

impl StateFeedback {
    /// Builds a controller from the 1-based, state-major columns of `G`.
    pub fn new(
        state_dim: usize,
        input_dim: usize,
        new_input_dim: usize,
        gain: &[usize],
    ) -> Result<Self, ModelError> {
        let mut violations = Vec::new();
        for (name, dim) in [("N", state_dim), ("M", input_dim), ("P", new_input_dim)] {
            if dim == 0 {
                violations.push(Violation::ZeroDimension { name: name.into() });
            }
        }
        let expected = state_dim.saturating_mul(new_input_dim);
        if gain.len() != expected {
            violations.push(Violation::TransitionLength {
                expected,
                actual: gain.len(),
            });
        }
        for (pos, &idx) in gain.iter().enumerate() {
            if idx == 0 || idx > input_dim {
                violations.push(Violation::TransitionIndex {
                    position: pos + 1,
                    index: idx,
                    bound: input_dim,
                });
            }
        }
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        Ok(Self {
            state_dim,
            new_input_dim,
            gain: LogicalMatrix::from_zero_based(input_dim, gain.iter().map(|g| g - 1).collect()),
        })
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn input_dim(&self) -> usize {
        self.gain.rows()
    }

    pub fn new_input_dim(&self) -> usize {
        self.new_input_dim
    }

    pub fn is_closed_loop(&self) -> bool {
        self.new_input_dim == 1
    }

    /// `G`.
    pub fn gain(&self) -> &LogicalMatrix {
        &self.gain
    }

    /// `G_i`, the `M×P` block belonging to state `i`.
    pub fn block(&self, i: usize) -> Result<LogicalMatrix, ModelError> {
        if i == 0 || i > self.state_dim {
            return Err(ModelError::IndexOutOfRange {
                what: "state",
                index: i,
                bound: self.state_dim,
            });
        }
        let p = self.new_input_dim;
        Ok(LogicalMatrix::from_zero_based(
            self.input_dim(),
            self.gain.raw()[(i - 1) * p..i * p].to_vec(),
        ))
    }

    /// 0-based input chosen at state `x` under new input `v`.
    #[inline]
    pub(crate) fn input0(&self, x: usize, v: usize) -> usize {
        self.gain.raw()[x * self.new_input_dim + v]
    }
}
