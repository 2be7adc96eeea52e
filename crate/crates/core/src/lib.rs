//! Controllability and observability of logical control networks, and
//! synthesis of state-feedback controllers that enforce observability.
//!
//! Networks are given in algebraic form: a transition matrix `L` and an
//! output matrix `H`, both logical matrices in δ-notation with 1-based
//! indices (see [`stp::LogicalMatrix`]).
//!
//! ```
//! use lcnkit::{analysis, feedback, model::Lcn, synthesis};
//!
//! let lcn = Lcn::new(4, 2, 2, &[2, 2, 1, 3, 4, 4, 2, 2], Some(&[1, 1, 1, 2])).unwrap();
//! assert!(analysis::is_controllable(&lcn).controllable);
//! assert!(!analysis::is_observable(&lcn).observable);
//!
//! let report = synthesis::synthesize_observability(&lcn);
//! let g = report.witness.unwrap();
//! let closed = feedback::apply_closed_loop(&lcn, &g).unwrap();
//! assert!(analysis::is_observable(&closed).observable);
//! ```

pub mod analysis;
pub mod feedback;
mod graph;
pub mod model;
pub mod stp;
pub mod synthesis;

pub use analysis::{
    export_dot, is_controllable, is_observable, observability_graph, transition_graph, ObsVertex,
    ObservabilityGraph, StateTransitionGraph,
};
pub use feedback::{
    apply_closed_loop, apply_feedback, column_slice, feedback_adjacency, ClosedLoopController,
};
pub use model::{Lcn, LcnParts, ModelError, StateFeedback, Violation};
pub use stp::{DenseMatrix, LogicalMatrix, StpError};
pub use synthesis::{
    bounds, synthesize_observability, synthesize_observability_with, SynthesisOptions,
    SynthesisReport, Verdict,
};
