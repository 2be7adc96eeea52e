//! File formats and commands behind the `lcnkit` binary.

pub mod commands;
pub mod files;

pub use commands::{Format, GraphKind, Outcome};
pub use files::{ControllerFile, FileError, NetworkFile};
