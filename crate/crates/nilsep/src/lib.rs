//! File formats, command line and brute-force oracle for `nilsep-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod graph;
pub mod oracle;

pub use error::{Error, Result};
