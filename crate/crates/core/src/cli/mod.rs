//! Definition files, law suites and the command runner behind the binary.

pub mod qdf;
pub mod resolve;
pub mod run;
pub mod suites;

pub use qdf::{parse_qdf, serialize, QdfDocument, QdfError};
pub use resolve::{resolve, Env, Resolved};
pub use run::{run, run_from, Cli, RunOutput, PRELUDE};
