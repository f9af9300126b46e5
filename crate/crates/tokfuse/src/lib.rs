//! File formats, reports and the command-line driver for `tokfuse-core`.
//!
//! * [`format`]: the TOK1 binary token-matrix format plus a headerless CSV
//!   alternative for reading.
//! * [`report`]: the JSON document describing one reduction run.
//! * [`cli`]: the `tokfuse` subcommands.

pub mod cli;
mod error;
pub mod format;
pub mod numfmt;
pub mod report;

pub use error::{FormatError, Result};
pub use format::{
    decode_tok1, encode_tok1, read_matrix, read_scores, read_tokens, write_atomic, write_labels,
    write_matrix, write_tokens, Matrix,
};
pub use report::ReductionReport;
