//! Command-line front end, file formats and verification suites for `arbor-core`.

pub mod charfile;
pub mod cli;
pub mod settings;
pub mod suites;
pub mod words;

pub use cli::{run, Outcome};
