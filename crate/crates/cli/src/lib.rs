//! Problem files, command dispatch and reports for the `canon-symmetry`
//! binary.

pub mod commands;
pub mod gallery;
pub mod problem;
pub mod report;

pub use commands::{run, Command, Options};
pub use problem::{InputError, Problem};
pub use report::Report;
