//! Named generators, file formats, seeded experiment batches and the
//! command-line front end.

pub mod cli;
pub mod experiments;
pub mod generate;
pub mod io;

pub use generate::{generate, GeneratorSpec};
