//! Document formats, the seeded generator, the command line front end and
//! the self-test harness.

pub mod cli;
pub mod documents;
pub mod generator;
pub mod selftest;

pub use documents::{MatrixDocument, MatrixKind, ParamsDocument};
pub use generator::{generate_haar_unitary, SeededGenerator};
