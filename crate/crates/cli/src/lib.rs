//! Library surface of the experiment harness: declarative specs, detector
//! table reproduction, protocol/attack experiment drivers, report emission,
//! and self-verification checks, all deterministic under a fixed seed.

pub mod experiment;
pub mod report;
pub mod spec;
pub mod tables;
pub mod verify;

/// Rejected user input; the CLI maps this to exit code 2.
#[derive(Debug)]
pub struct InvalidInputError(pub String);

impl std::fmt::Display for InvalidInputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInputError {}

pub fn invalid_input(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InvalidInputError(msg.into()))
}
