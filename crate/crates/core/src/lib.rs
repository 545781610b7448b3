//! Simulator and verification library for a single-qudit anonymous-veto
//! (dining-cryptographers) protocol.
//!
//! A single d-level system flies through the voters, each applying a diagonal
//! phase transform drawn from the algebra of a mutually unbiased basis
//! family; the receiver's measurement reads the veto count off a cyclic
//! shift. The crate provides:
//!
//! - [`qudit`]: exact complex state-vector algebra with seeded sampling;
//! - [`mub`]: MUB families and the cycling generators for the supported
//!   dimensions;
//! - [`protocol`]: trusted, untrusted (trit-verified), and collision-prone
//!   qubit executions producing full transcripts;
//! - [`adversary`]: intercept-resend, veto cancellation, and lying-endpoint
//!   attacks with detection and leakage statistics;
//! - [`physical`]: plate-setting algebra, preparation states, and the
//!   interferometric visibility noise model.

pub mod adversary;
pub mod error;
pub mod mub;
pub mod physical;
pub mod protocol;
pub mod qudit;
pub mod rng;

pub use error::{Error, Result};
pub use mub::{build_mub_family, u_generator, v_generator, MubFamily, StateId};
pub use qudit::{BasisSet, DiagonalUnitary, OutcomeDistribution, QuditState};
pub use rng::SeededRng;
