//! Deterministic simulator for quantum private comparison of equality built on
//! asymmetric W states, with replicas of the symmetric-W and EPR predecessors,
//! adversary scenarios and closed-form leak analysis.
//!
//! Module map:
//! - [`qsim`]: dense statevector / density-matrix engine
//! - [`states`]: W-state family, decoys, EPR pair and the |W_1⟩ preparation circuit
//! - [`crypto`]: key oracle, one-time pad and classical message framing
//! - [`protocol`]: Alice / Bob / TP state machines and transcripts
//! - [`adversary`]: intercept-resend, curious-TP and dishonest-participant attacks
//! - [`analysis`]: reduced states, guessing bounds and the exhaustive outcome table
//! - [`cli`]: command implementations behind the `qpce` binary

pub mod adversary;
pub mod analysis;
pub mod bits;
pub mod cli;
pub mod crypto;
pub mod error;
pub mod protocol;
pub mod qsim;
pub mod rng;
pub mod states;

pub use error::{CryptoError, ProtocolError, QsimError};
