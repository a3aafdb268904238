//! Dense statevector and density-matrix engine for registers of at most a few qubits.
//!
//! Everything is value-typed: gates and measurements return new states. Qubits are
//! 0-based here and 1-based in every report (particle 1 is the leftmost ket symbol).

mod density;
mod gate;
mod state;

pub use density::{helstrom, trace_norm_difference, DensityMatrix};
pub use gate::{Gate, GateName};
pub use state::{fidelity, MeasurementRecord, StateVector};

/// Tolerance for state invariants (normalization, Hermiticity, trace, positivity).
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Tolerance for comparisons against closed-form values.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-12;
