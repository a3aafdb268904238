use super::config::{Encoding, Variant};
use crate::states::InitialKind;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    NotEqual,
    AbortedEavesdrop,
}

/// Per-index diagnostics in the column order of the outcome table.
/// `m_*` are measured kets, `c_*` the derived bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BitRecord {
    pub index: usize,
    pub x: u8,
    pub y: u8,
    pub kind_a: InitialKind,
    pub kind_b: InitialKind,
    pub m_a1: String,
    pub m_b2: String,
    pub m_b1: String,
    pub m_a2: String,
    pub c_a1: u8,
    pub c_b2: u8,
    pub c_b1: u8,
    pub c_a2: u8,
    pub c_a: u8,
    pub c_b: u8,
    pub c_i: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoyCheck {
    pub decoys: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub aborted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRates {
    pub alice_to_bob: DecoyCheck,
    pub bob_to_alice: DecoyCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub variant: Variant,
    pub encoding: Encoding,
    pub bits: usize,
    pub mix: usize,
    pub decoys: usize,
    pub seed: u64,
    pub verdict: Verdict,
    /// Hamming distance recovered by the participants; absent after an abort.
    #[serde(rename = "R")]
    pub r: Option<usize>,
    #[serde(rename = "R_prime")]
    pub r_prime: Option<usize>,
    pub per_bit: Vec<BitRecord>,
    pub error_rates: ErrorRates,
    pub notes: Vec<String>,
}
