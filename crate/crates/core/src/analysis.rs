//! Reduced states of the travel particle, optimal-guess bounds, Monte Carlo leak
//! estimates and exact enumeration of the per-bit outcome table.
//!
//! A receiver who wants a sender's bit sees only the travel particle. Every
//! resource here leaves that particle in a state diagonal in Z for both bit values,
//! so a Z measurement followed by a maximum-likelihood guess already reaches the
//! Helstrom bound and no general POVM is needed.

use crate::error::{ProtocolError, QsimError};
use crate::protocol::{Encoding, Variant};
use crate::qsim::{helstrom, DensityMatrix, StateVector};
use crate::states::{
    encode_on, make_epr, make_symmetric_w, make_w1, make_w1_prime, InitialKind, SymmetricW,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Probabilities below this are treated as unreachable branches.
const BRANCH_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resource {
    #[serde(rename = "w1")]
    W1,
    #[serde(rename = "w1_prime")]
    W1Prime,
    #[serde(rename = "symw")]
    SymmetricW,
    #[serde(rename = "epr")]
    Epr,
}

impl Resource {
    pub fn prepare(self) -> StateVector {
        match self {
            Resource::W1 => make_w1(),
            Resource::W1Prime => make_w1_prime(),
            Resource::SymmetricW => make_symmetric_w(SymmetricW::Phi1),
            Resource::Epr => make_epr(),
        }
    }

    pub fn travel_qubit(self) -> usize {
        self.prepare().num_qubits() - 1
    }
}

/// Encoded state of `resource` carrying `bit` on its travel particle.
pub fn encoded_state(
    resource: Resource,
    encoding: Encoding,
    bit: bool,
) -> Result<StateVector, QsimError> {
    encode_on(
        &resource.prepare(),
        resource.travel_qubit(),
        bit,
        &encoding.gate(),
    )
}

/// Travel-particle reduced states for bit 0 and bit 1.
pub fn encoded_reduced_states(
    resource: Resource,
    encoding: Encoding,
) -> Result<(DensityMatrix, DensityMatrix), QsimError> {
    let travel = resource.travel_qubit();
    let reduce = |bit| -> Result<DensityMatrix, QsimError> {
        DensityMatrix::from_pure(&encoded_state(resource, encoding, bit)?).partial_trace(&[travel])
    };
    Ok((reduce(false)?, reduce(true)?))
}

/// Best achievable probability of guessing the encoded bit from the travel particle.
pub fn leak_bound(resource: Resource, encoding: Encoding) -> Result<f64, QsimError> {
    let (rho0, rho1) = encoded_reduced_states(resource, encoding)?;
    helstrom(&rho0, &rho1)
}

/// Maximum-likelihood guess after a Z outcome; ties go to 0.
pub fn ml_guess(rho0: &DensityMatrix, rho1: &DensityMatrix, outcome: u8) -> bool {
    let i = usize::from(outcome);
    rho1.diagonal()[i] > rho0.diagonal()[i]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakReport {
    pub resource: Resource,
    pub encoding: Encoding,
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
    pub bound: f64,
    pub empirical: f64,
    pub successes: u64,
    pub trials: u64,
    /// Binomial standard deviation of `empirical` around `bound`.
    pub sigma: f64,
}

impl LeakReport {
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.empirical - self.bound).abs() <= k * self.sigma
    }
}

pub fn leak_monte_carlo<R: Rng + ?Sized>(
    resource: Resource,
    encoding: Encoding,
    trials: u64,
    rng: &mut R,
) -> Result<LeakReport, QsimError> {
    if trials == 0 {
        return Err(QsimError::InvalidParams("trials must be at least 1".into()));
    }
    let (rho0, rho1) = encoded_reduced_states(resource, encoding)?;
    let bound = helstrom(&rho0, &rho1)?;
    let travel = resource.travel_qubit();
    let states = [
        encoded_state(resource, encoding, false)?,
        encoded_state(resource, encoding, true)?,
    ];
    let mut successes = 0u64;
    for _ in 0..trials {
        let bit: bool = rng.gen();
        let outcome = states[usize::from(bit)].measure_z(&[travel], rng)?.outcomes[0];
        if ml_guess(&rho0, &rho1, outcome) == bit {
            successes += 1;
        }
    }
    Ok(LeakReport {
        resource,
        encoding,
        rho0,
        rho1,
        bound,
        empirical: successes as f64 / trials as f64,
        successes,
        trials,
        sigma: (bound * (1.0 - bound) / trials as f64).sqrt(),
    })
}

/// One reachable measurement branch for one index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
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
    /// Exact branch probability given (x, y, kinds).
    pub probability: f64,
}

impl ScanRow {
    pub fn consistent(&self) -> bool {
        self.c_i == self.x ^ self.y
    }
}

/// Row of the outcome table with initial kinds marginalized out and |01⟩, |10⟩
/// grouped. `probability` assumes uniformly chosen kinds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub x: u8,
    pub y: u8,
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
    pub probability: f64,
}

impl Table1Row {
    pub fn consistent(&self) -> bool {
        self.c_i == self.x ^ self.y
    }

    /// The C columns in table order: C^A1, C^B2, C^B1, C^A2, C^A, C^B, C_i.
    pub fn c_columns(&self) -> [u8; 7] {
        [
            self.c_a1, self.c_b2, self.c_b1, self.c_a2, self.c_a, self.c_b, self.c_i,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectnessScan {
    pub variant: Variant,
    pub encoding: Encoding,
    pub rows: Vec<ScanRow>,
}

struct Branch {
    retained: String,
    travel: u8,
    probability: f64,
}

/// Z-outcome distribution of one party's state after encoding and the receiver's
/// alignment.
fn branches(kind: InitialKind, bit: bool, encoding: Encoding) -> Result<Vec<Branch>, QsimError> {
    let travel = kind.travel_qubit();
    let mut state = encode_on(&kind.prepare(), travel, bit, &encoding.gate())?;
    if kind.needs_hadamard() {
        state = state.apply_gate(&crate::qsim::Gate::h(), travel)?;
    }
    let n = kind.num_qubits();
    let all: Vec<usize> = (0..n).collect();
    let probs = state.probabilities(&all)?;
    Ok(probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > BRANCH_EPSILON)
        .map(|(pattern, &p)| {
            let ket: String = (0..n)
                .map(|q| {
                    if (pattern >> (n - 1 - q)) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            Branch {
                retained: ket[..n - 1].to_string(),
                travel: (pattern & 1) as u8,
                probability: p,
            }
        })
        .collect())
}

fn retained_value(ket: &str) -> Result<u8, ProtocolError> {
    match ket {
        "0" | "00" => Ok(0),
        "1" | "01" | "10" => Ok(1),
        other => Err(ProtocolError::Integrity(format!(
            "reachable retained outcome |{other}⟩"
        ))),
    }
}

/// Exhaustive enumeration over secret bits, both parties' initial kinds and every
/// measurement branch, with exact Born probabilities.
pub fn correctness_scan(
    variant: Variant,
    encoding: Encoding,
) -> Result<CorrectnessScan, ProtocolError> {
    let mut rows = Vec::new();
    for (x, y) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        for &kind_a in variant.kinds() {
            for &kind_b in variant.kinds() {
                let ba = branches(kind_a, x == 1, encoding)?;
                let bb = branches(kind_b, y == 1, encoding)?;
                for a in &ba {
                    for b in &bb {
                        let c_a1 = retained_value(&a.retained)?;
                        let c_b1 = retained_value(&b.retained)?;
                        let (c_b2, c_a2) = (b.travel, a.travel);
                        let (c_a, c_b) = (c_a1 ^ c_b2, c_b1 ^ c_a2);
                        rows.push(ScanRow {
                            x,
                            y,
                            kind_a,
                            kind_b,
                            m_a1: a.retained.clone(),
                            m_b2: b.travel.to_string(),
                            m_b1: b.retained.clone(),
                            m_a2: a.travel.to_string(),
                            c_a1,
                            c_b2,
                            c_b1,
                            c_a2,
                            c_a,
                            c_b,
                            c_i: c_a ^ c_b,
                            probability: a.probability * b.probability,
                        });
                    }
                }
            }
        }
    }
    Ok(CorrectnessScan {
        variant,
        encoding,
        rows,
    })
}

fn ket_class(m: &str) -> String {
    match m {
        "01" | "10" => "|01⟩ or |10⟩".to_string(),
        other => format!("|{other}⟩"),
    }
}

impl CorrectnessScan {
    pub fn all_consistent(&self) -> bool {
        self.rows.iter().all(ScanRow::consistent)
    }

    pub fn mismatches(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| !r.consistent()).collect()
    }

    /// Total probability per (x, y, kind_a, kind_b) cell.
    pub fn cell_sums(&self) -> Vec<((u8, u8, InitialKind, InitialKind), f64)> {
        let mut cells: Vec<((u8, u8, InitialKind, InitialKind), f64)> = Vec::new();
        for r in &self.rows {
            let key = (r.x, r.y, r.kind_a, r.kind_b);
            match cells.iter_mut().find(|(k, _)| *k == key) {
                Some((_, p)) => *p += r.probability,
                None => cells.push((key, r.probability)),
            }
        }
        cells
    }

    /// Collapses the scan to the outcome table: kinds averaged out, |01⟩ and |10⟩
    /// grouped, rows sorted by (x, y, C columns).
    pub fn table1(&self) -> Vec<Table1Row> {
        let kinds = self.variant.kinds().len() as f64;
        let weight = 1.0 / (kinds * kinds);
        let mut grouped: BTreeMap<(u8, u8, [u8; 7], [String; 4]), f64> = BTreeMap::new();
        for r in &self.rows {
            let key = (
                r.x,
                r.y,
                [r.c_a1, r.c_b2, r.c_b1, r.c_a2, r.c_a, r.c_b, r.c_i],
                [
                    ket_class(&r.m_a1),
                    ket_class(&r.m_b2),
                    ket_class(&r.m_b1),
                    ket_class(&r.m_a2),
                ],
            );
            *grouped.entry(key).or_insert(0.0) += r.probability * weight;
        }
        grouped
            .into_iter()
            .map(|((x, y, c, m), probability)| {
                let [m_a1, m_b2, m_b1, m_a2] = m;
                Table1Row {
                    x,
                    y,
                    m_a1,
                    m_b2,
                    m_b1,
                    m_a2,
                    c_a1: c[0],
                    c_b2: c[1],
                    c_b1: c[2],
                    c_a2: c[3],
                    c_a: c[4],
                    c_b: c[5],
                    c_i: c[6],
                    probability,
                }
            })
            .collect()
    }
}

/// Aligned text rendering of the outcome table. Inconsistent rows are marked `!`.
/// The probability column is an addition to the classic layout.
pub fn render_table1(rows: &[Table1Row]) -> String {
    let header = [
        "x", "y", "M^A1", "M^B2", "M^B1", "M^A2", "C^A1", "C^B2", "C^B1", "C^A2", "C^A", "C^B",
        "C_i", "p",
    ];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                r.x.to_string(),
                r.y.to_string(),
                r.m_a1.clone(),
                r.m_b2.clone(),
                r.m_b1.clone(),
                r.m_a2.clone(),
            ];
            v.extend(r.c_columns().iter().map(u8::to_string));
            v.push(format!("{:.4}", r.probability));
            v
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            cells
                .iter()
                .map(|row| row[i].chars().count())
                .chain([header[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |out: &mut String, mark: char, row: &[String]| {
        out.push(mark);
        for (cell, w) in row.iter().zip(&widths) {
            let pad = w - cell.chars().count();
            let _ = write!(out, " {cell}{}", " ".repeat(pad));
        }
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        out.push('\n');
    };
    let mut out = String::new();
    line(&mut out, ' ', &header.map(String::from));
    for (row, r) in cells.iter().zip(rows) {
        line(&mut out, if r.consistent() { ' ' } else { '!' }, row);
    }
    out
}
