//! Breadth-first enumeration of states reachable from |0…0⟩ under a Clifford gate set.
//!
//! States are compared up to global phase. The search runs until no new state appears
//! (or a depth cap is hit), so with the full {H, S, CNOT} set on three qubits it
//! visits all 1080 stabilizer states.

use crate::qsim::{fidelity, Gate, StateVector};
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateSet {
    /// NOT, CNOT and H
    NotCnotHadamard,
    /// H, S and CNOT (generates the full Clifford group)
    FullClifford,
}

#[derive(Debug, Clone, Copy)]
enum Move {
    Single(Gate, usize),
    Cnot(usize, usize),
}

fn moves(set: GateSet, n: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for q in 0..n {
        match set {
            GateSet::NotCnotHadamard => {
                out.push(Move::Single(Gate::x(), q));
                out.push(Move::Single(Gate::h(), q));
            }
            GateSet::FullClifford => {
                out.push(Move::Single(Gate::h(), q));
                out.push(Move::Single(Gate::s(), q));
            }
        }
    }
    for c in 0..n {
        for t in 0..n {
            if c != t {
                out.push(Move::Cnot(c, t));
            }
        }
    }
    out
}

/// Key identifying a state up to global phase.
fn canonical_key(state: &StateVector) -> Vec<(i64, i64)> {
    let pivot = state
        .amplitudes()
        .iter()
        .find(|a| a.norm() > 1e-9)
        .copied()
        .expect("normalized state has a nonzero amplitude");
    let phase = pivot.conj() / pivot.norm();
    state
        .amplitudes()
        .iter()
        .map(|a| {
            let z = a * phase;
            ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Reachability {
    pub gate_set: GateSet,
    pub num_qubits: usize,
    pub states_found: usize,
    /// Depth at which the frontier emptied, or the cap if it did not.
    pub depth_reached: usize,
    pub closed: bool,
    /// Every reached state has all nonzero amplitudes of one magnitude.
    pub uniform_magnitudes: bool,
    pub target_reachable: bool,
    pub best_target_fidelity: f64,
}

fn uniform_magnitude(state: &StateVector) -> bool {
    let mags: Vec<f64> = state
        .amplitudes()
        .iter()
        .map(|a| a.norm())
        .filter(|&m| m > 1e-9)
        .collect();
    mags.iter().all(|m| (m - mags[0]).abs() < 1e-9)
}

/// Explores every circuit over `set` up to `max_depth` gates from |0…0⟩ and reports
/// whether `target` was reached.
pub fn search(
    set: GateSet,
    num_qubits: usize,
    max_depth: usize,
    target: &StateVector,
) -> Reachability {
    let start = StateVector::zero(num_qubits).expect("at least one qubit");
    let moves = moves(set, num_qubits);
    let mut seen = HashSet::new();
    seen.insert(canonical_key(&start));
    let mut all = vec![start.clone()];
    let mut frontier = vec![start];
    let mut depth = 0;
    while !frontier.is_empty() && depth < max_depth {
        let mut next = Vec::new();
        for s in &frontier {
            for m in &moves {
                let t = match *m {
                    Move::Single(g, q) => s.apply_gate(&g, q),
                    Move::Cnot(c, t) => s.apply_controlled(&Gate::x(), c, 1, t),
                }
                .expect("moves use valid wires");
                if seen.insert(canonical_key(&t)) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            frontier.clear();
            break;
        }
        depth += 1;
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let best = all
        .iter()
        .map(|s| fidelity(s, target).expect("same size"))
        .fold(0.0, f64::max);
    Reachability {
        gate_set: set,
        num_qubits,
        states_found: all.len(),
        depth_reached: depth,
        closed: frontier.is_empty(),
        uniform_magnitudes: all.iter().all(uniform_magnitude),
        target_reachable: seen.contains(&canonical_key(target)),
        best_target_fidelity: best,
    }
}
