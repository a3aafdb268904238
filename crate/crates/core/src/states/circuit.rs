use crate::error::QsimError;
use crate::qsim::{Gate, GateName, StateVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub wire: usize,
    /// 1 for an ordinary control, 0 for an anti-control.
    pub value: u8,
}

/// One gate application; wires are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStep {
    pub gate: GateName,
    pub control: Option<Control>,
    pub target: usize,
}

/// Serialized form of a step, wires numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub gate: GateName,
    pub control: Option<usize>,
    pub control_value: Option<u8>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitDescription {
    pub num_qubits: usize,
    pub steps: Vec<CircuitStep>,
}

impl CircuitStep {
    fn touches(&self, wire: usize) -> bool {
        self.target == wire || self.control.is_some_and(|c| c.wire == wire)
    }

    fn is_plain(&self, gate: GateName, wire: usize) -> bool {
        self.gate == gate && self.control.is_none() && self.target == wire
    }
}

impl CircuitDescription {
    pub fn replay(&self) -> Result<StateVector, QsimError> {
        self.replay_prefix(self.steps.len())
    }

    /// State after the first `count` steps, starting from |0…0⟩.
    pub fn replay_prefix(&self, count: usize) -> Result<StateVector, QsimError> {
        let mut state = StateVector::zero(self.num_qubits)?;
        for step in &self.steps[..count.min(self.steps.len())] {
            let gate = Gate::by_name(step.gate).ok_or_else(|| {
                QsimError::InvalidParams(format!("gate {} has no fixed matrix", step.gate))
            })?;
            state = match step.control {
                None => state.apply_gate(&gate, step.target)?,
                Some(c) => state.apply_controlled(&gate, c.wire, c.value, step.target)?,
            };
        }
        Ok(state)
    }

    pub fn records(&self) -> Vec<StepRecord> {
        self.steps
            .iter()
            .map(|s| StepRecord {
                gate: s.gate,
                control: s.control.map(|c| c.wire + 1),
                control_value: s.control.map(|c| c.value),
                target: s.target + 1,
            })
            .collect()
    }

    /// Lowers anti-controls to X·(controlled gate)·X and cancels X pairs that end up
    /// adjacent on a wire.
    pub fn elementary_gates(&self) -> Vec<CircuitStep> {
        let mut out = Vec::new();
        for step in &self.steps {
            match step.control {
                Some(c) if c.value == 0 => {
                    let flip = CircuitStep {
                        gate: GateName::X,
                        control: None,
                        target: c.wire,
                    };
                    out.push(flip);
                    out.push(CircuitStep {
                        control: Some(Control {
                            wire: c.wire,
                            value: 1,
                        }),
                        ..*step
                    });
                    out.push(flip);
                }
                _ => out.push(*step),
            }
        }
        loop {
            let pair = (0..out.len()).find_map(|i| {
                let w = out[i].target;
                if !out[i].is_plain(GateName::X, w) {
                    return None;
                }
                let next = (i + 1..out.len()).find(|&j| out[j].touches(w))?;
                out[next].is_plain(GateName::X, w).then_some((i, next))
            });
            match pair {
                Some((i, j)) => {
                    out.remove(j);
                    out.remove(i);
                }
                None => break,
            }
        }
        out
    }
}

/// Preparation circuit for |W_1⟩ from |000⟩:
/// H(3); anti-controlled-H(3 → 1); CNOT(1 → 2); anti-controlled-NOT(3 → 2).
///
/// A controlled-H is required: |W_1⟩ has amplitude magnitudes {½, ½, √2/2}, so no
/// circuit of X, CNOT and H alone reaches it (see [`super::stabilizer`]).
pub fn w1_circuit() -> CircuitDescription {
    let (q1, q2, q3) = (0, 1, 2);
    CircuitDescription {
        num_qubits: 3,
        steps: vec![
            CircuitStep {
                gate: GateName::H,
                control: None,
                target: q3,
            },
            CircuitStep {
                gate: GateName::H,
                control: Some(Control { wire: q3, value: 0 }),
                target: q1,
            },
            CircuitStep {
                gate: GateName::X,
                control: Some(Control { wire: q1, value: 1 }),
                target: q2,
            },
            CircuitStep {
                gate: GateName::X,
                control: Some(Control { wire: q3, value: 0 }),
                target: q2,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::fidelity;
    use crate::states::make_w1;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn replay_reaches_w1() {
        let out = w1_circuit().replay().unwrap();
        assert!(fidelity(&out, &make_w1()).unwrap() >= 1.0 - 1e-12);
        assert!(out.max_abs_diff(&make_w1()) < 1e-12);
    }

    #[test]
    fn stepwise_states() {
        let c = w1_circuit();
        // after two steps: ½(|000⟩ + |100⟩) + (1/√2)|001⟩
        let mut amps = [0.0; 8];
        amps[0b000] = 0.5;
        amps[0b100] = 0.5;
        amps[0b001] = FRAC_1_SQRT_2;
        let expected = StateVector::from_real(3, &amps).unwrap();
        assert!(c.replay_prefix(2).unwrap().max_abs_diff(&expected) < 1e-15);

        // after three steps: ½(|000⟩ + |110⟩) + (1/√2)|001⟩, and the last
        // anti-CNOT maps that to |W_1⟩
        let mut amps = [0.0; 8];
        amps[0b000] = 0.5;
        amps[0b110] = 0.5;
        amps[0b001] = FRAC_1_SQRT_2;
        let before_last = StateVector::from_real(3, &amps).unwrap();
        assert!(c.replay_prefix(3).unwrap().max_abs_diff(&before_last) < 1e-15);
        let last = before_last.apply_controlled(&Gate::x(), 2, 0, 1).unwrap();
        assert!(last.max_abs_diff(&make_w1()) < 1e-15);
    }

    #[test]
    fn gate_counts() {
        let c = w1_circuit();
        assert_eq!(c.steps.len(), 4);
        let elementary = c.elementary_gates();
        assert_eq!(elementary.len(), 6);
        let lowered = CircuitDescription {
            num_qubits: 3,
            steps: elementary,
        };
        assert!(lowered.replay().unwrap().max_abs_diff(&make_w1()) < 1e-12);
    }

    #[test]
    fn records_are_one_based() {
        let recs = w1_circuit().records();
        assert_eq!(recs[0].target, 3);
        assert_eq!(recs[0].control, None);
        assert_eq!(recs[1].control, Some(3));
        assert_eq!(recs[1].control_value, Some(0));
        assert_eq!(recs[1].target, 1);
        let json = serde_json::to_string(&recs[2]).unwrap();
        assert_eq!(
            json,
            r#"{"gate":"X","control":1,"control_value":1,"target":2}"#
        );
    }
}
