use crate::error::QsimError;
use crate::qsim::{Gate, StateVector};
use crate::states::Basis;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Handle to one qubit of a register held in a [`QuantumLab`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParticleRef {
    pub register: usize,
    pub qubit: usize,
}

/// Owns every joint quantum state of a run. Parties and adversaries act on
/// particles through handles, so entangled particles can be held by different
/// parties while sharing one state vector.
#[derive(Debug, Clone, Default)]
pub struct QuantumLab {
    registers: Vec<StateVector>,
}

impl QuantumLab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, state: StateVector) -> usize {
        self.registers.push(state);
        self.registers.len() - 1
    }

    pub fn register(&self, id: usize) -> &StateVector {
        &self.registers[id]
    }

    pub fn apply(&mut self, particle: ParticleRef, gate: &Gate) -> Result<(), QsimError> {
        let reg = &mut self.registers[particle.register];
        *reg = reg.apply_gate(gate, particle.qubit)?;
        Ok(())
    }

    /// Z-basis measurement of several qubits of one register.
    pub fn measure_z<R: Rng + ?Sized>(
        &mut self,
        register: usize,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<Vec<u8>, QsimError> {
        let rec = self.registers[register].measure_z(qubits, rng)?;
        self.registers[register] = rec.post_state;
        Ok(rec.outcomes)
    }

    /// Measures one particle in `basis`, leaving it in the observed eigenstate.
    /// Returns 0 for |0⟩ / |+⟩ and 1 for |1⟩ / |−⟩.
    pub fn measure_in_basis<R: Rng + ?Sized>(
        &mut self,
        particle: ParticleRef,
        basis: Basis,
        rng: &mut R,
    ) -> Result<u8, QsimError> {
        let h = Gate::h();
        if basis == Basis::X {
            self.apply(particle, &h)?;
        }
        let out = self.measure_z(particle.register, &[particle.qubit], rng)?[0];
        if basis == Basis::X {
            self.apply(particle, &h)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

/// Anything that touches particles while they are in flight.
pub trait QuantumChannel {
    fn transit(
        &mut self,
        lab: &mut QuantumLab,
        direction: Direction,
        particles: &[ParticleRef],
    ) -> Result<(), QsimError>;
}

/// Noiseless channel.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealChannel;

impl QuantumChannel for IdealChannel {
    fn transit(
        &mut self,
        _: &mut QuantumLab,
        _: Direction,
        _: &[ParticleRef],
    ) -> Result<(), QsimError> {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_decoy, make_w1, DecoyKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn x_basis_measurement_of_plus_is_certain() {
        let mut lab = QuantumLab::new();
        let r = lab.add(make_decoy(DecoyKind::Plus));
        let p = ParticleRef {
            register: r,
            qubit: 0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert_eq!(lab.measure_in_basis(p, Basis::X, &mut rng).unwrap(), 0);
        }
        assert!(lab.register(r).max_abs_diff(&make_decoy(DecoyKind::Plus)) < 1e-12);
    }

    #[test]
    fn measuring_travel_qubit_collapses_shared_register() {
        let mut lab = QuantumLab::new();
        let r = lab.add(make_w1());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let third = lab.measure_z(r, &[2], &mut rng).unwrap()[0];
        let pair = lab.measure_z(r, &[0, 1], &mut rng).unwrap();
        let c1 = u8::from(pair != [0, 0]);
        assert_eq!(c1 ^ third, 1);
    }
}
