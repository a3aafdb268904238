//! Constructors for every quantum resource used by the protocols.
//!
//! Kets are written particle 1, 2, 3 from left to right, matching
//! [`StateVector`]'s qubit order.

mod circuit;
pub mod stabilizer;

pub use circuit::{w1_circuit, CircuitDescription, CircuitStep, Control, StepRecord};

use crate::error::QsimError;
use crate::qsim::{Gate, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

/// Parameters of the asymmetric family
/// `(|100⟩ + √n e^{iγ}|010⟩ + √(n+1) e^{iδ}|001⟩) / √(2+2n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WStateParams {
    pub n: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl WStateParams {
    /// Phases default to zero.
    pub fn new(n: f64) -> Self {
        Self {
            n,
            gamma: 0.0,
            delta: 0.0,
        }
    }
}

pub fn make_wn(params: WStateParams) -> Result<StateVector, QsimError> {
    let WStateParams { n, gamma, delta } = params;
    if n.is_nan() || n < 0.0 || !n.is_finite() {
        return Err(QsimError::InvalidParams(format!("n must be >= 0, got {n}")));
    }
    if !gamma.is_finite() || !delta.is_finite() {
        return Err(QsimError::InvalidParams("phases must be finite".into()));
    }
    let norm = 1.0 / (2.0 + 2.0 * n).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b100] = Complex64::new(norm, 0.0);
    amps[0b010] = Complex64::from_polar(norm * n.sqrt(), gamma);
    amps[0b001] = Complex64::from_polar(norm * (n + 1.0).sqrt(), delta);
    StateVector::new(3, amps)
}

/// |W_1⟩ = ½(|100⟩ + |010⟩ + √2|001⟩)
pub fn make_w1() -> StateVector {
    make_wn(WStateParams::new(1.0)).expect("n = 1 is valid")
}

/// |W′_1⟩ = ½(|10+⟩ + |01+⟩ + √2|00−⟩)
pub fn make_w1_prime() -> StateVector {
    let h = FRAC_1_SQRT_2;
    let mut amps = [0.0; 8];
    // ½|10+⟩
    amps[0b100] = 0.5 * h;
    amps[0b101] = 0.5 * h;
    // ½|01+⟩
    amps[0b010] = 0.5 * h;
    amps[0b011] = 0.5 * h;
    // (√2/2)|00−⟩
    amps[0b000] = SQRT_2 / 2.0 * h;
    amps[0b001] = -SQRT_2 / 2.0 * h;
    StateVector::from_real(3, &amps).expect("normalized by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricW {
    /// (|100⟩ + |010⟩ + |001⟩)/√3
    Phi1,
    /// (|10+⟩ + |01+⟩ + |00−⟩)/√3
    Phi2,
}

pub fn make_symmetric_w(variant: SymmetricW) -> StateVector {
    let t = 1.0 / 3f64.sqrt();
    let mut amps = [0.0; 8];
    match variant {
        SymmetricW::Phi1 => {
            amps[0b100] = t;
            amps[0b010] = t;
            amps[0b001] = t;
        }
        SymmetricW::Phi2 => {
            let h = FRAC_1_SQRT_2;
            amps[0b100] = t * h;
            amps[0b101] = t * h;
            amps[0b010] = t * h;
            amps[0b011] = t * h;
            amps[0b000] = t * h;
            amps[0b001] = -t * h;
        }
    }
    StateVector::from_real(3, &amps).expect("normalized by construction")
}

/// |φ⁺⟩ = (|01⟩ + |10⟩)/√2, the carrier of the EPR-based replica.
pub fn make_epr() -> StateVector {
    StateVector::from_real(2, &[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])
        .expect("normalized by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Z,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoyKind {
    Zero,
    One,
    Plus,
    Minus,
}

impl DecoyKind {
    pub const ALL: [DecoyKind; 4] = [
        DecoyKind::Zero,
        DecoyKind::One,
        DecoyKind::Plus,
        DecoyKind::Minus,
    ];

    pub fn basis(self) -> Basis {
        match self {
            DecoyKind::Zero | DecoyKind::One => Basis::Z,
            DecoyKind::Plus | DecoyKind::Minus => Basis::X,
        }
    }

    /// Eigenvalue index within its basis: 0 for |0⟩ and |+⟩, 1 for |1⟩ and |−⟩.
    pub fn value(self) -> u8 {
        match self {
            DecoyKind::Zero | DecoyKind::Plus => 0,
            DecoyKind::One | DecoyKind::Minus => 1,
        }
    }

    pub fn from_basis_value(basis: Basis, value: u8) -> Self {
        match (basis, value & 1) {
            (Basis::Z, 0) => DecoyKind::Zero,
            (Basis::Z, _) => DecoyKind::One,
            (Basis::X, 0) => DecoyKind::Plus,
            (Basis::X, _) => DecoyKind::Minus,
        }
    }
}

pub fn make_decoy(kind: DecoyKind) -> StateVector {
    let h = FRAC_1_SQRT_2;
    let amps = match kind {
        DecoyKind::Zero => [1.0, 0.0],
        DecoyKind::One => [0.0, 1.0],
        DecoyKind::Plus => [h, h],
        DecoyKind::Minus => [h, -h],
    };
    StateVector::from_real(1, &amps).expect("normalized by construction")
}

/// Per-index entangled resource a party prepares in Step 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialKind {
    #[serde(rename = "W1")]
    W1,
    #[serde(rename = "W1'")]
    W1Prime,
    #[serde(rename = "phi1")]
    Phi1,
    #[serde(rename = "phi2")]
    Phi2,
    #[serde(rename = "EPR")]
    Epr,
}

impl fmt::Display for InitialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialKind::W1 => "W1",
            InitialKind::W1Prime => "W1'",
            InitialKind::Phi1 => "phi1",
            InitialKind::Phi2 => "phi2",
            InitialKind::Epr => "EPR",
        })
    }
}

impl InitialKind {
    pub fn prepare(self) -> StateVector {
        match self {
            InitialKind::W1 => make_w1(),
            InitialKind::W1Prime => make_w1_prime(),
            InitialKind::Phi1 => make_symmetric_w(SymmetricW::Phi1),
            InitialKind::Phi2 => make_symmetric_w(SymmetricW::Phi2),
            InitialKind::Epr => make_epr(),
        }
    }

    pub fn num_qubits(self) -> usize {
        match self {
            InitialKind::Epr => 2,
            _ => 3,
        }
    }

    /// The particle sent to the other participant (0-based).
    pub fn travel_qubit(self) -> usize {
        self.num_qubits() - 1
    }

    /// Particles kept by the preparer (0-based).
    pub fn retained_qubits(self) -> &'static [usize] {
        match self {
            InitialKind::Epr => &[0],
            _ => &[0, 1],
        }
    }

    /// Whether the receiver must apply H to the travel particle once the kind is announced.
    pub fn needs_hadamard(self) -> bool {
        matches!(self, InitialKind::W1Prime | InitialKind::Phi2)
    }

    /// One-bit public announcement code.
    pub fn announcement_bit(self) -> bool {
        self.needs_hadamard()
    }
}

/// Applies `gate` to the travel particle when `bit` is set.
pub fn encode_on(
    state: &StateVector,
    travel: usize,
    bit: bool,
    gate: &Gate,
) -> Result<StateVector, QsimError> {
    if bit {
        state.apply_gate(gate, travel)
    } else {
        Ok(state.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{fidelity, DensityMatrix};
    use std::f64::consts::PI;

    fn ket(n: usize, terms: &[(usize, f64)]) -> StateVector {
        let mut amps = vec![0.0; 1 << n];
        for &(i, a) in terms {
            amps[i] += a;
        }
        StateVector::from_real(n, &amps).unwrap()
    }

    #[test]
    fn w1_amplitudes() {
        let w = make_w1();
        for (i, a) in w.amplitudes().iter().enumerate() {
            let expected = match i {
                0b100 | 0b010 => 0.5,
                0b001 => SQRT_2 / 2.0,
                _ => 0.0,
            };
            assert!((a.re - expected).abs() < 1e-15 && a.im == 0.0, "index {i}");
        }
    }

    #[test]
    fn wn_special_cases() {
        let w0 = make_wn(WStateParams::new(0.0)).unwrap();
        let expected = ket(3, &[(0b100, FRAC_1_SQRT_2), (0b001, FRAC_1_SQRT_2)]);
        assert!(w0.max_abs_diff(&expected) < 1e-15);

        let wpi = make_wn(WStateParams {
            n: 1.0,
            gamma: PI,
            delta: 0.0,
        })
        .unwrap();
        let expected = ket(3, &[(0b100, 0.5), (0b010, -0.5), (0b001, SQRT_2 / 2.0)]);
        assert!(wpi.max_abs_diff(&expected) < 1e-15);

        assert!(make_wn(WStateParams::new(-0.1)).is_err());
        assert!(make_wn(WStateParams::new(f64::NAN)).is_err());
    }

    #[test]
    fn w1_prime_is_hadamard_of_w1_and_back() {
        let h = Gate::h();
        let w1 = make_w1();
        let w1p = make_w1_prime();
        assert!(w1.apply_gate(&h, 2).unwrap().max_abs_diff(&w1p) < 1e-15);
        assert!(w1p.apply_gate(&h, 2).unwrap().max_abs_diff(&w1) < 1e-15);
        // ⟨W1|W1′⟩ term by term: |100⟩ ½·½/√2, |010⟩ ½·½/√2, |001⟩ (√2/2)·(−½).
        // The two cancel, so the states are orthogonal.
        let by_hand: f64 = 0.25 / SQRT_2 + 0.25 / SQRT_2 - SQRT_2 / 4.0;
        assert!(by_hand.abs() < 1e-15);
        assert!((fidelity(&w1, &w1p).unwrap() - by_hand * by_hand).abs() < 1e-15);
    }

    #[test]
    fn symmetric_w_relations() {
        let p1 = make_symmetric_w(SymmetricW::Phi1);
        let p2 = make_symmetric_w(SymmetricW::Phi2);
        assert!(p1.apply_gate(&Gate::h(), 2).unwrap().max_abs_diff(&p2) < 1e-15);
        let marg = DensityMatrix::from_pure(&p1).partial_trace(&[2]).unwrap();
        assert!((marg.entry(0, 0).re - 2.0 / 3.0).abs() < 1e-12);
        assert!((marg.entry(1, 1).re - 1.0 / 3.0).abs() < 1e-12);
        // (1 + 1 + √2)² / 12
        let expected = (2.0 + SQRT_2).powi(2) / 12.0;
        assert!((fidelity(&p1, &make_w1()).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.9714).abs() < 1e-4);
    }

    #[test]
    fn epr_properties() {
        let e = make_epr();
        let a = e.amplitudes();
        assert_eq!(a[0].re, 0.0);
        assert!((a[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a[2].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(a[3].re, 0.0);
        let marg = DensityMatrix::from_pure(&e).partial_trace(&[0]).unwrap();
        assert!((marg.entry(0, 0).re - 0.5).abs() < 1e-12);
        let probs = e.probabilities(&[0, 1]).unwrap();
        assert_eq!(probs[0b00], 0.0);
        assert_eq!(probs[0b11], 0.0);
    }

    #[test]
    fn decoys() {
        let plus = make_decoy(DecoyKind::Plus);
        assert!((plus.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((plus.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(
            make_decoy(DecoyKind::Zero).probabilities(&[0]).unwrap(),
            vec![1.0, 0.0]
        );
        let p = plus.probabilities(&[0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        for k in DecoyKind::ALL {
            assert_eq!(DecoyKind::from_basis_value(k.basis(), k.value()), k);
        }
    }

    #[test]
    fn all_constructors_normalized() {
        let mut all = vec![make_w1(), make_w1_prime(), make_epr()];
        all.push(make_symmetric_w(SymmetricW::Phi1));
        all.push(make_symmetric_w(SymmetricW::Phi2));
        all.extend(DecoyKind::ALL.iter().map(|&k| make_decoy(k)));
        for s in all {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
