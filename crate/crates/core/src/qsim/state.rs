use super::gate::Gate;
use super::NORM_TOLERANCE;
use crate::error::QsimError;
use num_complex::Complex64;
use rand::Rng;

/// Dense pure state over `num_qubits` qubits.
///
/// Qubit `q` (0-based) is the `q`-th symbol of the ket read left to right, so
/// basis index `i` has qubit `q` in state `(i >> (num_qubits - 1 - q)) & 1`.
/// Reports number qubits from 1 to match particle labels.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Outcome of a Z-basis measurement of a subset of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub qubit_indices: Vec<usize>,
    pub outcomes: Vec<u8>,
    pub post_state: StateVector,
}

impl StateVector {
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self, QsimError> {
        if num_qubits == 0 {
            return Err(QsimError::NoQubits);
        }
        if amplitudes.len() != 1 << num_qubits {
            return Err(QsimError::BadLength {
                len: amplitudes.len(),
                num_qubits,
            });
        }
        let state = Self {
            num_qubits,
            amplitudes,
        };
        let n2 = state.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized(n2));
        }
        Ok(state)
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(num_qubits: usize, amplitudes: &[f64]) -> Result<Self, QsimError> {
        Self::new(
            num_qubits,
            amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        )
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QsimError> {
        if num_qubits == 0 {
            return Err(QsimError::NoQubits);
        }
        let dim = 1 << num_qubits;
        if index >= dim {
            return Err(QsimError::BadLength {
                len: index,
                num_qubits,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bit string such as `"101"`.
    pub fn from_bitstring(bits: &str) -> Result<Self, QsimError> {
        let n = bits.len();
        let index = usize::from_str_radix(bits, 2).map_err(|_| QsimError::BadLength {
            len: n,
            num_qubits: n,
        })?;
        Self::basis(n, index)
    }

    pub fn zero(num_qubits: usize) -> Result<Self, QsimError> {
        Self::basis(num_qubits, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Value of `qubit` in basis index `index`.
    #[inline]
    pub fn bit_of(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.num_qubits - 1 - qubit)) & 1
    }

    fn check_qubit(&self, q: usize) -> Result<(), QsimError> {
        if q >= self.num_qubits {
            Err(QsimError::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn check_distinct(&self, qubits: &[usize]) -> Result<(), QsimError> {
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return Err(QsimError::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    pub fn apply_gate(&self, gate: &Gate, target: usize) -> Result<Self, QsimError> {
        self.check_qubit(target)?;
        Ok(self.apply_masked(gate, target, |_| true))
    }

    /// Applies `gate` to `target` on the branch where `control` reads `control_value`.
    /// `control_value = 0` gives an anti-controlled gate.
    pub fn apply_controlled(
        &self,
        gate: &Gate,
        control: usize,
        control_value: u8,
        target: usize,
    ) -> Result<Self, QsimError> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(QsimError::ControlIsTarget(control));
        }
        let want = usize::from(control_value & 1);
        Ok(self.apply_masked(gate, target, |i| self.bit_of(i, control) == want))
    }

    fn apply_masked(&self, gate: &Gate, target: usize, active: impl Fn(usize) -> bool) -> Self {
        let stride = 1 << (self.num_qubits - 1 - target);
        let mut out = self.amplitudes.clone();
        let m = &gate.matrix;
        for i0 in 0..self.dim() {
            if i0 & stride != 0 || !active(i0) {
                continue;
            }
            let i1 = i0 | stride;
            let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i1]);
            out[i0] = m[0][0] * a0 + m[0][1] * a1;
            out[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
        Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        }
    }

    /// Born probabilities over all outcome patterns of `qubits`. The first listed
    /// qubit is the most significant bit of the pattern index.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>, QsimError> {
        self.check_distinct(qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[self.pattern_of(i, qubits)] += a.norm_sqr();
        }
        Ok(probs)
    }

    fn pattern_of(&self, index: usize, qubits: &[usize]) -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | self.bit_of(index, q))
    }

    /// Projects onto `outcomes` for `qubits`, returning the branch probability and the
    /// renormalized post-measurement state, or `None` for a zero-probability branch.
    pub fn project(
        &self,
        qubits: &[usize],
        outcomes: &[u8],
    ) -> Result<Option<(f64, StateVector)>, QsimError> {
        self.check_distinct(qubits)?;
        assert_eq!(qubits.len(), outcomes.len(), "one outcome per qubit");
        let pattern = outcomes
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        let mut p = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if self.pattern_of(i, qubits) == pattern {
                amps[i] = *a;
                p += a.norm_sqr();
            }
        }
        if p <= 1e-300 {
            return Ok(None);
        }
        let scale = 1.0 / p.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok(Some((
            p,
            StateVector {
                num_qubits: self.num_qubits,
                amplitudes: amps,
            },
        )))
    }

    /// Samples a Z-basis measurement of `qubits` and collapses the state.
    pub fn measure_z<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<MeasurementRecord, QsimError> {
        let probs = self.probabilities(qubits)?;
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = None;
        let mut last_nonzero = 0;
        for (pattern, p) in probs.iter().enumerate() {
            if *p > 0.0 {
                last_nonzero = pattern;
            }
            acc += p;
            if u < acc && *p > 0.0 {
                chosen = Some(pattern);
                break;
            }
        }
        // Rounding can leave `acc` a hair below 1.
        let pattern = chosen.unwrap_or(last_nonzero);
        let k = qubits.len();
        let outcomes: Vec<u8> = (0..k)
            .map(|j| ((pattern >> (k - 1 - j)) & 1) as u8)
            .collect();
        let (_, post_state) = self
            .project(qubits, &outcomes)?
            .expect("sampled branch has nonzero probability");
        Ok(MeasurementRecord {
            qubit_indices: qubits.to_vec(),
            outcomes,
            post_state,
        })
    }

    /// Tensor product `self ⊗ other`; `self`'s qubits come first.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes: amps,
        }
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QsimError> {
        if self.num_qubits != other.num_qubits {
            return Err(QsimError::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entry-wise amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// |⟨a|b⟩|²
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, QsimError> {
    Ok(a.inner(b)?.norm_sqr())
}
