use super::state::StateVector;
use super::NORM_TOLERANCE;
use crate::error::QsimError;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Density operator on `num_qubits` qubits, same qubit ordering as [`StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps `entries` after checking Hermiticity, unit trace and positivity.
    pub fn new(num_qubits: usize, entries: DMatrix<Complex64>) -> Result<Self, QsimError> {
        let dim = 1usize << num_qubits;
        if num_qubits == 0 {
            return Err(QsimError::NoQubits);
        }
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(QsimError::BadLength {
                len: entries.nrows(),
                num_qubits,
            });
        }
        let rho = Self {
            num_qubits,
            entries,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let a = state.amplitudes();
        let entries = DMatrix::from_fn(dim, dim, |r, c| a[r] * a[c].conj());
        Self {
            num_qubits: state.num_qubits(),
            entries,
        }
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self, QsimError> {
        let dim = diagonal.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(QsimError::InvalidDensity(format!(
                "diagonal length {dim} is not a power of two"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        let entries = DMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                Complex64::new(diagonal[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(num_qubits, entries)
    }

    /// Maximally mixed state on `num_qubits` qubits.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self, QsimError> {
        let dim = 1usize << num_qubits;
        Self::from_diagonal(&vec![1.0 / dim as f64; dim])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), QsimError> {
        let herm = self.hermiticity_error();
        if herm > NORM_TOLERANCE {
            return Err(QsimError::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > NORM_TOLERANCE || tr.im.abs() > NORM_TOLERANCE {
            return Err(QsimError::InvalidDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -NORM_TOLERANCE {
            return Err(QsimError::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// Reduced state on `keep` (output qubits ordered as listed in `keep`).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QsimError> {
        if keep.is_empty() {
            return Err(QsimError::EmptyKeep);
        }
        let n = self.num_qubits;
        for (i, &q) in keep.iter().enumerate() {
            if q >= n {
                return Err(QsimError::QubitOutOfRange {
                    index: q,
                    num_qubits: n,
                });
            }
            if keep[..i].contains(&q) {
                return Err(QsimError::DuplicateQubit(q));
            }
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let out_dim = 1usize << k;
        let env_dim = 1usize << traced.len();

        // Scatter (kept pattern, traced pattern) into a full basis index.
        let full_index = |kept: usize, env: usize| -> usize {
            let mut idx = 0usize;
            for (j, &q) in keep.iter().enumerate() {
                let bit = (kept >> (k - 1 - j)) & 1;
                idx |= bit << (n - 1 - q);
            }
            for (j, &q) in traced.iter().enumerate() {
                let bit = (env >> (traced.len() - 1 - j)) & 1;
                idx |= bit << (n - 1 - q);
            }
            idx
        };

        let entries = DMatrix::from_fn(out_dim, out_dim, |r, c| {
            (0..env_dim)
                .map(|e| self.entries[(full_index(r, e), full_index(c, e))])
                .sum()
        });
        Ok(DensityMatrix {
            num_qubits: k,
            entries,
        })
    }

    /// Rows of `[re, im]` pairs, for reports.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|r| {
                (0..self.dim())
                    .map(|c| {
                        let z = self.entries[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DensityMatrix", 2)?;
        st.serialize_field("num_qubits", &self.num_qubits)?;
        st.serialize_field("entries", &self.to_rows())?;
        st.end()
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    // Symmetrize first so round-off in the input cannot break the solver's assumptions.
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

/// Trace norm ‖ρ0 − ρ1‖₁, the sum of absolute eigenvalues of the Hermitian difference.
pub fn trace_norm_difference(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64, QsimError> {
    if rho0.num_qubits != rho1.num_qubits {
        return Err(QsimError::DimensionMismatch {
            left: rho0.num_qubits,
            right: rho1.num_qubits,
        });
    }
    let diff = &rho0.entries - &rho1.entries;
    Ok(hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum())
}

/// Optimal probability of telling `rho0` from `rho1` given equal priors:
/// `1/2 + ‖ρ0 − ρ1‖₁ / 4`.
pub fn helstrom(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64, QsimError> {
    Ok(0.5 + 0.25 * trace_norm_difference(rho0, rho1)?)
}
