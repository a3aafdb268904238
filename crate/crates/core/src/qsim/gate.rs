use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateName {
    I,
    X,
    /// iσy = |0⟩⟨1| − |1⟩⟨0|, a real bit flip that also flips |±⟩.
    #[serde(rename = "iY")]
    ISY,
    Z,
    H,
    /// Phase gate, only used by the stabilizer enumeration.
    S,
    /// Conjugate transpose of some other gate; produced by [`Gate::adjoint`].
    Dagger,
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateName::I => "I",
            GateName::X => "X",
            GateName::ISY => "iY",
            GateName::Z => "Z",
            GateName::H => "H",
            GateName::S => "S",
            GateName::Dagger => "dagger",
        };
        f.write_str(s)
    }
}

/// A single-qubit unitary. `matrix[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub name: GateName,
    pub matrix: [[Complex64; 2]; 2],
}

impl Gate {
    pub fn identity() -> Self {
        Self {
            name: GateName::I,
            matrix: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// σx = |0⟩⟨1| + |1⟩⟨0|
    pub fn x() -> Self {
        Self {
            name: GateName::X,
            matrix: [[ZERO, ONE], [ONE, ZERO]],
        }
    }

    /// iσy = |0⟩⟨1| − |1⟩⟨0|
    pub fn isy() -> Self {
        Self {
            name: GateName::ISY,
            matrix: [[ZERO, ONE], [-ONE, ZERO]],
        }
    }

    pub fn z() -> Self {
        Self {
            name: GateName::Z,
            matrix: [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    pub fn h() -> Self {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            name: GateName::H,
            matrix: [[r, r], [r, -r]],
        }
    }

    pub fn s() -> Self {
        Self {
            name: GateName::S,
            matrix: [[ONE, ZERO], [ZERO, Complex64::new(0.0, 1.0)]],
        }
    }

    pub fn by_name(name: GateName) -> Option<Self> {
        match name {
            GateName::I => Some(Self::identity()),
            GateName::X => Some(Self::x()),
            GateName::ISY => Some(Self::isy()),
            GateName::Z => Some(Self::z()),
            GateName::H => Some(Self::h()),
            GateName::S => Some(Self::s()),
            GateName::Dagger => None,
        }
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.matrix;
        let matrix = [
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ];
        // I, X, Z, H are Hermitian; keep their names.
        let name = match self.name {
            GateName::I | GateName::X | GateName::Z | GateName::H => self.name,
            _ => GateName::Dagger,
        };
        Self { name, matrix }
    }

    /// Largest entry-wise deviation of `M†M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let a = self.adjoint();
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = ZERO;
                for k in 0..2 {
                    acc += a.matrix[r][k] * self.matrix[k][c];
                }
                let expected = if r == c { ONE } else { ZERO };
                worst = worst.max((acc - expected).norm());
            }
        }
        worst
    }
}
