use crate::error::ProtocolError;
use crate::qsim::Gate;
use crate::states::InitialKind;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Asymmetric W states, encrypted mix-up exchange.
    Aw,
    /// Symmetric W states, plaintext mix-up exchange.
    Lwj11,
    /// EPR pairs, plaintext mix-up exchange.
    Lwg12,
}

impl Variant {
    /// Resources a party draws from when preparing each index.
    pub fn kinds(self) -> &'static [InitialKind] {
        match self {
            Variant::Aw => &[InitialKind::W1, InitialKind::W1Prime],
            Variant::Lwj11 => &[InitialKind::Phi1, InitialKind::Phi2],
            Variant::Lwg12 => &[InitialKind::Epr],
        }
    }

    /// Whether C′_A, C′_B and S_q travel in the clear.
    pub fn plaintext_mix(self) -> bool {
        !matches!(self, Variant::Aw)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Aw => "aw",
            Variant::Lwj11 => "lwj11",
            Variant::Lwg12 => "lwg12",
        })
    }
}

/// Operator applied to the travel particle when a secret bit is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Encoding {
    /// σx; flips Z-basis values but leaves |±⟩ alone (up to sign).
    #[serde(rename = "sx")]
    SigmaX,
    /// iσy; flips both Z- and X-basis values.
    #[serde(rename = "isy")]
    ISigmaY,
}

impl Encoding {
    pub fn gate(self) -> Gate {
        match self {
            Encoding::SigmaX => Gate::x(),
            Encoding::ISigmaY => Gate::isy(),
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::SigmaX => "sx",
            Encoding::ISigmaY => "isy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub variant: Variant,
    /// N, the bit length of each secret.
    pub bits: usize,
    /// L, the length of each mix-up sequence.
    pub mix: usize,
    /// Decoy photons inserted per direction.
    pub decoys: usize,
    pub encoding: Encoding,
    /// Abort when a direction's decoy error rate exceeds this.
    pub error_threshold: f64,
    pub seed: u64,
    /// Permits `mix = 0`, which removes TP masking entirely. Test use only.
    #[serde(default)]
    pub allow_empty_mix: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Aw,
            bits: 8,
            mix: 8,
            decoys: 8,
            encoding: Encoding::ISigmaY,
            error_threshold: 0.0,
            seed: 0,
            allow_empty_mix: false,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.bits == 0 {
            return Err(ProtocolError::Config(
                "bit length N must be at least 1".into(),
            ));
        }
        if self.mix == 0 && !self.allow_empty_mix {
            return Err(ProtocolError::Config(
                "mix length L must be at least 1".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.error_threshold) {
            return Err(ProtocolError::Config(format!(
                "error threshold must lie in [0, 1), got {}",
                self.error_threshold
            )));
        }
        if self.bits + self.mix > u16::MAX as usize {
            return Err(ProtocolError::Config(
                "N + L too large for position encoding".into(),
            ));
        }
        if self.bits + self.decoys > u16::MAX as usize {
            return Err(ProtocolError::Config(
                "N + decoy count too large for position encoding".into(),
            ));
        }
        Ok(())
    }
}
