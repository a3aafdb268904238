use thiserror::Error;

/// Errors from the statevector / density-matrix engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("control and target must differ (both {0})")]
    ControlIsTarget(usize),
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude vector length {len} is not 2^{num_qubits}")]
    BadLength { len: usize, num_qubits: usize },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("partial trace needs at least one kept qubit")]
    EmptyKeep,
    #[error("register must hold at least one qubit")]
    NoQubits,
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid W-state parameters: {0}")]
    InvalidParams(String),
}

/// Errors from key handling and classical framing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CryptoError {
    #[error("key length must be positive")]
    EmptyKey,
    #[error(
        "key {pair} exhausted: need {needed} bits at offset {offset}, only {available} provisioned"
    )]
    KeyExhausted {
        pair: String,
        needed: usize,
        offset: usize,
        available: usize,
    },
    #[error("message is not encrypted under key {0}")]
    WrongKey(String),
    #[error("key region [{offset}, {end}) was never consumed by an encryption")]
    UnconsumedRegion { offset: usize, end: usize },
    #[error("position {position} outside domain of size {domain}")]
    PositionOutOfRange { position: usize, domain: usize },
    #[error("positions must be strictly increasing")]
    NotIncreasing,
    #[error("too many positions for a 16-bit count: {0}")]
    TooManyPositions(usize),
    #[error("malformed position encoding: {0}")]
    MalformedPositions(String),
}

/// Errors raised while running the comparison protocol.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("protocol integrity violated: {0}")]
    Integrity(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Crypto(#[from] CryptoError),
}
