use thiserror::Error;

use crate::state::QubitLabel;

/// Errors raised by state construction, gate application, measurement and
/// the protocol layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("qubit label '{0}' already present in state")]
    LabelCollision(QubitLabel),

    #[error("unsupported register size: {requested} qubits (supported: 1..=4)")]
    CapacityExceeded { requested: usize },

    #[error("qubit label '{0}' not present in state")]
    UnknownLabel(QubitLabel),

    #[error("gate {gate} acts on {expected} qubit(s), got {got} target(s)")]
    ArityMismatch {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("state is degenerate: no measurement branch carries probability mass")]
    DegenerateState,

    #[error("qubit counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NormalizationError { norm_sqr: f64 },

    #[error("amplitude is not finite")]
    NonFiniteAmplitude,

    #[error("matrix is not unitary: max |U†U - I| entry is {deviation}")]
    NonUnitary { deviation: f64 },

    #[error("expected a two-qubit pair labeled (A, B)")]
    LabelMismatch,

    #[error("message bit must be 0 or 1, got {value}")]
    InvalidBit { value: u8 },

    #[error("EPR pair has not passed channel verification")]
    ChannelNotVerified,

    #[error("not enough EPR pairs: have {have}, need {need}")]
    InsufficientPairs { have: usize, need: usize },

    #[error("input collection is empty")]
    EmptyInput,

    #[error("sample fraction must lie strictly between 0 and 1, got {value}")]
    InvalidFraction { value: f64 },

    #[error("no analytic detection probability for this eavesdropper model")]
    UnsupportedModel,

    #[error("transcript line {line}: {reason}")]
    TranscriptParse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, QsimError>;
