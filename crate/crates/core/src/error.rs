use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("invalid interval: lo={lo} must be < hi={hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("singular matrix (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("inconsistent decoy observations: {0}")]
    InconsistentObservation(String),

    #[error("subset '{subset}' has {count} records, fewer than the minimum {minimum}")]
    EmptySubset {
        subset: &'static str,
        count: usize,
        minimum: usize,
    },

    #[error("no conclusive events in {pulses} pulses")]
    ZeroConclusive { pulses: usize },

    #[error("key has {key} bits but message has {message}")]
    KeyTooShort { key: usize, message: usize },

    #[error("unknown preset '{name}'; available: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("never secure: rate {rate:e} at zero length is not above floor {floor:e}")]
    NeverSecure { rate: f64, floor: f64 },

    #[error("validation failed: {}", format_fields(.0))]
    Validation(Vec<FieldError>),
}

/// A validation failure tied to a dotted field path such as
/// `hardware.detector.efficiency`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

fn format_fields(errors: &[FieldError]) -> String {
    errors
        .iter()
        .map(|e| format!("{}: {}", e.field, e.message))
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
