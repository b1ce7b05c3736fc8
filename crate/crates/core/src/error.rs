use thiserror::Error;

/// Text input rejected at a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} (at offset {position})")]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, position: usize) -> Self {
        Self {
            message: message.into(),
            position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("sequence window [{lo}, {hi}] too small for shifts [{min_shift}, {max_shift}]")]
    WindowTooSmall {
        lo: i64,
        hi: i64,
        min_shift: i64,
        max_shift: i64,
    },
    #[error("sequence window is not contiguous")]
    NonContiguous,
    #[error("symbol constant calibration failed: {0}")]
    Calibration(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("generator index {index} out of range for genus {genus}")]
    IndexOutOfRange { index: usize, genus: usize },
    #[error("determinant {det} is not 1 within tolerance")]
    NotUnimodular { det: String },
    #[error("occurrence {occ} of generator {gen} not found (word has {count})")]
    OccurrenceNotFound { gen: usize, occ: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("generator {gen} does not occur in the word")]
    NoOccurrence { gen: usize },
    #[error("occurrence index {occ} out of range ({count} occurrences)")]
    OccurrenceOutOfRange { occ: usize, count: usize },
    #[error("crossing order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("no calibration cases supplied")]
    NoCases,
    #[error("every calibration case has vanishing f'")]
    Degenerate,
    #[error("no candidate constant fits the calibration cases:\n{table}")]
    NoFit { table: String },
}
