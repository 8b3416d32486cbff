use thiserror::Error;

use crate::model::CodonId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("codon middle ({x}, {y}) lies outside the container")]
    OutOfBounds { x: f64, y: f64 },

    #[error("numeric instability at step {step}: codon {codon} has a non-finite {quantity}")]
    NumericInstability {
        step: u64,
        codon: CodonId,
        quantity: &'static str,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("invalid bit string: {0}")]
    InvalidBits(#[from] BitsError),

    #[error("red-blue links form a cycle through codon {0}")]
    StrandCycle(CodonId),

    #[error("codon {0} does not exist")]
    UnknownCodon(CodonId),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("character {found:?} at position {position} is not 0 or 1")]
pub struct BitsError {
    pub position: usize,
    pub found: char,
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
