use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which range hypothesis of the block pseudoinverse formula failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// R(C*) ⊆ R((T/)*)
    RangeCStarInSchurStar,
    /// R(B) ⊆ R(T/)
    RangeBInSchur,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::RangeCStarInSchurStar => f.write_str("R(C*) ⊆ R((T/)*)"),
            Hypothesis::RangeBInSchur => f.write_str("R(B) ⊆ R(T/)"),
        }
    }
}

/// Defects are reported in `f64` regardless of the working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("range inclusion failed: ‖D·D⁺C − C‖ = {residual:e}")]
    RangeInclusionFailed { residual: f64 },

    #[error(
        "operator is not complementable (R(C) ⊆ R(D) defect {rc_defect:e}, \
         R(B*) ⊆ R(D*) defect {rbstar_defect:e})"
    )]
    NotComplementable { rc_defect: f64, rbstar_defect: f64 },

    #[error("Schur complement is not well defined: N(D) ⊄ N(B) (defect {defect:e})")]
    IllPosedSchur { defect: f64 },

    #[error("hypothesis {which} failed (defect {defect:e})")]
    HypothesisFailed { which: Hypothesis, defect: f64 },

    #[error("unknown example '{0}'")]
    UnknownExample(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
