//! Relaxation-model machinery: the explicit spatially homogeneous solution
//! with its weighted-norm blow-up scans, and the spatially inhomogeneous
//! mild-solution operator with Picard iteration and field-bound reports.

pub mod homogeneous;
pub mod inhomogeneous;

use kinetic_core::CoreError;
use kinetic_families::FamilyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BgkError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("iteration budget exhausted after {0} field evaluations")]
    IterationBudget(usize),
    #[error("time {t} beyond the configured horizon t0 = {t0}")]
    TimeHorizon { t: f64, t0: f64 },
}

pub type Result<T> = std::result::Result<T, BgkError>;
