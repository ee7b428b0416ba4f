//! Brute-force ground truth: allocation enumeration, welfare optima, Pareto
//! dominance, exhaustive deviation search and the fixed-size replays.

mod csp;
mod deviation;
mod enumerate;
mod replay;
mod table;

pub use csp::{BinaryCsp, CspOutcome, CspStats};
pub use deviation::{
    verify_gspie, verify_spie, DeviationReport, DeviationVerdict, DeviationWitness, Others,
    SearchBounds,
};
pub use enumerate::{allocation_at, allocation_count, enumerate_allocations, AllocationIter};
pub use replay::{
    replay, Certificate, MixedEqRow, PickingRow, Refutation, ReplayCase, ReplayReport,
    ReplayVerdict, Theorem2Config, Theorem2Slice,
};
pub use table::{dominates, is_pareto_optimal, opt_welfare, UtilityTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration of {count} cases exceeds the cap of {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },
    #[error(transparent)]
    Mechanism(#[from] crate::mechanisms::MechanismError),
    #[error(transparent)]
    Property(#[from] crate::properties::PropertyError),
    #[error("{0}")]
    Internal(String),
}
