//! Randomized allocation mechanisms for indivisible chores and mixed items, in
//! exact rational arithmetic.
//!
//! - [`mechanisms`]: RandChore, RandMixed, sequential picking and a manipulable
//!   control, each with its exact output lottery, closed-form expected utilities
//!   and seeded sampling.
//! - [`properties`]: EF/EF1, EQ/EQ1, PROP/PROP1, UWM and welfare, ex ante and ex post.
//! - [`oracle`]: exhaustive enumeration for Pareto optimality, welfare optima,
//!   strategyproofness checks and the fixed impossibility replays.
//! - [`format`]: the canonical text format.
//!
//! Data-parallel loops run on rayon with the default `parallel` feature; pass
//! [`Limits::sequential`] or build without the feature for the plain path. Both
//! produce identical results.

pub mod allocation;
pub mod exec;
pub mod format;
pub mod instance;
pub mod mechanisms;
pub mod oracle;
pub mod properties;
pub mod rational;

pub use allocation::{
    implemented_fraction, AllocationError, DeterministicAllocation, FractionalAllocation,
    RandomizedAllocation, SupportAtom,
};
pub use exec::{Execution, Limits};
pub use instance::{
    bundle_value, validate_instance, validate_profile, Instance, InstanceError, InstanceKind,
    InstanceSpec, ItemSpec, ProfileError, ValuationProfile,
};
pub use mechanisms::{MechanismError, MechanismId, MechanismOutput, PartitionTrace};
pub use oracle::OracleError;
pub use properties::{FairnessNotion, PropertyError, Verdict, Witness};
pub use rational::Rational;
