//! Sequential entanglement witnessing on a single two-qubit state.
//!
//! Observer pairs on the two wings of a shared two-qubit state measure
//! unsharp Pauli observables one after another; each pair evaluates a
//! sharpness-modulated entanglement witness on the state it receives on
//! average from its predecessors. The crate provides:
//!
//! * [`qcore`]: small dense complex linear algebra (2x2 and 4x4), partial
//!   transpose, Jacobi eigensolver, Wootters concurrence.
//! * [`measurement`]: unsharp observables, Lüders updates, robustness of
//!   measurement.
//! * [`witness`]: witness operators in the Pauli basis and their modulation.
//! * [`states`]: the Bell, Werner, colored-noise and non-maximally entangled
//!   pure state families.
//! * [`sequential`]: averaged channels, thresholds and greedy maximal-chain
//!   construction for symmetric and asymmetric observer networks.
//! * [`resource`]: detectability, robustness accounting and the comparison
//!   against non-sequential multi-copy schemes.

pub mod error;
pub mod measurement;
pub mod qcore;
pub mod resource;
pub mod sequential;
pub mod states;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};
pub use measurement::{PointerTradeoff, UnsharpObservable};
pub use qcore::{ComplexMatrix, DensityMatrix, Pauli, C64};
pub use resource::{ComparisonRow, ComparisonTables, DetectabilityReport, RowMode};
pub use sequential::{ChainReport, EpsilonPolicy, ScenarioKind, SharpnessSchedule};
pub use states::{FamilyKind, StateFamily};
pub use witness::WitnessOperator;
