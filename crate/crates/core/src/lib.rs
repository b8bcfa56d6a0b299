//! Stabilizer-based entanglement distillation for qudits of prime dimension.
//!
//! The crate is organised bottom-up: exact field and phase arithmetic
//! ([`field`]), Weyl error labels and their dense matrices ([`weyl`]),
//! single-generator stabilizers on two copies ([`stabilizer`]), their
//! encodings ([`encoding`]), Bell-diagonal and dense states ([`states`]) and
//! the FIMAX iteration ([`protocol`]). [`sweep`] and [`verify`] drive batch
//! experiments and the invariant suites used by the command-line tool.

pub mod encoding;
pub mod error;
pub mod field;
pub mod linalg;
pub mod protocol;
pub mod stabilizer;
pub mod states;
pub mod sweep;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use field::{FieldScalar, PhaseExponent, Prime};
pub use protocol::{
    distill, fimax_select, fimax_step, generic_step, DistillOptions, DistillationRun, FimaxChoice,
    IterationRecord, NonBdsMode,
};
pub use stabilizer::{enumerate_stabilizers, CosetId, ErrorDistribution, Stabilizer};
pub use states::{BdsState, DenseState, State};
pub use weyl::ErrorElement;
