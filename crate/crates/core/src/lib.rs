//! Exact state-vector simulation of controlled teleportation and the
//! control-power analysis built on it.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod catalog;
pub mod channels;
pub mod error;
pub mod measure;
pub mod protocol;
pub mod qstate;

pub use analysis::{
    classical_limit, min_control_power, AnalysisReport, InputMode, McConfig, McEstimate, Method,
    PauliMixture, SampleRunner, Sequential,
};
pub use catalog::{Scheme, SchemeId};
pub use channels::{PartyMap, Pe4Params, YangVariant};
pub use error::{Error, Result};
pub use measure::MeasurementBasis;
pub use protocol::{ProtocolSpec, ReferenceFrame};
pub use qstate::{DensityMatrix, Pauli, PauliString, PureState};
