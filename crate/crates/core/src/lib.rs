//! Secret-key-rate lower bounds for discrete-variable quantum key
//! distribution under realistic hardware, with intensity optimization,
//! secure-distance solving, decoy-state estimation, a pulse-level simulator
//! of the quantum stage, and a CLI/HTTP front end.

pub mod cli;
pub mod decoy;
pub mod error;
pub mod hardware;
pub mod numerics;
pub mod rates;
pub mod scenarios;
pub mod service;
pub mod sim;

pub use error::{Error, FieldError, Result};
pub use hardware::{
    ChannelSpec, DetectorSpec, HardwareConfig, LinkQuantities, PhotonSource, ProtocolKind,
    ProtocolSpec, SourceKind,
};
pub use numerics::DistributionVec;
pub use rates::{RateParts, RatePoint};
pub use scenarios::{preset, presets, Scenario, ScenarioPreset, SweepSpec, SweepVariable};
