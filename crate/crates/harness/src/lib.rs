//! Command-line plumbing around `lefcorr-core`: single verifications,
//! seeded sweeps and report serialization.

pub mod config;
pub mod emit;
pub mod rng;
pub mod single;
pub mod sweep;

pub use config::{ConfigError, Cp1Family, SweepConfig, SweepModel};
pub use emit::{emit_report, Format};
pub use sweep::{integral_audit, sweep, AuditSummary, SweepSummary};
