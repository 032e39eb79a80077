//! Configuration, artifact emission, and the command layer.
//!
//! Submodules: [`config`] resolves settings from defaults, a flat config
//! file, and command-line overrides; [`table`] and [`svg`] write the
//! tabular and graphical artifacts; [`verify`] houses the cross-validation
//! battery; [`commands`] ties everything into the five entry points used
//! by the binary and the examples.

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;
pub mod verify;

pub use commands::{cmd_eigenfunction, cmd_periods, cmd_phase_portrait, cmd_spectrum, cmd_verify};
pub use config::{BaseKind, ConfigOverlay, OutputFormat, RunConfig};
