//! File formats, synthetic-scenario generation, and the command-line
//! frontend for the `rplkit-core` estimator.

pub mod cli;
pub mod error;
pub mod geojson;
pub mod ingest;
pub mod manifest;
pub mod report;
pub mod synth;

pub use error::ToolError;
