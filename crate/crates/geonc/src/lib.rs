//! Std companion to `geonc-core`: the geo-tagged link-statistics store,
//! packet and scenario file formats, and shared error type for the CLI.

pub mod config;
pub mod error;
pub mod geo;
pub mod packet;

pub use error::AppError;
