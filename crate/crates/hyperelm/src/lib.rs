//! Command-line front end, file formats and benchmark runners built on
//! `hyperelm-core`.

pub mod cli;
pub mod data;
pub mod error;
pub mod experiments;
pub mod persist;
pub mod records;

pub use error::{Error, Result};
