//! Hypercomplex-valued extreme learning machines over arbitrary algebras
//! given by multiplication tables.
//!
//! Everything here works without `std`; only `alloc` is required.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod autoencoder;
pub mod catalog;
pub mod elm;
pub mod error;
pub mod linalg;
pub mod lorenz;
pub mod realification;

pub use algebra::{AlgebraSpec, HNumber};
pub use catalog::{builtin, builtin_by_name, cayley_dickson, AlgebraName};
pub use elm::{ElmConfig, ElmModel};
pub use error::{Error, Result};
pub use linalg::RealMatrix;
pub use realification::HMatrix;
