//! Symbolic and numerical checks for two-qudit third-level gates over `Z_d`.

#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod gatealg;
pub mod modring;
pub mod polysys;
pub mod report;
pub mod semicliff;
pub mod statevector;
pub mod symplectic;

pub use error::{Error, Result};
