//! Quantum discord of two-qubit X states, two-site discord scaling in
//! free-fermion and XXZ spin chains, and thermal area-law checks.

pub mod chain;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod oracle;
pub mod quadrature;
pub mod real;
pub mod scaling;
pub mod thermal;
pub mod xstate;

pub use error::{Error, Result};
