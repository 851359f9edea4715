//! Logarithmic derivatives and quantum Fisher information for
//! one-parameter families of finite-dimensional density matrices.
//!
//! The pipeline is `StateFamily → SpectralBranches → LdOperator → QFI`:
//! a family yields `ρ_θ` and `ρ'_θ`, [`family::spectral_branches`] splits
//! them into eigenvalue clusters with derivatives, [`ldops`] builds the
//! four logarithmic derivatives as eigenbasis kernels, and [`qfi`] turns
//! them into informations and the identities they satisfy.
#![no_std]

extern crate alloc;

pub mod error;
pub mod family;
pub mod ldops;
pub mod linalg;
pub mod qfi;
pub mod zoo;

pub use error::{Error, Result};
pub use family::{DensityMatrix, DerivativeMode, Interval, SpectralBranches, StateFamily};
pub use ldops::{LdOperator, Model};
pub use linalg::{ComplexMatrix, C64};
pub use qfi::{Observable, QfiReport};
