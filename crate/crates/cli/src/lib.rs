//! Command-line front end for `qfi-core`: configured sweeps, verification
//! suites and single-point inspection.

pub mod config;
pub mod families;
pub mod ld;
pub mod sweep;
pub mod verify;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const RUNTIME: u8 = 3;
}
