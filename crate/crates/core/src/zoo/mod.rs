//! Reference families with closed-form informations.

mod coherent;
mod counterexample;
mod geometric;
mod random;
mod two_level;

pub use coherent::*;
pub use counterexample::*;
pub use geometric::*;
pub use random::*;
pub use two_level::*;
