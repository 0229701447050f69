//! Simulation of covert fraction estimation on noisy networks.
//!
//! Rebels hidden among obedient citizens try to learn whether they are many
//! or few by exchanging Gaussian-noised signals, while a police that taps the
//! channel tries to identify them. The crate provides the network generators,
//! the channel, the rebel and police protocols, closed-form risk analysis and
//! a harness that runs experiments and acceptance suites.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod error;
pub mod graph;
pub mod harness;
pub mod police_protocols;
pub mod population;
pub mod rebel_protocols;
pub mod rng;
pub mod round;
pub mod undercover_attacks;

pub use error::{Error, Result};
