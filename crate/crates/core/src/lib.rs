//! Exact simulator of the four-witness unentangled verification protocol for
//! frustration-free ground state connectivity.
//!
//! Layers, bottom up:
//! - [`state`]: mixed-radix state vectors, local gates, projections, SWAP test.
//! - [`instance`]: problem instances, validation, energies, built-in fixtures.
//! - [`witness`]: honest and adversarial proof states, the shift-and-gate map.
//! - [`ledger`]: protocol constants in exact rational arithmetic.
//! - [`verifier`]: the eight tests, the protocol round and the product test.
//! - [`harness`]: Monte Carlo runs, the lemma suite and report output.

pub mod error;
pub mod exact;
pub mod harness;
pub mod instance;
pub mod ledger;
pub mod rng;
pub mod state;
pub mod verifier;
pub mod witness;

pub use error::{Error, Result};
