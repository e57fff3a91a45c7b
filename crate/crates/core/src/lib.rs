//! Kinetic gas of molecules whose vibrational quanta can only be filled by
//! collisions and emptied by radiation, plus the supporting hierarchic
//! oscillator model and causal-site axiomatics.
//!
//! - [`spectro`]: Boltzmann ratios, Einstein rates, level generator.
//! - [`collision`]: binary collisions with quantized, one-way transfer.
//! - [`engine`]: stochastic particle solver with an energy ledger.
//! - [`hierosc`]: hierarchic coordinates and the quantum oscillator chain.
//! - [`causal`]: finite causal sites, axiom checking, p-adic ordering.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod causal;
pub mod collision;
pub mod engine;
mod error;
pub mod hierosc;
pub mod spectro;

pub use collision::{CollisionOutcome, Particle, TransferDistribution, Vec3};
pub use engine::{EnergyLedger, GasConfig, Simulation};
pub use error::{Error, Result};
pub use spectro::{OscillatorSpec, RadiationMode, RateSet};
