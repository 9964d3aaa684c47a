//! Group-fairness auditing over binary confusion matrices.
//!
//! The crate computes the Objective Fairness Index (OFI) and disparate
//! impact (DI) with exact rational arithmetic, aggregates labelled
//! predictions into per-group confusion matrices, builds pairwise audit
//! reports, and ships the combinatorics of the confusion-matrix space
//! (counting identities, the marginal-benefit distribution and its moments)
//! together with brute-force oracles that check every closed form.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default). Without it every [`Execution`] strategy runs sequentially.

pub mod audit;
pub mod combinatorics;
pub mod error;
pub mod exec;
pub mod ingestion;
pub mod metrics;
pub mod oracle;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use metrics::{BiasVerdict, BinaryConfusion, DiBand, DiScore};
pub use rational::Rational;
