//! Simulation and certification of Markov and semi-Markov jump linear
//! systems driven by sampled, quantized, finite data-rate state feedback.
//!
//! The crate is organised bottom-up:
//!
//! * [`mathkit`] holds the small dense numerics.
//! * [`switching`] models the mode process and samples its paths.
//! * [`system`] bundles the per-mode `(A, B, K)` triples.
//! * [`protocol`] is the quantizer, the symbol codec and the radius updates.
//! * [`certificate`] evaluates and optimizes the almost-sure stabilization condition.
//! * [`simulator`] runs the closed loop and estimates Lyapunov exponents.
//! * [`config`] and [`cli`] load scenario files and drive the commands.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod certificate;
pub mod cli;
pub mod config;
pub mod error;
pub mod mathkit;
pub mod plot;
pub mod protocol;
pub mod simulator;
pub mod switching;
pub mod system;
pub mod tol;

pub use error::{Error, Result};
