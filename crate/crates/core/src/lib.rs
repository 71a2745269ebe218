//! Secret-key rates of third-generation quantum repeaters built from GKP
//! qudits, bare or concatenated with a `[[D, 1, (D+1)/2]]_D` code.
//!
//! The model is fully analytic: every noise source is an incoherent Gaussian
//! displacement channel, stations convert the accumulated Gaussian noise into
//! discrete shift errors by homodyne binning, and a chain of `N` stations
//! composes the station channel with itself `N` times. The crate is organized
//! as:
//!
//! - [`dist`] — shift-error probability vectors, convolution, entropy, rate;
//! - [`binning`] — Gaussian noise binned onto the square GKP lattice;
//! - [`noise`] — squeezing, loss and amplification variance bookkeeping;
//! - [`poly`] — the higher-level code's decoding model and the
//!   analog-syndrome erasure decoder;
//! - [`half_teleport`] — stabilizer-placement variants of the
//!   half-teleportation protocol;
//! - [`protocols`] — end-to-end rates and the dimension/spacing optimizers;
//! - [`oracle`] / [`validation`] — Monte-Carlo counterparts of every closed
//!   form, with reproducible, partition-independent sampling.

pub mod binning;
pub mod dist;
pub mod error;
pub mod half_teleport;
pub mod noise;
pub mod oracle;
pub mod poly;
pub mod protocols;
pub mod validation;

pub use error::{Error, Result};
