//! Threshold dispatch for a batch-service vehicle competing with an on-demand entrant.
//!
//! A single vehicle of fixed capacity waits at a terminal until `n` passengers
//! have queued, departs, and picks up roadside requests during the line-haul
//! while seats remain. Passengers defect to a faster (more expensive) entrant
//! when their expected wait exceeds a tolerance. This crate provides:
//!
//! - [`poisson`]: the capacity-truncated Poisson expectation `E[min{M, k}]`
//!   and its derivatives in the Poisson mean,
//! - [`model`]: cycle profit per unit time, its discrete increments, critical
//!   arrival rates, demand feasibility and the optimal dispatch threshold,
//! - [`conditions`]: the regularity inequalities that govern comparative
//!   statics, their critical roots, and the tabulated reproductions,
//! - [`sim`]: a seeded discrete-event Monte Carlo of dispatch cycles used as
//!   an independent oracle for the closed forms,
//! - [`roots`]: the bracketing root finder shared by the above.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod conditions;
mod error;
pub mod model;
pub mod poisson;
pub mod roots;
pub mod sim;

pub use error::{Error, Result};
pub use model::{MarketParams, MidrouteModel};
