//! Closed-form worst-case error budgets relating sensor time-synchronization
//! error to the accuracy of algebraic sensor fusion on mobile robots.
//!
//! The crate is `no_std` (with `alloc`). It contains:
//!
//! - [`kinematics`]: frame algebra (rotations, Euler angles, skew operators,
//!   range/bearing geometry, small-angle attitude perturbation).
//! - [`catalog`]: platform and sensor registry with the built-in tables.
//! - [`syncline`]: the analytical error budget, its curve and the critical
//!   synchronization error.
//! - [`sensors`]: measurement models with explicit sync-induced terms and the
//!   direct-georeferencing and surface-vessel/AUV survey fusion chains.
//! - [`simulator`]: worst-case experiment runner that checks the closed form
//!   against the fusion chains.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod catalog;
pub mod kinematics;
pub mod sensors;
pub mod simulator;
pub mod syncline;

pub use error::{Error, Result};
