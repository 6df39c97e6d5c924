//! Colored Jones polynomials of 2-fusion knots, q-difference recurrence
//! guessing and verification, consistency checks and Kashaev invariants.

pub mod error;
pub mod consistency;
pub mod data;
pub mod fusion;
pub mod guess;
pub mod kashaev;
pub mod newton;
pub mod opkit;
pub mod qarith;

pub use error::{QError, QResult};
