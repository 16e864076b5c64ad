//! Core algorithms for estimating the region of plausible locations (RPL)
//! of a cellular user from the serving sector and static infrastructure data.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! anywhere; file formats, CLI, and the synthetic-scenario generator live in
//! the companion `rplkit` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod antenna;
pub mod assign;
pub mod error;
pub mod evaluate;
pub mod geo;
pub mod propagation;
pub mod rpl;

pub use error::CoreError;
