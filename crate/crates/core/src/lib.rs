//! Exact computations around the log canonical bundle formula for families of
//! pointed stable rational curves.
//!
//! The crate is `no_std` (it needs `alloc`) and has no floating point anywhere.
//! Everything is built from arbitrary-precision rationals:
//!
//! - [`trees`]: dual graphs of stable genus-0 curves, boundary decompositions,
//!   leaf-contraction sequences.
//! - [`weights`]: weight vectors, `α(S')`, boundary charges and the per-fiber
//!   correction divisor.
//! - [`omega`]: the canonical pluri-differential built from residue-normalized
//!   pair forms, and its vanishing along point collisions.
//! - [`surfaces`]: Picard lattices of blown-up ruled surfaces.
//! - [`families`]: discriminant/moduli decomposition and degrees along
//!   one-parameter families.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod labels;
pub mod linalg;
pub mod poly;
pub mod rational;

pub mod families;
pub mod omega;
pub mod surfaces;
pub mod trees;
pub mod weights;

pub use error::{Error, Result};
pub use labels::LabelSet;
pub use rational::Rational;
