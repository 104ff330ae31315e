//! Exact arithmetic and experiments for additive cyclic orders on the integers.
//!
//! The crate covers the orders `C+`, `C-` and the rotation orders `C_alpha`
//! pulled back from the circle along `l -> alpha*l mod 1`, their universal
//! covers on `Z^2`, recovery of `alpha` from a black-box order, constructions
//! that define one rotation order from another, the tmc/cnc set algebra and
//! a few Kronecker-style density searches. Every order decision is made with
//! exact integer arithmetic over quadratic surds.

pub mod classify;
pub mod cover;
pub mod cyclic;
pub mod definability;
mod error;
pub mod exactnum;
pub mod kronecker;
pub mod lang;
pub mod sets;

pub use error::{Error, Result};
