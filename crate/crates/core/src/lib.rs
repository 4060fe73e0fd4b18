// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod bridge;
pub mod cli;
pub mod error;
pub mod kl;
pub mod normsq;
pub mod quad;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
