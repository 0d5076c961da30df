//! Moments of random variables computed from their complex-extended
//! moment-generating functions.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bench;
pub mod dynamic;
pub mod error;
pub mod mgf;
pub mod moments;
pub mod oracle;
pub mod quadrature;
pub mod validation;

pub use error::{Error, Result};
