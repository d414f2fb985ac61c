//! Rigorous Legendre enclosures, a crossing certifier and a float spectrum explorer for spherical caps.

// `!(x < y)` is used on purpose so that NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certifier;
pub mod interval;
pub mod legendre;
pub mod spectrum;
