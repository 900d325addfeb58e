//! Numerical verification of the Doob–McKean identity for isotropic
//! α-stable processes: transition kernels, stable numerics, samplers,
//! generator identities and the Lévy/Lamperti layer of the Cauchy case.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod generators;
pub mod kernels;
pub mod levy_lamperti;
pub mod quad;
pub mod samplers;
pub mod special;
pub mod stable_numerics;
pub mod stats;

pub use error::{Error, Result};
