//! Discrete subordination and functional calculus for Ritt operators on
//! finite-dimensional spaces.
//!
//! The crate is `no_std` with `alloc`. Matrices are dense and complex; all
//! measures are finite atom lists. File formats and the command-line front
//! end live in the `rittcalc` crate.

#![no_std]
// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod error;
pub mod funclasses;
pub mod linalg;
pub mod opcalc;
pub mod quadrature;
pub mod regions;
pub mod special;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64 as C64;

pub(crate) mod prelude {
    pub use crate::error::{Error, Result};
    pub use alloc::{format, string::String, string::ToString, vec, vec::Vec};
    pub use core::f64::consts::PI;
    pub use num_complex::Complex64 as C64;
    #[allow(unused_imports)]
    pub use num_traits::Float;
}
