//! Holonomic gradient evaluation of the confluent hypergeometric function
//! ₁F₁(a; c; Y) of a symmetric matrix argument, and the exact distribution of
//! the largest eigenvalue of a real Wishart matrix built on top of it.
//!
//! The pipeline has two halves that complement each other:
//!
//! * near the origin, ₁F₁ and all of its square-free mixed partial
//!   derivatives are summed from the zonal-polynomial expansion
//!   ([`series`]);
//! * away from the origin, that derivative vector is transported along a
//!   path by integrating the Pfaffian system implied by Muirhead's partial
//!   differential equations ([`pfaffian`], [`ode`], [`radial`]).
//!
//! On the diagonal `y₁ = … = y_m` the Pfaffian system is singular; for
//! `m ∈ {2, 3}` the restricted ordinary differential equations in
//! [`diagonal`] take over. [`wishart`] turns all of this into the CDF,
//! quantiles and stochastic-ordering bounds of the largest root.
//!
//! The crate is `no_std` and needs only `alloc`. Floating-point elementary
//! functions come from `libm`, so results are identical with and without
//! `std`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagonal;
mod error;
mod math;
pub mod ode;
pub mod partitions;
pub mod pfaffian;
pub mod radial;
pub mod series;
pub mod special;
pub mod wishart;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use pfaffian::{DerivVector, EvaluationPoint, SubsetIndex};
pub use series::{HypParams, InitialMode, TruncationConfig};
pub use wishart::{HgmConfig, TiePolicy, WishartProblem};
