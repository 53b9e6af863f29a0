//! Numerical toolkit for Orlicz–Lorentz function spaces `Λ_{φ,ω}[0,γ)`.
//!
//! Everything here works on *simple* functions, so every integral is a finite
//! sum over an exact piece layout:
//!
//! - [`orlicz`]: Orlicz functions φ, right derivatives, complementary functions ψ
//!   and Δ₂ classification.
//! - [`stepfn`]: step functions on `[0,1)` or `[0,∞)`, distribution functions,
//!   decreasing rearrangements and measure-preserving alignment.
//! - [`weight`]: non-increasing weights ω with closed-form antiderivatives W.
//! - [`norms`]: the modular, the Luxemburg norm and the Orlicz (Amemiya) norm
//!   together with the interval `K(x)` of minimizing multipliers.
//! - [`geometry`]: non-squareness and local uniform non-squareness predicates,
//!   square-pair witnesses and seeded random probes.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x >= 0.0)` style checks are there to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod geometry;
pub mod norms;
pub mod orlicz;
pub mod sampling;
pub mod solve;
pub mod stepfn;
pub mod weight;

pub use geometry::{GeometryError, GeometryReport, Property, Verdict, VerdictStatus};
pub use norms::{KInterval, NormError, SpaceConfig};
pub use orlicz::{Classification, ConjugatePair, OrliczError, OrliczFunction, Regime};
pub use stepfn::{Domain, Piece, Rearrangement, StepError, StepFunction};
pub use weight::{Weight, WeightError, WeightFamily};
