//! Numerical differential geometry for 4-dimensional Lorentzian metrics.
//!
//! Everything is built on truncated Taylor jets ([`jet::Jet3`]): metric
//! components are evaluated as jets, so all curvature tensors up to
//! `∇Ricci` come out with exact (machine-precision) derivatives instead
//! of finite-difference approximations.
//!
//! The crate is `no_std` (with `alloc`); enable the `std` feature (default)
//! for the standard-library float routines, or `libm` for bare targets.
//!
//! Conventions used throughout:
//! - signature `(-,+,+,+)`, coordinate 0 is the time coordinate;
//! - the stored fully covariant curvature tensor satisfies
//!   `R_hijk = gamma * (g_hk g_ij - g_hj g_ik)` on a space of constant
//!   curvature `gamma` (so `gamma > 0` on spheres and for de Sitter);
//! - `Ricci_ij` is the contraction with positive scalar curvature on
//!   spheres, i.e. de Sitter with curvature `k` has `R = 12 k`.

#![no_std]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("qcst-core needs either the `std` or the `libm` feature");

pub mod curvature;
pub mod diagnostics;
pub mod expr;
pub mod fluid;
pub mod frg;
pub mod jet;
pub mod linalg;
pub(crate) mod math;
pub mod metric;
pub mod qc;
