//! Polarization constants of homogeneous polynomials on finite-dimensional
//! `ℓ_p` spaces over ℝ and ℂ.
//!
//! * [`constants`]: exact values of `c(k, ℓ₁^d)`, the Harris bound and the
//!   `ℓ_p³` bounds, in arbitrary-precision rational arithmetic.
//! * [`poly`] and [`polarize`]: sparse homogeneous polynomials and two
//!   independent evaluators of their symmetric multilinear forms.
//! * [`optimize`]: seeded multistart maximizers giving certified lower
//!   bounds (with witnesses) for `‖P‖`, `‖P∨‖` and blocked norms.
//! * [`quotient`]: η-nets and the norm-one quotient map `ℓ₁^d → X` used to
//!   transfer bounds from `ℓ₁^d` to an arbitrary space.
//! * [`experiments`]: named, reproducible audits and the command line front end.

pub mod constants;
pub mod error;
pub mod experiments;
pub mod optimize;
pub mod polarize;
pub mod poly;
pub mod quotient;
pub mod spaces;

pub use error::{Error, Result};
pub use num_complex::Complex64;
