//! Numerical toolkit for the Hilbert matrix operator
//! `Hf(z) = Σ_n (Σ_k a_k / (n + k + 1)) z^n` acting between Korenblum,
//! log-weighted Korenblum, Hardy-∞ and α-Bloch spaces of the unit disk.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] – Gamma, Beta and the reflection identity on the positive axis.
//! * [`quadrature`] – integration over `[0, 1]` with algebraic/logarithmic
//!   endpoint singularities (double-exponential and Gauss–Jacobi backends).
//! * [`optimize`] – golden-section search, clustered grids and limit extrapolation.
//! * [`spaces`] – weights, named test functions and numerical norm estimates.
//! * [`hilbert_op`] – matrix, kernel-integral and weighted-composition
//!   realisations of the operator, plus its derivative.
//! * [`norm_formulas`] – every closed form, sup-integral and bound for the
//!   operator norms, with their admissible parameter ranges.
//! * [`verify`] – independent oracles: random-function certificates,
//!   representation cross-checks, lemma brute force and divergence probes.

pub mod error;
pub mod hilbert_op;
pub mod norm_formulas;
pub mod optimize;
pub mod quadrature;
pub mod spaces;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
