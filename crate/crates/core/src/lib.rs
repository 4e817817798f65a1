//! Quasi-exactly solvable (QES) symmetrized polynomial oscillators.
//!
//! The potentials handled here are even in `x` with the odd powers entering
//! through `|x|`:
//!
//! ```text
//! quartic:  V(x) = x^4 - s|x|^3 + r x^2 - q|x|
//! sextic:   V(x) = x^6 - u|x|^5 + t x^4 - s|x|^3 + r x^2 - q|x|
//! ```
//!
//! A QES eigenstate is `psi(x) = exp(W(x)) phi(x)` where `phi` is a polynomial
//! on the `x < 0` branch, reflected to `x > 0` with parity `epsilon`. The
//! quartic family is reduced to an `(n+1)`-dimensional sl(2) matrix
//! ([`algebra`], [`quartic`]); the sextic family is solved through the roots of
//! `phi` (Bethe ansatz, [`sextic`]). Every produced state can be evaluated
//! pointwise ([`eval`]) and cross-checked against a finite-difference
//! eigensolver on the half line ([`verify`]).

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod eval;
pub mod poly;
pub mod quartic;
pub mod sextic;
pub mod state;
pub mod verify;

pub use error::{QesError, Result};
pub use state::{Family, Gauge, Parity, ParityCategory, PotentialSpec, Provenance, QesState};
