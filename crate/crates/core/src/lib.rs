//! Primary matrix functions on symmetric matrices and what their derivative
//! operators can certify.
//!
//! The crate builds up in layers:
//!
//! * [`symcore`] — dense symmetric kernel: construction, Frobenius inner
//!   product, deterministic Jacobi spectral decomposition, definiteness
//!   classification, and the orthonormal basis of Sym(n).
//! * [`primfn`] — scalar functions lifted to the symmetric cone through the
//!   spectrum: f(A) = Qᵀ·diag(f(λ))·Q, their Fréchet derivatives as operators
//!   on Sym(n) (divided differences, cross-checked against integral
//!   representations), potentials and their gradients, plus determinant and
//!   eigenvalue derivative identities.
//! * [`monocheck`] — sampling checkers for four monotonicity notions of maps
//!   on symmetric matrices, their implication pattern, operator spectra along
//!   curves, and a catalog of closed-form counterexample values.
//! * [`elast`] — isotropic stress models in the logarithmic strain: energies,
//!   Kirchhoff and Cauchy stress, and monotonicity diagnostics of the
//!   true-stress–true-strain response.
//! * [`jogcalc`] — operator calculus for products of self-adjoint
//!   positive-definite operators, the chain factorization of stress
//!   derivatives, and the shear-path experiment where invertibility survives
//!   while positive definiteness of the symmetric part is lost.
//! * [`sample`] — seeded, schedule-independent random sampling shared by the
//!   checkers.

pub mod elast;
pub mod error;
pub mod jogcalc;
pub mod monocheck;
pub mod primfn;
pub mod sample;
pub mod symcore;

pub use error::{Error, Result};
pub use symcore::{GeneralMatrix, SymMatrix};
