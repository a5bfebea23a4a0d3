//! Frames and generalized Bessel multipliers in Hilbert C*-modules over
//! finite-dimensional C*-algebras.
//!
//! The algebra is always a finite direct sum of full matrix algebras
//! `A = M_{d_1}(C) ⊕ ... ⊕ M_{d_r}(C)`, the modules are the free modules
//! `A^k`, and the standard module `ℓ²(A)` is realized as `A^N` for a finite
//! sequence length `N`. Everything is therefore computable exactly up to
//! floating-point round-off, and every operator has a faithful dense complex
//! realization that serves as an independent oracle.
//!
//! Layering, bottom-up:
//!
//! - [`algebra`]: elements of `A`, order, spectral calculus, center test.
//! - [`module_space`]: vectors of `A^k`, the `A`-valued inner product.
//! - [`operators`]: adjointable `A`-linear maps, their realization, norms and spectra.
//! - [`frames`]: analysis/synthesis/frame operators, duals, modular Riesz bases.
//! - [`multipliers`]: `M_{U,Y,X} = T_Y^* U T_X` and diagonal Bessel multipliers.
//! - [`certificates`]: hypothesis constants and conclusion checks for the
//!   invertibility results on multipliers.

// `!(a > b)` is used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod certificates;
mod error;
pub mod frames;
pub mod linalg;
pub mod module_space;
pub mod multipliers;
pub mod operators;
pub mod random;
pub mod tolerance;

pub use algebra::{AlgebraElement, AlgebraShape};
pub use certificates::{Certificate, TheoremId, Verdict};
pub use error::{Error, Result};
pub use frames::{FrameBounds, FrameSequence, RieszStatus};
pub use module_space::ModuleVector;
pub use multipliers::{DiagonalSymbol, Multiplier, Symbol};
pub use operators::ModuleOperator;
pub use tolerance::Tolerances;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix used for blocks and realizations.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
