//! Exact symbolic calculus for linear differential operators on flat space.
//!
//! Operators have polynomial coefficients in the formal jets of abstract
//! coefficient functions (optionally matrix valued over a trivial rank-`N`
//! bundle). The crate computes compositions, formal adjoints, the
//! self-adjoint/skew-adjoint split, and the canonical divergence forms
//!
//! ```text
//! sum_i  D^i S_(i) D^i  +  sum_i  D^i (D_c A_(i) + A_(i) D_c) D^i
//! ```
//!
//! with every identity checkable exactly against trigonometric polynomials
//! on the torus (see [`oracle`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canon;
pub mod error;
pub mod gen;
pub mod jet;
pub mod matrix;
pub mod multi_index;
pub mod operator;
pub mod oracle;
pub mod poly;
pub mod tensor;
pub mod trig;

pub use canon::{CanonicalForm, Class, DivergenceFactor};
pub use error::Error;
pub use jet::{JetVar, Symbol, Var};
pub use matrix::MatrixPoly;
pub use multi_index::MultiIndex;
pub use operator::OperatorNF;
pub use poly::{Monomial, ScalarPoly};
pub use tensor::SymTensor;
pub use trig::TrigPoly;

/// Exact arbitrary-precision rational numbers used for every coefficient.
pub type Rational = num_rational::BigRational;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub(crate) fn half() -> Rational {
    rat(1, 2)
}
