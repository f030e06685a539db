//! Exact computations in the free group `F_k` and its group algebra: radial
//! elements, conditional expectation onto the radial subalgebra, counting of
//! reduced words by boundary letters, and sandwiched sphere sums in free
//! products of abelian groups.
//!
//! The algebraic types are generic over the coefficient type; the aliases
//! below fix it to exact rationals, with `f64` variants for quick numerics.

pub mod counting;
pub mod error;
pub mod freegroup;
pub mod freeproduct;
pub mod group_algebra;
pub mod radial;
pub mod scalar;
pub mod verify;

pub type Rational = num_rational::BigRational;

pub use counting::{CountTable, LetterSet, RecurrenceMatrix};
pub use error::{Error, Result};
pub use freegroup::{Letter, ReducedWord, DEFAULT_CAP};
pub use freeproduct::{FPConfig, FPWord};
pub use group_algebra::AlgebraElement;
pub use radial::{RadialElement, Sandwich, SandwichPath};
pub use scalar::Scalar;

pub type Element = AlgebraElement<Rational>;
pub type Radial = RadialElement<Rational>;
pub type ElementF64 = AlgebraElement<f64>;
pub type RadialF64 = RadialElement<f64>;
