//! Relative position functions of binary words.
//!
//! For a word over `{a, b}` the position functions `p_a(n)`, `p_b(n)` give the
//! 0-based index of the `n`-th `a` and `b`, and `r(n) = p_b(n) - p_a(n)`.
//! This crate generates substitution words lazily, computes these series,
//! rebuilds words from `r`, applies deletion/prefix/cloning operators and
//! predicts asymptotic slopes exactly in real quadratic fields.

pub mod error;
pub mod expr;
pub mod operators;
pub mod position;
pub mod reconstruct;
pub mod search;
pub mod spectral;
pub mod substitution;
pub mod verify;
pub mod word;

pub use error::{Error, ParseError, Result};
pub use position::{PositionSeries, RelativeSeries};
pub use spectral::QuadraticNumber;
pub use substitution::{BinarySubstitution, SubstitutionMatrix};
pub use word::{FiniteWord, Letter, WordStream};
