//! Antipowers in pure morphic words.
//!
//! A k-antipower is a word made of k pairwise distinct blocks of equal
//! length. This crate generates fixed points of morphisms lazily, decides
//! antipower windows exactly (with a fingerprint-accelerated path that is
//! checked against a naive oracle), classifies uniform morphic words, and
//! carries an exact arithmetic kernel over `Z[phi]` for the Fibonacci word.
//!
//! Module map:
//! - [`word`], [`morphism`], [`morphic`]: alphabets, finite words, morphisms
//!   and lazily materialized fixed points.
//! - [`antipower`]: antipower predicates, minimal block length search and the
//!   constructive checks for uniform morphisms.
//! - [`classifier`]: recurrence and periodicity verdicts for uniform morphisms.
//! - [`golden`]: exact `Z[phi]` arithmetic and the Fibonacci-word suites.
//! - [`report`]: serializable reports shared by every suite.

pub mod antipower;
pub mod classifier;
pub mod error;
pub mod fingerprint;
pub mod golden;
pub mod morphic;
pub mod morphism;
pub mod report;
pub mod suites;
pub mod word;

pub use error::{Error, Result};
pub use morphic::MorphicWord;
pub use morphism::Morphism;
pub use word::{Alphabet, FiniteWord, Letter};
