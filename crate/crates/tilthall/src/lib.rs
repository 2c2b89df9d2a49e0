//! Exact computational laboratory for finite-dimensional algebras over
//! finite fields: module categories, homological verdicts with replayable
//! certificates, tilting certification, resolving dualities, and truncated
//! semi-derived Ringel-Hall algebras.

pub mod error;
pub mod field;
pub mod matrix;
pub mod algebra;
pub mod fixtures;
pub mod rep;
pub mod homology;
pub mod tilting;
pub mod catalog;
pub mod hall;
pub mod verify;
pub mod report;
pub mod snf;
pub mod serialize;
pub mod cache;
pub mod suites;

pub use error::{Error, Result};
