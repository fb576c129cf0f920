//! Rational group algebras of groups of order `p^5` through explicit
//! required pairs and rational representations.

pub mod arith;
pub mod catalog;
pub mod character;
pub mod cyclotomic;
pub mod error;
pub mod format;
pub mod pairs;
pub mod pc;
pub mod rep;
pub mod verify;
pub mod wedderburn;

pub use error::{Error, Result};
