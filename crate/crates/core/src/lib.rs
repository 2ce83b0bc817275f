//! Transformation groupoids of injective Ore-semigroup actions: exact group
//! arithmetic, truncated groupoid enumeration, dilations, orbit-equivalence
//! certificates and finite-scale operator checks.

pub mod error;
pub mod group;
pub mod report;
pub mod dynamics;
pub mod groupoid;
pub mod dilation;
pub mod equivalence;
pub mod calg;
pub mod compactification;
pub mod catalog;
pub mod syntax;
pub mod cli;

pub use error::{Error, Result};
