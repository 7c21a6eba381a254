//! Eigenvalue splitting and Jordan-structure analysis for matrix families
//! A(ζ) with polynomial entries.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod jordan;
pub mod ranklab;
pub mod scanner;
pub mod sylv;
pub mod tracker;

pub use error::{Error, Result};
