//! Finite quantaloid-enriched categories and closure spaces.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod closure;
pub mod contdist;
pub mod enumerate;
pub mod error;
pub mod fuzzy;
pub mod qcat;
pub mod report;

pub use error::{Error, Result};
