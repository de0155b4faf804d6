//! Finite partial orders with designated natural lubs.

pub mod algebraic;
pub mod axioms;
pub mod category;
pub mod closure;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod gallery;
pub mod harness;
pub mod lubpo;
pub mod order;
pub mod realize;
pub mod rules;

pub use error::{Error, Result};
pub use lubpo::{make_lubpo, Lubpo, Mode};
pub use order::{ElemSet, MonoMap, Poset};
