//! Exact computations around weights of p-blocks of finite groups.

pub mod arith;
pub mod blocks;
pub mod chains;
pub mod chartable;
pub mod context;
pub mod ddelta;
pub mod error;
pub mod k0;
pub mod perm;

pub use error::{Error, Result};
