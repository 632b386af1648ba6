//! Exact arithmetic: rationals, cyclotomic numbers, finite fields, the
//! reduction map between them, and dense linear algebra over any of them.

pub mod cyclotomic;
pub mod ff;
pub mod linalg;
pub mod numtheory;
pub mod polyfp;
pub mod redmap;

pub use cyclotomic::{Cyclotomic, Rational};
pub use ff::{FFElem, GaloisField};
pub use linalg::FieldOps;
pub use redmap::RedMap;
