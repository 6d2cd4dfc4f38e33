//! Fixed-point evaluation of the Weber–Schläfli function and recovery of the
//! integral invariants attached to each discriminant.

mod engine;
pub mod fixed;

pub use engine::*;
pub use fixed::{fixed_arith, ApproxOrdering, FixedError, FixedOp, FixedReal};
