//! Exact and multiprecision verification toolkit for a family of plane
//! curves attached to the imaginary quadratic fields of class number one.
//!
//! * [`exact`]: rationals, real quadratic fields, sparse integer polynomials.
//! * [`catalog`]: the five curves and their tabulated points.
//! * [`maps`]: coverings and birational maps between the curves.
//! * [`modular`]: fixed-point q-series evaluation and recovery of the
//!   integral invariants from the Weber–Schläfli functions.
//! * [`search`]: bounded exact point searches.

pub mod exact;
pub mod catalog;
pub mod maps;
pub mod modular;
pub mod search;
