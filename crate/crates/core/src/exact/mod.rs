//! Exact arithmetic: rationals, real quadratic fields and sparse bivariate
//! integer polynomials.

mod poly;
mod quad;
mod rational;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

pub use poly::{BivarPoly, UniPoly};
pub use quad::QuadRat;
pub use rational::{exact_isqrt, rat_arith, ArithOp, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed radicands: sqrt({left}) and sqrt({right})")]
    MixedRadicand { left: BigInt, right: BigInt },
    #[error("radicand {0} must be squarefree and greater than 1")]
    InvalidRadicand(BigInt),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Coordinate field of a point: ℚ itself or some ℚ(√m).
///
/// Binary operations assume both operands live in the same field; callers
/// validate that once per point (see [`Scalar::same_field`]).
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// A rational constant in the field of `self`.
    fn lift(&self, r: Rational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, ExactError>;
    fn is_zero(&self) -> bool;
    /// An exact square root in the same field, if there is one.
    fn sqrt_exact(&self) -> Option<Self>;
    fn same_field(&self, rhs: &Self) -> Result<(), ExactError>;

    fn lift_int(&self, n: i64) -> Self {
        self.lift(Rational::from(n))
    }

    fn powi(&self, e: u32) -> Self {
        let mut acc = self.lift(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Scalar for Rational {
    fn lift(&self, r: Rational) -> Self {
        r
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        Rational::sqrt_exact(self)
    }
    fn same_field(&self, _rhs: &Self) -> Result<(), ExactError> {
        Ok(())
    }
    fn powi(&self, e: u32) -> Self {
        self.pow(e)
    }
}

impl Scalar for QuadRat {
    fn lift(&self, r: Rational) -> Self {
        self.embed(r)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        QuadRat::is_zero(self)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        QuadRat::sqrt_exact(self)
    }
    fn same_field(&self, rhs: &Self) -> Result<(), ExactError> {
        if self.radicand() == rhs.radicand() {
            Ok(())
        } else {
            Err(ExactError::MixedRadicand {
                left: self.radicand().clone(),
                right: rhs.radicand().clone(),
            })
        }
    }
}

/// Writes `n = s²·m` with `m` squarefree; returns `(s, m)`.
///
/// Trial division runs only up to the cube root of the unfactored part: what
/// is left after that has at most two prime factors, so it is either a
/// square or squarefree.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut m = BigUint::one();
    let mut p = 2u64;
    loop {
        let pb = BigUint::from(p);
        if &pb * &pb * &pb > rest {
            break;
        }
        let sq = &pb * &pb;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            s *= &pb;
        }
        if (&rest % &pb).is_zero() {
            rest /= &pb;
            m *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        m *= rest;
    }
    (s, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        let cases: [(u64, u64, u64); 6] =
            [(1, 1, 1), (12, 2, 3), (17, 1, 17), (72, 6, 2), (49 * 53, 7, 53), (101 * 101 * 3, 101, 3)];
        for (n, s, m) in cases {
            assert_eq!(
                squarefree_decompose(&BigUint::from(n)),
                (BigUint::from(s), BigUint::from(m)),
                "n = {n}"
            );
        }
        // two large primes above the cube-root cutoff
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(999_983u64);
        assert_eq!(squarefree_decompose(&(&p * &q)), (BigUint::one(), &p * &q));
        assert_eq!(squarefree_decompose(&(&p * &p)), (p.clone(), BigUint::one()));
    }
}
