use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use super::{squarefree_decompose, ExactError, Rational};

/// `a + b√m` in the real quadratic field ℚ(√m).
///
/// The radicand travels with each value. Arithmetic between different
/// radicands is rejected by the `checked_*` methods; the operator impls panic
/// on a mismatch.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    m: BigInt,
    a: Rational,
    b: Rational,
}

impl QuadRat {
    pub fn new(m: impl Into<BigInt>, a: Rational, b: Rational) -> Result<Self, ExactError> {
        let m = m.into();
        if m <= BigInt::one() {
            return Err(ExactError::InvalidRadicand(m));
        }
        let (_, core) = squarefree_decompose(m.magnitude());
        if core != *m.magnitude() {
            return Err(ExactError::InvalidRadicand(m));
        }
        Ok(QuadRat { m, a, b })
    }

    /// Embeds a rational into ℚ(√m) without re-validating `m`.
    pub fn embed(&self, a: Rational) -> QuadRat {
        QuadRat { m: self.m.clone(), a, b: Rational::zero() }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.m
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value as a rational, when the √m part vanishes.
    pub fn to_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }

    pub fn conj(&self) -> QuadRat {
        QuadRat { m: self.m.clone(), a: self.a.clone(), b: -&self.b }
    }

    /// `a² − m·b²`.
    pub fn norm(&self) -> Rational {
        &(&self.a * &self.a) - &(&Rational::from_integer(self.m.clone()) * &(&self.b * &self.b))
    }

    fn same_field(&self, rhs: &QuadRat) -> Result<(), ExactError> {
        if self.m == rhs.m {
            Ok(())
        } else {
            Err(ExactError::MixedRadicand { left: self.m.clone(), right: rhs.m.clone() })
        }
    }

    pub fn checked_add(&self, rhs: &QuadRat) -> Result<QuadRat, ExactError> {
        self.same_field(rhs)?;
        Ok(QuadRat { m: self.m.clone(), a: &self.a + &rhs.a, b: &self.b + &rhs.b })
    }

    pub fn checked_sub(&self, rhs: &QuadRat) -> Result<QuadRat, ExactError> {
        self.same_field(rhs)?;
        Ok(QuadRat { m: self.m.clone(), a: &self.a - &rhs.a, b: &self.b - &rhs.b })
    }

    pub fn checked_mul(&self, rhs: &QuadRat) -> Result<QuadRat, ExactError> {
        self.same_field(rhs)?;
        let m = Rational::from_integer(self.m.clone());
        let a = &(&self.a * &rhs.a) + &(&m * &(&self.b * &rhs.b));
        let b = &(&self.a * &rhs.b) + &(&self.b * &rhs.a);
        Ok(QuadRat { m: self.m.clone(), a, b })
    }

    /// Division through the conjugate: `x / y = x·ȳ / N(y)`.
    pub fn checked_div(&self, rhs: &QuadRat) -> Result<QuadRat, ExactError> {
        self.same_field(rhs)?;
        let n = rhs.norm();
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let t = self.checked_mul(&rhs.conj())?;
        Ok(QuadRat { m: self.m.clone(), a: t.a.checked_div(&n)?, b: t.b.checked_div(&n)? })
    }

    /// Square root inside ℚ(√m), if the value is a square there.
    pub fn sqrt_exact(&self) -> Option<QuadRat> {
        let m = Rational::from_integer(self.m.clone());
        if self.b.is_zero() {
            if let Some(r) = self.a.sqrt_exact() {
                return Some(self.embed(r));
            }
            // a = m·c²  ⇒  √a = c√m
            let c = self.a.checked_div(&m).ok()?.sqrt_exact()?;
            return Some(QuadRat { m: self.m.clone(), a: Rational::zero(), b: c });
        }
        // (p + q√m)² = a + b√m  ⇔  p² + m q² = a, 2pq = b
        let disc = self.norm().sqrt_exact()?;
        let two = Rational::from_integer(2);
        for cand in [&self.a + &disc, &self.a - &disc] {
            let p2 = cand.checked_div(&two).ok()?;
            if p2.is_zero() {
                continue;
            }
            if let Some(p) = p2.sqrt_exact() {
                let q = self.b.checked_div(&(&two * &p)).ok()?;
                let root = QuadRat { m: self.m.clone(), a: p, b: q };
                if root.checked_mul(&root).ok()? == *self {
                    return Some(root);
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64() + self.b.to_f64() * self.m.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

macro_rules! forward_quad {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadRat> for &QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: &QuadRat) -> QuadRat {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_quad!(Add, add, checked_add);
forward_quad!(Sub, sub, checked_sub);
forward_quad!(Mul, mul, checked_mul);
forward_quad!(Div, div, checked_div);

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { m: self.m.clone(), a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let mag = self.b.abs();
        let coef = if mag == Rational::one() { String::new() } else { format!("{mag}*") };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coef}sqrt({})", self.m)
        } else {
            write!(f, "{}{sign}{coef}sqrt({})", self.a, self.m)
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(m: i64, a: i64, b: i64) -> QuadRat {
        QuadRat::new(m, a.into(), b.into()).unwrap()
    }

    #[test]
    fn conjugate_product_is_norm() {
        let u = qr(17, 8, 2);
        assert_eq!(&u * &u.conj(), qr(17, -4, 0));
        assert_eq!(u.norm(), Rational::from(-4));
    }

    #[test]
    fn addition_keeps_radicand() {
        assert_eq!(&qr(41, 4, 1) + &qr(41, -4, 0), qr(41, 0, 1));
        assert_eq!(qr(41, 0, 1).to_string(), "sqrt(41)");
        assert_eq!(qr(89, -10, -1).to_string(), "-10-sqrt(89)");
        assert_eq!(qr(17, 8, 2).to_string(), "8+2*sqrt(17)");
    }

    #[test]
    fn self_division_is_one() {
        let u = qr(17, 1, 1);
        assert_eq!(u.checked_div(&u).unwrap(), qr(17, 1, 0));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            qr(17, 1, 1).checked_add(&qr(41, 1, 1)),
            Err(ExactError::MixedRadicand { .. })
        ));
        assert_eq!(qr(17, 1, 1).checked_div(&qr(17, 0, 0)), Err(ExactError::DivisionByZero));
        assert!(QuadRat::new(12, Rational::one(), Rational::one()).is_err());
        assert!(QuadRat::new(1, Rational::one(), Rational::one()).is_err());
    }

    #[test]
    fn square_roots_inside_the_field() {
        let r = qr(2, 3, 2); // (1+√2)²
        assert_eq!(r.sqrt_exact(), Some(qr(2, 1, 1)));
        assert_eq!(qr(17, 68, 0).sqrt_exact(), Some(qr(17, 0, 2)));
        assert_eq!(qr(17, 9, 0).sqrt_exact(), Some(qr(17, 3, 0)));
        assert_eq!(qr(17, 1, 1).sqrt_exact(), None);
    }
}
