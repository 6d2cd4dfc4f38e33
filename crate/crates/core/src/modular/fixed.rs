//! Binary fixed-point reals with a running error bound.
//!
//! A [`FixedReal`] stores an integer mantissa `m` at `prec` fractional bits
//! together with `err`, a bound in ulps: the represented real `x` satisfies
//! `|x − m·2^−prec| ≤ err·2^−prec`. Every operation rounds its result and
//! widens `err` so the bound keeps holding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixedError {
    #[error("divisor is indistinguishable from zero")]
    DivisorNearZero,
    #[error("{0} of a value that is negative beyond its error bound")]
    NegativeArgument(&'static str),
    #[error("exp argument error bound too large")]
    ExpArgumentTooUncertain,
    #[error("precision mismatch: {0} vs {1} bits")]
    PrecisionMismatch(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxOrdering {
    Less,
    Greater,
    /// The error intervals overlap.
    Indistinguishable,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FixedReal {
    mant: BigInt,
    prec: u32,
    err: BigUint,
}

fn pow2(bits: u32) -> BigUint {
    BigUint::one() << bits as usize
}

/// Nearest integer to `n / 2^s` (ties up) and whether rounding happened.
fn round_shift(n: &BigInt, s: u32) -> (BigInt, bool) {
    if s == 0 {
        return (n.clone(), false);
    }
    let half = BigInt::one() << (s - 1) as usize;
    let q: BigInt = (n + half) >> s as usize;
    let inexact = &q << s as usize != *n;
    (q, inexact)
}

/// Nearest integer to `n / d` for `d ≠ 0` and whether rounding happened.
fn round_div(n: &BigInt, d: &BigInt) -> (BigInt, bool) {
    let (n, d) = if d.is_negative() { (-n, -d) } else { (n.clone(), d.clone()) };
    let two_d = &d * 2;
    let q = (&n * BigInt::from(2) + &d).div_floor(&two_d);
    let inexact = &q * &d != n;
    (q, inexact)
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    a.div_ceil(b)
}

fn ceil_shift(a: &BigUint, s: u32) -> BigUint {
    ceil_div(a, &pow2(s))
}

fn flag(b: bool) -> BigUint {
    if b {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

impl FixedReal {
    pub fn from_parts(mant: BigInt, prec: u32, err: BigUint) -> Self {
        FixedReal { mant, prec, err }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        FixedReal { mant: n.into() << prec as usize, prec, err: BigUint::zero() }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_int(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let (m, inexact) = round_div(&(r.numer() << prec as usize), r.denom());
        FixedReal { mant: m, prec, err: flag(inexact) }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn err_ulps(&self) -> &BigUint {
        &self.err
    }

    fn check(&self, rhs: &FixedReal) {
        assert_eq!(self.prec, rhs.prec, "fixed-point precision mismatch");
    }

    /// Upper bound on `|x|` in ulps.
    pub fn abs_upper_ulps(&self) -> BigUint {
        self.mant.magnitude() + &self.err
    }

    /// True when `|x| < 2^e` is certain.
    pub fn abs_below_pow2(&self, e: i64) -> bool {
        let shift = self.prec as i64 + e;
        if shift < 0 {
            return false;
        }
        self.abs_upper_ulps() < pow2(shift as u32)
    }

    /// `log2` of the upper bound on `|x|`; `-inf` for an exact zero.
    pub fn abs_upper_log2(&self) -> f64 {
        log2_ulps(&self.abs_upper_ulps()) - self.prec as f64
    }

    pub fn err_log2(&self) -> f64 {
        log2_ulps(&self.err) - self.prec as f64
    }

    pub fn cmp_approx(&self, rhs: &FixedReal) -> ApproxOrdering {
        self.check(rhs);
        let gap = &self.mant - &rhs.mant;
        if gap.magnitude() <= &(&self.err + &rhs.err) {
            return ApproxOrdering::Indistinguishable;
        }
        match gap.sign() {
            Sign::Minus => ApproxOrdering::Less,
            _ => ApproxOrdering::Greater,
        }
    }

    /// Changes precision; shortening rounds and widens the bound.
    pub fn with_prec(&self, prec: u32) -> FixedReal {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (prec - self.prec) as usize;
                FixedReal { mant: &self.mant << s, prec, err: &self.err << s }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                let (m, inexact) = round_shift(&self.mant, s);
                FixedReal { mant: m, prec, err: ceil_shift(&self.err, s) + flag(inexact) }
            }
        }
    }

    pub fn abs(&self) -> FixedReal {
        FixedReal { mant: self.mant.abs(), prec: self.prec, err: self.err.clone() }
    }

    pub fn mul_int(&self, n: i64) -> FixedReal {
        FixedReal {
            mant: &self.mant * n,
            prec: self.prec,
            err: &self.err * BigUint::from(n.unsigned_abs()),
        }
    }

    pub fn div_int(&self, n: i64) -> Result<FixedReal, FixedError> {
        if n == 0 {
            return Err(FixedError::DivisorNearZero);
        }
        let (m, inexact) = round_div(&self.mant, &BigInt::from(n));
        let err = ceil_div(&self.err, &BigUint::from(n.unsigned_abs())) + flag(inexact);
        Ok(FixedReal { mant: m, prec: self.prec, err })
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: u32) -> FixedReal {
        FixedReal { mant: &self.mant << k as usize, prec: self.prec, err: &self.err << k as usize }
    }

    pub fn try_add(&self, rhs: &FixedReal) -> Result<FixedReal, FixedError> {
        self.same_prec(rhs)?;
        Ok(FixedReal { mant: &self.mant + &rhs.mant, prec: self.prec, err: &self.err + &rhs.err })
    }

    fn same_prec(&self, rhs: &FixedReal) -> Result<(), FixedError> {
        if self.prec == rhs.prec {
            Ok(())
        } else {
            Err(FixedError::PrecisionMismatch(self.prec, rhs.prec))
        }
    }

    fn mul_impl(&self, rhs: &FixedReal) -> FixedReal {
        self.check(rhs);
        let (m, inexact) = round_shift(&(&self.mant * &rhs.mant), self.prec);
        let spread = self.mant.magnitude() * &rhs.err + rhs.mant.magnitude() * &self.err + &self.err * &rhs.err;
        FixedReal { mant: m, prec: self.prec, err: ceil_shift(&spread, self.prec) + flag(inexact) }
    }

    /// `x / y`, refusing divisors whose interval contains zero.
    pub fn div(&self, rhs: &FixedReal) -> Result<FixedReal, FixedError> {
        self.same_prec(rhs)?;
        let ym = rhs.mant.magnitude();
        if ym <= &rhs.err {
            return Err(FixedError::DivisorNearZero);
        }
        let (q, inexact) = round_div(&(&self.mant << self.prec as usize), &rhs.mant);
        // |x/y − x̃/ỹ| ≤ (δx + |x̃/ỹ|·δy) / (|ỹ| − δy)
        let num = (&self.err * ym + self.mant.magnitude() * &rhs.err) << self.prec as usize;
        let den = ym * (ym - &rhs.err);
        Ok(FixedReal { mant: q, prec: self.prec, err: ceil_div(&num, &den) + flag(inexact) })
    }

    pub fn recip(&self) -> Result<FixedReal, FixedError> {
        FixedReal::one(self.prec).div(self)
    }

    pub fn square(&self) -> FixedReal {
        self.mul_impl(self)
    }

    pub fn powi(&self, mut e: u32) -> FixedReal {
        let mut base = self.clone();
        let mut acc = FixedReal::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Result<FixedReal, FixedError> {
        self.nth_root(2)
    }

    pub fn cbrt(&self) -> Result<FixedReal, FixedError> {
        self.nth_root(3)
    }

    /// Real `k`-th root; negative input only for odd `k`.
    pub fn nth_root(&self, k: u32) -> Result<FixedReal, FixedError> {
        assert!(k >= 1);
        if self.mant.is_negative() {
            if k % 2 == 1 {
                return Ok(-&(-self).nth_root(k)?);
            }
            if self.mant.magnitude() > &self.err {
                return Err(FixedError::NegativeArgument("even root"));
            }
        }
        let p = self.prec;
        let lift = (k - 1) * p;
        let m = self.mant.magnitude();
        let scaled = m << lift as usize;
        let r = scaled.nth_root(k);
        let inexact = num_traits::pow(r.clone(), k as usize) != scaled;
        let err = if self.err.is_zero() {
            BigUint::zero()
        } else if m > &self.err {
            // |x^(1/k) − x̃^(1/k)| ≤ δ / (k·(x̃−δ)^((k−1)/k))
            let low = ((m - &self.err) << lift as usize).nth_root(k);
            if low.is_zero() {
                ((m + &self.err) << lift as usize).nth_root(k) + 1u32 + &r
            } else {
                let num = &self.err << lift as usize;
                let den = num_traits::pow(low, (k - 1) as usize) * k;
                ceil_div(&num, &den)
            }
        } else {
            // true value lies in [−R, R] around zero
            ((m + &self.err) << lift as usize).nth_root(k) + 1u32 + &r
        };
        Ok(FixedReal { mant: BigInt::from(r), prec: p, err: err + flag(inexact) })
    }

    /// `e^x` by argument halving, Taylor series and repeated squaring at
    /// extra working precision.
    pub fn exp(&self) -> Result<FixedReal, FixedError> {
        let p = self.prec;
        if self.err > pow2(p) {
            return Err(FixedError::ExpArgumentTooUncertain);
        }
        let int_part = (self.mant.magnitude() >> p as usize).to_u32().unwrap_or(u32::MAX);
        let halvings = 32 - int_part.leading_zeros() + 12;
        let guard = halvings + int_part.saturating_mul(3) / 2 + 24;
        let wp = p + guard;
        // r = x / 2^halvings, exact at the working precision
        let r = FixedReal { mant: &self.mant << (guard - halvings) as usize, prec: wp, err: BigUint::zero() };
        let mut sum = FixedReal::one(wp);
        let mut term = FixedReal::one(wp);
        let mut k = 1i64;
        loop {
            term = term.mul_impl(&r).div_int(k)?;
            sum = &sum + &term;
            if term.abs_upper_ulps() <= BigUint::one() {
                break;
            }
            k += 1;
        }
        // geometric tail after the last term, |r| < 2^-12
        sum.err += 2u32;
        for _ in 0..halvings {
            sum = sum.square();
        }
        let mut out = sum.with_prec(p);
        if !self.err.is_zero() {
            // e^(x̃+δ) − e^x̃ ≤ e^x̃ · 2|δ| for |δ| ≤ 1
            let spread = out.abs_upper_ulps() * &self.err * 2u32;
            out.err += ceil_shift(&spread, p) + 1u32;
        }
        Ok(out)
    }

    /// π by Machin's formula `16·atan(1/5) − 4·atan(1/239)`.
    pub fn pi(prec: u32) -> FixedReal {
        let guard = 32;
        let wp = prec + guard;
        let (a, ea) = atan_inv(5, wp);
        let (b, eb) = atan_inv(239, wp);
        let mant = a * 16 - b * 4;
        let err = BigUint::from(16 * ea + 4 * eb);
        FixedReal { mant, prec: wp, err }.with_prec(prec)
    }

    pub fn sqrt2(prec: u32) -> FixedReal {
        FixedReal::from_int(2, prec).sqrt().expect("2 > 0")
    }

    /// Nearest integer and `|x̃ − n|` in ulps.
    pub fn nearest_integer(&self) -> (BigInt, BigUint) {
        let (n, _) = round_shift(&self.mant, self.prec);
        let defect = (&self.mant - (&n << self.prec as usize)).magnitude().clone();
        (n, defect)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits();
        if bits == 0 {
            return 0.0;
        }
        let drop = bits.saturating_sub(60);
        let top = (&self.mant >> drop as usize).to_f64().unwrap_or(f64::NAN);
        top * (drop as f64 - self.prec as f64).exp2()
    }

    /// Decimal expansion rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits as usize);
        let (q, _) = round_shift(&(self.mant.abs() * scale), self.prec);
        let s = q.to_string();
        let sign = if self.mant.is_negative() && !q.is_zero() { "-" } else { "" };
        if digits == 0 {
            return format!("{sign}{s}");
        }
        let padded = format!("{:0>width$}", s, width = digits as usize + 1);
        let (int, frac) = padded.split_at(padded.len() - digits as usize);
        format!("{sign}{int}.{frac}")
    }

    /// The error radius `err·2^−prec` as a rounded-up scientific string.
    pub fn radius_string(&self) -> String {
        sci_upper(&self.err, self.prec)
    }

    /// Upper bound `|x̃| + err` as a rounded-up scientific string.
    pub fn abs_upper_string(&self) -> String {
        sci_upper(&self.abs_upper_ulps(), self.prec)
    }
}

fn log2_ulps(u: &BigUint) -> f64 {
    let bits = u.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let drop = bits.saturating_sub(60);
    let top = (u >> drop as usize).to_f64().unwrap_or(f64::NAN);
    top.log2() + drop as f64
}

/// `u·2^−prec` rounded up to two significant decimal digits, e.g. `"3.2e-45"`.
fn sci_upper(u: &BigUint, prec: u32) -> String {
    if u.is_zero() {
        return "0".to_string();
    }
    // choose k so that u·10^k/2^prec has at least two integer digits
    let lead = u.bits() as i64 - prec as i64;
    let k = (2.0 - lead as f64 * std::f64::consts::LOG10_2).ceil() as i64 + 1;
    let scaled = if k >= 0 {
        ceil_shift(&(u * num_traits::pow(BigUint::from(10u32), k as usize)), prec)
    } else {
        ceil_div(u, &(num_traits::pow(BigUint::from(10u32), (-k) as usize) << prec as usize))
    };
    let digits = scaled.to_string();
    let len = digits.len() as i64;
    // keep two significant digits, rounding up
    let keep: u32 = digits[..2].parse().expect("digits");
    let rest_nonzero = digits[2..].bytes().any(|b| b != b'0');
    let mut keep = keep + u32::from(rest_nonzero);
    let mut exp10 = len - 1 - k;
    if keep >= 100 {
        keep /= 10;
        exp10 += 1;
    }
    format!("{}.{}e{}", keep / 10, keep % 10, exp10)
}

/// `atan(1/n)·2^wp` as an integer with its error bound in ulps.
fn atan_inv(n: u32, wp: u32) -> (BigInt, u64) {
    let n2 = BigInt::from(n * n);
    // p_k = floor(2^wp / n^(2k+1)), exact because nested floors compose
    let mut p = (BigInt::one() << wp as usize) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        let t = &p / (2 * k + 1);
        if t.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        p /= &n2;
        k += 1;
    }
    // two ulps per truncated term plus the alternating tail
    (sum, 2 * k + 1)
}

impl fmt::Display for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20) as u32;
        write!(f, "{} ± {}", self.to_decimal(digits), self.radius_string())
    }
}

impl fmt::Debug for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FixedReal({} ± {}, {} bits)", self.to_decimal(30), self.radius_string(), self.prec)
    }
}

impl Add for &FixedReal {
    type Output = FixedReal;
    fn add(self, rhs: &FixedReal) -> FixedReal {
        self.check(rhs);
        FixedReal { mant: &self.mant + &rhs.mant, prec: self.prec, err: &self.err + &rhs.err }
    }
}

impl Sub for &FixedReal {
    type Output = FixedReal;
    fn sub(self, rhs: &FixedReal) -> FixedReal {
        self.check(rhs);
        FixedReal { mant: &self.mant - &rhs.mant, prec: self.prec, err: &self.err + &rhs.err }
    }
}

impl Mul for &FixedReal {
    type Output = FixedReal;
    fn mul(self, rhs: &FixedReal) -> FixedReal {
        self.mul_impl(rhs)
    }
}

impl Neg for &FixedReal {
    type Output = FixedReal;
    fn neg(self) -> FixedReal {
        FixedReal { mant: -&self.mant, prec: self.prec, err: self.err.clone() }
    }
}

/// The fixed-point operations by name, for dispatch from reports and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Exp,
    Cbrt,
}

/// Applies `op` to `x` (and `y` for the binary operations).
pub fn fixed_arith(x: &FixedReal, y: Option<&FixedReal>, op: FixedOp) -> Result<FixedReal, FixedError> {
    let rhs = || y.expect("binary operation needs a second operand");
    match op {
        FixedOp::Add => x.try_add(rhs()),
        FixedOp::Sub => {
            x.same_prec(rhs())?;
            Ok(x - rhs())
        }
        FixedOp::Mul => {
            x.same_prec(rhs())?;
            Ok(x * rhs())
        }
        FixedOp::Div => x.div(rhs()),
        FixedOp::Sqrt => x.sqrt(),
        FixedOp::Exp => x.exp(),
        FixedOp::Cbrt => x.cbrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(n: i64, d: i64, p: u32) -> FixedReal {
        FixedReal::from_rational(&Rational::new(n, d).unwrap(), p)
    }

    #[test]
    fn shifts_round_to_nearest_for_negatives() {
        assert_eq!(round_shift(&BigInt::from(-5), 1).0, BigInt::from(-2)); // -2.5 → -2 (ties up)
        assert_eq!(round_shift(&BigInt::from(-7), 1).0, BigInt::from(-3)); // -3.5 → -3
        assert_eq!(round_shift(&BigInt::from(-6), 2).0, BigInt::from(-1)); // -1.5 → -1
        assert_eq!(round_shift(&BigInt::from(-7), 2).0, BigInt::from(-2)); // -1.75 → -2
        assert_eq!(round_div(&BigInt::from(7), &BigInt::from(-2)).0, BigInt::from(-3));
    }

    #[test]
    fn sqrt_of_four_is_exact() {
        let r = FixedReal::from_int(4, 128).sqrt().unwrap();
        assert_eq!(r, FixedReal::from_int(2, 128));
        assert!(r.err_ulps() <= &BigUint::from(2u32));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let r = FixedReal::zero(128).exp().unwrap();
        assert_eq!(r.mantissa(), FixedReal::one(128).mantissa());
        assert!(r.err_ulps() <= &BigUint::from(2u32));
    }

    #[test]
    fn pi_digits() {
        let pi = FixedReal::pi(200);
        assert_eq!(
            pi.to_decimal(50),
            "3.14159265358979323846264338327950288419716939937511"
        );
        assert!(pi.err_ulps() <= &BigUint::from(2u32));
    }

    #[test]
    fn exp_small_and_large() {
        // e^1 and e^-40 to 40 places (mpmath)
        let e = FixedReal::one(192).exp().unwrap();
        assert_eq!(e.to_decimal(40), "2.7182818284590452353602874713526624977572");
        let tiny = FixedReal::from_int(-40, 192).exp().unwrap();
        assert_eq!(tiny.to_decimal(40), "0.0000000000000000042483542552915889953292");
    }

    #[test]
    fn exp_of_minus_pi_root_163_over_8() {
        let p = 128;
        let x = &(&FixedReal::pi(p) * &FixedReal::from_int(163, p).sqrt().unwrap()) * &FixedReal::one(p);
        let arg = -&x.div_int(8).unwrap();
        let v = arg.exp().unwrap();
        assert_eq!(v.to_decimal(20), "0.00664662382388684117");
    }

    #[test]
    fn cube_roots() {
        let c = FixedReal::from_int(16, 160).cbrt().unwrap();
        let back = c.powi(3);
        assert!((&back - &FixedReal::from_int(16, 160)).abs_below_pow2(-150));
        let neg = FixedReal::from_int(-27, 64).cbrt().unwrap();
        assert_eq!(neg, FixedReal::from_int(-3, 64));
    }

    #[test]
    fn division_and_errors() {
        let third = FixedReal::one(64).div(&FixedReal::from_int(3, 64)).unwrap();
        assert_eq!(third.to_decimal(18), "0.333333333333333333");
        assert_eq!(FixedReal::one(64).div(&FixedReal::zero(64)), Err(FixedError::DivisorNearZero));
        let fuzzy_zero = FixedReal::from_parts(BigInt::from(3), 64, BigUint::from(5u32));
        assert_eq!(FixedReal::one(64).div(&fuzzy_zero), Err(FixedError::DivisorNearZero));
        assert_eq!(FixedReal::from_int(-1, 64).sqrt(), Err(FixedError::NegativeArgument("even root")));
        assert_eq!(
            fixed_arith(&FixedReal::one(64), Some(&FixedReal::one(65)), FixedOp::Add),
            Err(FixedError::PrecisionMismatch(64, 65))
        );
    }

    #[test]
    fn three_valued_comparison() {
        let a = fx(1, 3, 64);
        let b = fx(1, 2, 64);
        assert_eq!(a.cmp_approx(&b), ApproxOrdering::Less);
        assert_eq!(b.cmp_approx(&a), ApproxOrdering::Greater);
        assert_eq!(a.cmp_approx(&a), ApproxOrdering::Indistinguishable);
    }

    #[test]
    fn formatting() {
        let x = fx(-1, 8, 64);
        assert_eq!(x.to_decimal(3), "-0.125");
        assert_eq!(FixedReal::from_parts(BigInt::zero(), 10, BigUint::from(1u32)).radius_string(), "9.8e-4");
        assert_eq!(FixedReal::from_parts(BigInt::zero(), 0, BigUint::from(123u32)).radius_string(), "1.3e2");
        assert_eq!(FixedReal::zero(8).radius_string(), "0");
    }
}
