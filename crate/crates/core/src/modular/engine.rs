use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::fixed::{FixedError, FixedReal};
use crate::catalog::{is_on_curve, paper_points, Coords, CurveId, Point2};
use crate::exact::{squarefree_decompose, Rational};
use crate::maps::{alpha_beta_2, cover_k3_to_k6, k1_to_k3, AbstractPair};

/// Extra bits carried internally on top of the reporting precision.
pub const GUARD_BITS: u32 = 32;

/// Default half-width of the `a3` scan in [`recover_pair`].
pub const DEFAULT_A_BOUND: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularError {
    #[error("d = {d}: {reason}")]
    InvalidDiscriminant { d: u64, reason: &'static str },
    #[error("precision {0} bits is below the minimum of 32")]
    PrecisionTooLow(u32),
    #[error(transparent)]
    Fixed(#[from] FixedError),
    #[error(
        "no integral pair on K3 ({near_integer} near-integer candidates, best defect 2^{best_defect_log2:.1}); \
         class number above one or precision too low"
    )]
    NoCandidate { near_integer: usize, best_defect_log2: f64 },
    #[error("several pairs on K3: {0:?}")]
    MultipleCandidates(Vec<(BigInt, BigInt)>),
    #[error("{what} is not integral: defect 2^{defect_log2:.1} exceeds 2^{threshold_log2}")]
    NotIntegral { what: &'static str, defect_log2: f64, threshold_log2: i64 },
    #[error("no tabulated labels for d = {0}")]
    NoLabels(u64),
}

/// `P = max(128, ⌈1.5·π√d/ln 2⌉ + 64)`.
pub fn default_precision(d: u64) -> u32 {
    let bits = 1.5 * std::f64::consts::PI * (d as f64).sqrt() / std::f64::consts::LN_2;
    128.max(bits.ceil() as u32 + 64)
}

/// `N = ⌈P·ln 2/(π√d)⌉ + 4`.
pub fn truncation_length(d: u64, prec: u32) -> u32 {
    let n = prec as f64 * std::f64::consts::LN_2 / (std::f64::consts::PI * (d as f64).sqrt());
    n.ceil() as u32 + 4
}

/// Everything fixed by the choice of `d` and precision.
#[derive(Debug, Clone)]
pub struct ModularContext {
    d: u64,
    prec: u32,
    wp: u32,
    n_terms: u32,
    /// `e^(−π√d)` at working precision.
    t: FixedReal,
    /// `e^(−π√d/8)`, computed directly rather than as a root of `t`.
    t_eighth: FixedReal,
}

impl ModularContext {
    pub fn new(d: u64, prec: Option<u32>) -> Result<Self, ModularError> {
        if d == 0 {
            return Err(ModularError::InvalidDiscriminant { d, reason: "d must be positive" });
        }
        if d % 8 != 3 {
            return Err(ModularError::InvalidDiscriminant { d, reason: "d must be 3 mod 8" });
        }
        let (s, _) = squarefree_decompose(&BigUint::from(d));
        if s != BigUint::from(1u32) {
            return Err(ModularError::InvalidDiscriminant { d, reason: "d must be squarefree" });
        }
        let prec = prec.unwrap_or_else(|| default_precision(d));
        if prec < 32 {
            return Err(ModularError::PrecisionTooLow(prec));
        }
        let wp = prec + GUARD_BITS;
        let arg = &FixedReal::pi(wp) * &FixedReal::from_int(d, wp).sqrt()?;
        let t = (-&arg).exp()?;
        let t_eighth = (-&arg.div_int(8)?).exp()?;
        Ok(ModularContext { d, prec, wp, n_terms: truncation_length(d, prec), t, t_eighth })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn working_prec(&self) -> u32 {
        self.wp
    }

    pub fn n_terms(&self) -> u32 {
        self.n_terms
    }

    pub fn t(&self) -> &FixedReal {
        &self.t
    }

    /// Recognition threshold exponent: defects must stay below `2^−(P/4)`.
    pub fn integer_threshold_log2(&self) -> i64 {
        -((self.prec / 4) as i64)
    }

    /// Acceptance exponent for residuals: `2^−(P/2)`.
    pub fn residual_threshold_log2(&self) -> i64 {
        -((self.prec / 2) as i64)
    }
}

/// `W` at working precision.
fn w_internal(ctx: &ModularContext) -> Result<FixedReal, ModularError> {
    let wp = ctx.wp;
    let one = FixedReal::one(wp);
    let mut prod = one.clone();
    let mut tn = one.clone();
    for n in 1..=ctx.n_terms {
        tn = &tn * &ctx.t;
        let factor = if n % 2 == 0 { &one + &tn } else { &one - &tn };
        prod = &prod * &factor.powi(3);
    }
    let mut w = (&ctx.t_eighth * &prod).mul_int(4);
    // |∏_{n>N} (1 ± tⁿ)³ − 1| ≤ 24·t^(N+1) for t < 1/2
    let tail = &tn * &ctx.t;
    let spread = w.abs_upper_ulps() * tail.abs_upper_ulps() * 24u32;
    let tail_ulps = (spread >> wp as usize) + 1u32;
    w = FixedReal::from_parts(w.mantissa().clone(), wp, w.err_ulps() + tail_ulps);
    Ok(w)
}

/// `W = 4·t^(1/8)·∏(1 + (−1)ⁿtⁿ)³` with `t = e^(−π√d)`, rounded to `P` bits.
pub fn schlafli_w(ctx: &ModularContext) -> Result<FixedReal, ModularError> {
    Ok(w_internal(ctx)?.with_prec(ctx.prec))
}

/// `(U, j)` at working precision with `U = W⁸/16`,
/// `j = (U³ − 48U² + 768U − 4096)/U = (U − 16)³/U`.
fn u_and_j(w: &FixedReal) -> Result<(FixedReal, FixedReal), ModularError> {
    let wp = w.prec();
    let u = w.powi(8).div_int(16)?;
    let num = (&u - &FixedReal::from_int(16, wp)).powi(3);
    Ok((u.clone(), num.div(&u)?))
}

/// Nearest integer to `x`, refused unless `|x − n|` is certainly below
/// `2^threshold_log2`.
fn recognize(x: &FixedReal, threshold_log2: i64, what: &'static str) -> Result<BigInt, ModularError> {
    let (n, defect) = x.nearest_integer();
    let bound = defect + x.err_ulps();
    let fits = threshold_log2 + x.prec() as i64 >= 0
        && bound < BigUint::from(1u32) << (threshold_log2 + x.prec() as i64) as usize;
    if fits {
        Ok(n)
    } else {
        let defect_log2 = ulps_log2(&bound) - x.prec() as f64;
        Err(ModularError::NotIntegral { what, defect_log2, threshold_log2 })
    }
}

fn ulps_log2(u: &BigUint) -> f64 {
    if u.is_zero() {
        return f64::NEG_INFINITY;
    }
    let drop = u.bits().saturating_sub(60);
    (u >> drop as usize).to_f64().unwrap_or(f64::NAN).log2() + drop as f64
}

pub fn j_invariant(ctx: &ModularContext) -> Result<BigInt, ModularError> {
    let (_, j) = u_and_j(&w_internal(ctx)?)?;
    recognize(&j, ctx.integer_threshold_log2(), "j")
}

/// Integer cube root when `n` is a perfect cube.
pub fn exact_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

/// Recovers `(a3, b3)` from `W` with the default scan bound.
pub fn recover_pair(ctx: &ModularContext) -> Result<(BigInt, BigInt), ModularError> {
    recover_pair_bounded(ctx, DEFAULT_A_BOUND)
}

/// Integer pairs `(a, b)` with `x³ − 2a·x² + 2b·x − c = 0` on `curve`.
struct Scan {
    found: Vec<(BigInt, BigInt)>,
    near_integer: usize,
    best_defect_log2: f64,
}

/// Writes `b = c0 + a·x` with `c0 = (c − x³)/(2x)`; scans `a ∈ [−A, A]`,
/// keeps `a` whose `b` is within `2^−(P/4)` of an integer, and of those the
/// pairs lying on `curve`.
///
/// The scan itself runs on 64-bit fractional approximations; each survivor
/// is filtered modulo a prime, re-checked at full precision and then by
/// exact evaluation.
fn scan_pairs(ctx: &ModularContext, x: &FixedReal, c: i64, curve: CurveId, a_bound: i64) -> Result<Scan, ModularError> {
    let wp = ctx.wp;
    let c0 = (&FixedReal::from_int(c, wp) - &x.powi(3)).div(&x.mul_int(2))?;
    let to_q64 = |v: &FixedReal| v.with_prec(64).mantissa().to_i128().expect("fits in 64 integer bits");
    let (c0_q, x_q) = (to_q64(&c0), to_q64(x));
    let thr = ctx.integer_threshold_log2();
    let screen: i128 = if thr < -40 { 1 << 24 } else { (1i128 << (64 + thr)) + (1 << 21) };
    let mut best = i128::MAX;
    let mut survivors = Vec::new();
    for a in -a_bound..=a_bound {
        let b = c0_q + a as i128 * x_q;
        // low 64 bits read as signed: distance to the nearest integer
        let frac = (b as i64) as i128;
        best = best.min(frac.abs());
        if frac.abs() <= screen {
            survivors.push((a, (b - frac) >> 64));
        }
    }
    let modp = CurveMod::new(curve);
    let mut found = Vec::new();
    for &(a, b) in &survivors {
        if !modp.vanishes(a as i128, b) {
            continue;
        }
        let Ok(b_full) = recognize(&(&c0 + &x.mul_int(a)), thr, "b") else { continue };
        let p = Point2 { u: Rational::from(a), v: Rational::from(b_full.clone()) };
        if is_on_curve(curve, &p) {
            found.push((BigInt::from(a), b_full));
        }
    }
    Ok(Scan {
        found,
        near_integer: survivors.len(),
        best_defect_log2: (best.max(1) as f64).log2() - 64.0,
    })
}

/// `S = √2·(W/√2)^(1/3)` at the precision of `w`.
fn s_from_w(w: &FixedReal) -> Result<FixedReal, ModularError> {
    let sqrt2 = FixedReal::sqrt2(w.prec());
    Ok(&sqrt2 * &w.div(&sqrt2)?.cbrt()?)
}

/// Scans `a3` against `W` and keeps the candidate on K3.
///
/// When `W` alone admits several K3 points (at `d = 3`, `W = 2` makes every
/// `b3 = 2a3` integral), the same scan on `S` recovers `(α3, β3)` on K1 and
/// only the image of that point survives.
pub fn recover_pair_bounded(ctx: &ModularContext, a_bound: i64) -> Result<(BigInt, BigInt), ModularError> {
    let w = w_internal(ctx)?;
    let mut scan = scan_pairs(ctx, &w, 8, CurveId::K3, a_bound)?;
    if scan.found.len() > 1 {
        let greek = scan_pairs(ctx, &s_from_w(&w)?, 4, CurveId::K1, a_bound)?;
        let images: Vec<(BigInt, BigInt)> = greek
            .found
            .iter()
            .map(|(a, b)| {
                let img = k1_to_k3(&AbstractPair::new(a.clone(), b.clone()));
                (int_of(&img.first), int_of(&img.second))
            })
            .collect();
        let narrowed: Vec<_> = scan.found.iter().filter(|p| images.contains(p)).cloned().collect();
        if !narrowed.is_empty() {
            scan.found = narrowed;
        }
    }
    match scan.found.len() {
        1 => Ok(scan.found.pop().expect("one element")),
        0 => Err(ModularError::NoCandidate {
            near_integer: scan.near_integer,
            best_defect_log2: scan.best_defect_log2,
        }),
        _ => Err(ModularError::MultipleCandidates(scan.found)),
    }
}

/// A curve reduced modulo a 61-bit prime, for cheap rejection before the
/// exact test.
struct CurveMod {
    terms: Vec<(u32, u32, u128)>,
}

const PRIME: u128 = (1 << 61) - 1;

impl CurveMod {
    fn new(curve: CurveId) -> Self {
        let poly = crate::catalog::defining_poly(curve);
        let p = BigInt::from(PRIME);
        let terms = poly
            .terms()
            .map(|(&(i, j), c)| {
                let r: BigInt = ((c % &p) + &p) % &p;
                (i, j, r.to_u128().expect("reduced"))
            })
            .collect();
        CurveMod { terms }
    }

    fn vanishes(&self, x: i128, y: i128) -> bool {
        let red = |v: i128| v.rem_euclid(PRIME as i128) as u128;
        let (x, y) = (red(x), red(y));
        let pow = |mut b: u128, mut e: u32| {
            let mut acc = 1u128;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % PRIME;
                }
                b = b * b % PRIME;
                e >>= 1;
            }
            acc
        };
        let mut s = 0u128;
        for &(i, j, c) in &self.terms {
            s = (s + c * pow(x, i) % PRIME * pow(y, j)) % PRIME;
        }
        s == 0
    }
}

/// Tabulated invariants for one discriminant: `(a3, b3)` from the K3 table
/// and `(α3, β3)` from the K1 table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLabels {
    pub a3: BigInt,
    pub b3: BigInt,
    pub alpha3: BigInt,
    pub beta3: BigInt,
}

impl TowerLabels {
    pub fn from_catalog(d: u64) -> Option<TowerLabels> {
        let find = |c: CurveId| {
            paper_points(c).iter().find(|r| r.d.map(u64::from) == Some(d)).and_then(|r| match &r.pt {
                Coords::Rational(p) => Some((p.u.to_integer()?, p.v.to_integer()?)),
                Coords::Quadratic(_) => None,
            })
        };
        let (a3, b3) = find(CurveId::K3)?;
        let (alpha3, beta3) = find(CurveId::K1)?;
        Some(TowerLabels { a3, b3, alpha3, beta3 })
    }
}

/// The whole tower evaluated at one `d`.
#[derive(Debug, Clone)]
pub struct TowerReport {
    pub d: u64,
    pub prec: u32,
    pub w: FixedReal,
    pub t: FixedReal,
    pub u: FixedReal,
    pub s: FixedReal,
    pub v: FixedReal,
    pub z: FixedReal,
    pub a3: BigInt,
    pub b3: BigInt,
    pub a2: BigInt,
    pub b2: BigInt,
    pub alpha2: BigInt,
    pub beta2: BigInt,
    pub alpha3: BigInt,
    pub beta3: BigInt,
    pub j: BigInt,
    pub gamma2: Option<BigInt>,
    /// Residual per cubic, keyed by the variable it is a cubic in.
    pub residuals: BTreeMap<&'static str, FixedReal>,
    pub threshold_log2: i64,
}

impl TowerReport {
    /// Residuals whose upper bound is not below `2^−(P/2)`.
    pub fn failures(&self) -> Vec<&'static str> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.abs_below_pow2(self.threshold_log2))
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn int_of(r: &Rational) -> BigInt {
    r.to_integer().expect("integral image of integral labels")
}

/// `x³ − c2·x² + c1·x − c0` with integer coefficients at working precision.
fn cubic(x: &FixedReal, c2: &BigInt, c1: &BigInt, c0: &BigInt) -> FixedReal {
    let wp = x.prec();
    let k = |c: &BigInt| FixedReal::from_int(c.clone(), wp);
    let x2 = x.square();
    let x3 = &x2 * x;
    &(&(&x3 - &(&x2 * &k(c2))) + &(x * &k(c1))) - &k(c0)
}

pub fn verify_tower(ctx: &ModularContext, labels: &TowerLabels) -> Result<TowerReport, ModularError> {
    let wp = ctx.wp;
    let w = w_internal(ctx)?;
    let (u, j_fx) = u_and_j(&w)?;
    let j = recognize(&j_fx, ctx.integer_threshold_log2(), "j")?;
    let gamma2 = exact_cbrt(&j);

    let t = w.square().div_int(2)?;
    let phi = w.div(&FixedReal::sqrt2(wp))?;
    let eps = phi.cbrt()?;
    let s = s_from_w(&w)?;
    let z = eps.square();
    // V = φ^(8/3) = ε⁸
    let v = z.powi(4);

    let pair3 = AbstractPair::new(labels.a3.clone(), labels.b3.clone());
    let p2 = cover_k3_to_k6(&pair3);
    let (a2, b2) = (int_of(&p2.first), int_of(&p2.second));
    let greek3 = AbstractPair::new(labels.alpha3.clone(), labels.beta3.clone());
    let g2 = alpha_beta_2(&greek3);
    let (alpha2, beta2) = (int_of(&g2.first), int_of(&g2.second));

    let two = BigInt::from(2);
    let mut residuals = BTreeMap::new();
    residuals.insert("U", cubic(&u, &BigInt::from(48), &(BigInt::from(768) - &j), &BigInt::from(4096)));
    residuals.insert("W", cubic(&w, &(&two * &labels.a3), &(&two * &labels.b3), &BigInt::from(8)));
    residuals.insert("T", cubic(&t, &(&two * &a2), &(&two * &b2), &BigInt::from(8)));
    if ctx.d % 3 == 0 {
        // only V³ − 16 = 0 survives when 3 | d
        residuals.insert("V", cubic(&v, &BigInt::zero(), &BigInt::zero(), &BigInt::from(16)));
    } else {
        let g = match &gamma2 {
            Some(g) => g.clone(),
            None => j_fx.cbrt()?.nearest_integer().0,
        };
        residuals.insert("V", cubic(&v, &BigInt::zero(), &(-g), &BigInt::from(16)));
        residuals.insert("Z", cubic(&z, &(&two * &alpha2), &(&two * &beta2), &two));
        residuals.insert("S", cubic(&s, &(&two * &labels.alpha3), &(&two * &labels.beta3), &BigInt::from(4)));
    }
    let p = ctx.prec;
    let residuals = residuals.into_iter().map(|(k, r)| (k, r.with_prec(p))).collect();
    Ok(TowerReport {
        d: ctx.d,
        prec: p,
        w: w.with_prec(p),
        t: t.with_prec(p),
        u: u.with_prec(p),
        s: s.with_prec(p),
        v: v.with_prec(p),
        z: z.with_prec(p),
        a3: labels.a3.clone(),
        b3: labels.b3.clone(),
        a2,
        b2,
        alpha2,
        beta2,
        alpha3: labels.alpha3.clone(),
        beta3: labels.beta3.clone(),
        j,
        gamma2,
        residuals,
        threshold_log2: ctx.residual_threshold_log2(),
    })
}

/// `σσ₁σ₂ − √2` at `τ = i`, i.e. `q = e^(−π)`, where each factor is a real
/// positive series:
/// `σ = q^(−1/24)∏(1+q^(2n−1))`, `σ₁ = q^(−1/24)∏(1−q^(2n−1))`,
/// `σ₂ = √2·q^(1/12)∏(1+q^(2n))`.
pub fn weber_product_selftest(prec: u32) -> Result<FixedReal, ModularError> {
    let wp = prec + 16;
    let pi = FixedReal::pi(wp);
    let q = (-&pi).exp()?;
    let one = FixedReal::one(wp);
    // q^n < 2^−(wp+8) once n > (wp+8)·ln2/π
    let n_terms = ((wp + 8) as f64 * std::f64::consts::LN_2 / std::f64::consts::PI).ceil() as u32 + 2;
    let (mut odd_plus, mut odd_minus, mut even_plus) = (one.clone(), one.clone(), one.clone());
    let mut qn = one.clone();
    for n in 1..=2 * n_terms {
        qn = &qn * &q;
        if n % 2 == 1 {
            odd_plus = &odd_plus * &(&one + &qn);
            odd_minus = &odd_minus * &(&one - &qn);
        } else {
            even_plus = &even_plus * &(&one + &qn);
        }
    }
    // neglected factors are within 4·q^(2N+1) of one in total
    let tail = (&qn * &q).abs_upper_ulps() * 4u32 + 1u32;
    let widen = |x: FixedReal| {
        let e = x.err_ulps() + &tail * 2u32;
        FixedReal::from_parts(x.mantissa().clone(), wp, e)
    };
    let q_m24 = pi.div_int(24)?.exp()?;
    let sigma = &q_m24 * &widen(odd_plus);
    let sigma1 = &q_m24 * &widen(odd_minus);
    let sigma2 = &(&FixedReal::sqrt2(wp) * &(-&pi.div_int(12)?).exp()?) * &widen(even_plus);
    let defect = &(&(&sigma * &sigma1) * &sigma2) - &FixedReal::sqrt2(wp);
    Ok(defect.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        assert!(matches!(ModularContext::new(7, None), Err(ModularError::InvalidDiscriminant { .. })));
        assert!(matches!(ModularContext::new(99, None), Err(ModularError::InvalidDiscriminant { .. })));
        assert!(matches!(ModularContext::new(0, None), Err(ModularError::InvalidDiscriminant { .. })));
        assert_eq!(ModularContext::new(11, Some(8)).unwrap_err(), ModularError::PrecisionTooLow(8));
        assert_eq!(default_precision(163), 151);
        assert_eq!(default_precision(3), 128);
    }

    #[test]
    fn w_at_three_is_two() {
        let ctx = ModularContext::new(3, None).unwrap();
        let w = schlafli_w(&ctx).unwrap();
        let gap = &w - &FixedReal::from_int(2, ctx.prec());
        assert!(gap.abs_below_pow2(-(ctx.prec() as i64 - 4)), "{w:?}");
    }

    #[test]
    fn w_digits() {
        // real roots of W³ − 2a3W² + 2b3W − 8 (mpmath, 30 digits)
        let cases = [(11, "1.087378025384152723141711944"), (163, "0.026586495295547364366067665")];
        for (d, want) in cases {
            let w = schlafli_w(&ModularContext::new(d, None).unwrap()).unwrap();
            assert_eq!(w.to_decimal(27), want, "d = {d}");
        }
    }

    #[test]
    fn pairs_and_j() {
        let ctx = ModularContext::new(163, None).unwrap();
        assert_eq!(recover_pair(&ctx).unwrap(), (BigInt::from(-17), BigInt::from(150)));
        assert_eq!(j_invariant(&ctx).unwrap(), "-262537412640768000".parse::<BigInt>().unwrap());
        let ctx = ModularContext::new(11, None).unwrap();
        assert_eq!(recover_pair(&ctx).unwrap(), (BigInt::from(-1), BigInt::from(2)));
        assert_eq!(j_invariant(&ctx).unwrap(), BigInt::from(-32768));
        let ctx = ModularContext::new(3, None).unwrap();
        assert_eq!(recover_pair(&ctx).unwrap(), (BigInt::from(3), BigInt::from(6)));
        assert_eq!(j_invariant(&ctx).unwrap(), BigInt::zero());
    }

    #[test]
    fn class_number_two_has_no_pair() {
        // h(−35) = 2, and 35 ≡ 3 mod 8
        let ctx = ModularContext::new(35, None).unwrap();
        assert!(matches!(recover_pair_bounded(&ctx, 1000), Err(ModularError::NoCandidate { .. })));
    }

    #[test]
    fn tower_at_163() {
        let ctx = ModularContext::new(163, None).unwrap();
        let labels = TowerLabels::from_catalog(163).unwrap();
        assert_eq!((labels.alpha3.clone(), labels.beta3.clone()), (BigInt::from(2), BigInt::from(6)));
        let rep = verify_tower(&ctx, &labels).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.residuals.len(), 6);
        assert_eq!(rep.gamma2, Some(BigInt::from(-640320)));
        assert_eq!(rep.s.to_decimal(5), "0.37604");
    }

    #[test]
    fn tower_at_three() {
        let ctx = ModularContext::new(3, None).unwrap();
        let rep = verify_tower(&ctx, &TowerLabels::from_catalog(3).unwrap()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.residuals.keys().copied().collect::<Vec<_>>(), ["T", "U", "V", "W"]);
        assert_eq!(rep.gamma2, Some(BigInt::zero()));
    }

    #[test]
    fn six_discriminants() {
        let mut last_w: Option<FixedReal> = None;
        for d in [3u64, 11, 19, 43, 67, 163] {
            let ctx = ModularContext::new(d, None).unwrap();
            let labels = TowerLabels::from_catalog(d).unwrap();
            assert_eq!(recover_pair(&ctx).unwrap(), (labels.a3.clone(), labels.b3.clone()), "d = {d}");
            let rep = verify_tower(&ctx, &labels).unwrap();
            assert!(rep.passed(), "d = {d}: {:?}", rep.failures());
            assert!(rep.gamma2.is_some(), "d = {d}");
            if let Some(prev) = &last_w {
                assert_eq!(rep.w.with_prec(128).cmp_approx(prev), crate::modular::ApproxOrdering::Less);
            }
            last_w = Some(rep.w.with_prec(128));
        }
    }

    #[test]
    fn selftest_small() {
        let r = weber_product_selftest(64).unwrap();
        assert!(r.abs_below_pow2(-56), "{r:?}");
    }
}
