use std::collections::BTreeSet;

use curve_atlas::catalog::{defining_poly, ks_rhs, CurveId, Point2};
use curve_atlas::exact::{QuadRat, Rational};
use curve_atlas::maps::{alpha_beta_2, cover_k3_to_k6, k1_to_k3, k2_to_k6, AbstractPair};
use curve_atlas::modular::{
    verify_tower, FixedError, FixedReal, ModularContext, TowerLabels,
};
use curve_atlas::search::search_ks;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn quad(m: i64) -> impl Strategy<Value = QuadRat> {
    (rational(), rational()).prop_map(move |(a, b)| QuadRat::new(m, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reciprocal_and_square_root(x in rational()) {
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.recip().unwrap(), Rational::one());
        }
        prop_assert_eq!((&x * &x).sqrt_exact(), Some(x.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_is_a_field_automorphism(x in quad(17), y in quad(17)) {
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        prop_assert_eq!((&x * &y).norm(), &x.norm() * &y.norm());
    }

    #[test]
    fn curve_polynomials_commute_with_conjugation(x in quad(41), y in quad(41)) {
        for c in [CurveId::K1, CurveId::K3] {
            let f = defining_poly(c);
            prop_assert_eq!(f.eval(&x, &y).conj(), f.eval(&x.conj(), &y.conj()));
        }
    }

    #[test]
    fn covering_square_commutes(a in rational(), b in rational()) {
        let p = AbstractPair::new(a, b);
        prop_assert_eq!(cover_k3_to_k6(&k1_to_k3(&p)), k2_to_k6(&alpha_beta_2(&p)));
    }
}

#[derive(Debug, Clone)]
enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Cbrt(Box<Expr>),
    Exp(Box<Expr>),
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = (-50i64..50, 1i64..40).prop_map(|(n, d)| Expr::Leaf(n, d));
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(a.into(), b.into())),
            inner.clone().prop_map(|a| Expr::Sqrt(a.into())),
            inner.clone().prop_map(|a| Expr::Cbrt(a.into())),
            inner.prop_map(|a| Expr::Exp(a.into())),
        ]
    })
}

fn eval(e: &Expr, p: u32) -> Result<FixedReal, FixedError> {
    Ok(match e {
        Expr::Leaf(n, d) => FixedReal::from_rational(&Rational::new(*n, *d).unwrap(), p),
        Expr::Add(a, b) => &eval(a, p)? + &eval(b, p)?,
        Expr::Sub(a, b) => &eval(a, p)? - &eval(b, p)?,
        Expr::Mul(a, b) => &eval(a, p)? * &eval(b, p)?,
        Expr::Div(a, b) => eval(a, p)?.div(&eval(b, p)?)?,
        Expr::Sqrt(a) => eval(a, p)?.abs().sqrt()?,
        Expr::Cbrt(a) => eval(a, p)?.cbrt()?,
        Expr::Exp(a) => {
            let x = eval(a, p)?;
            if !x.abs_below_pow2(3) {
                return Err(FixedError::ExpArgumentTooUncertain);
            }
            x.exp()?
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The P-bit value lies within its own bound of the 2P-bit value.
    #[test]
    fn error_bounds_are_sound(e in expr()) {
        let p = 96;
        let (Ok(lo), Ok(hi)) = (eval(&e, p), eval(&e, 2 * p)) else {
            return Ok(());
        };
        let lifted = lo.with_prec(2 * p);
        let gap = (lifted.mantissa() - hi.mantissa()).abs();
        let allowed = BigInt::from(lifted.err_ulps() + hi.err_ulps());
        prop_assert!(gap <= allowed, "{:?} vs {:?}", lo, hi);
    }
}

#[test]
fn partition_counts_agree() {
    let sets: Vec<BTreeSet<String>> = [1, 4, 16]
        .into_iter()
        .map(|k| search_ks(40, k).unwrap().found.iter().map(|r| r.pt.to_string()).collect())
        .collect();
    assert_eq!(sets[0], sets[1]);
    assert_eq!(sets[0], sets[2]);
}

/// Random `z = p/q` inside the bound are on the emitted list exactly when
/// `f(z)` is a square.
#[test]
fn completeness_audit() {
    let h = 60i64;
    let found: BTreeSet<Point2<Rational>> = search_ks(h as u64, 4).unwrap().points().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let z = Rational::new(rng.gen_range(-h..=h), rng.gen_range(1..=h)).unwrap();
        let listed = found.iter().any(|p| p.u == z);
        let root = ks_rhs(&z).sqrt_exact();
        assert_eq!(listed, root.is_some(), "z = {z}");
        if let Some(w) = root {
            assert!(found.contains(&Point2 { u: z.clone(), v: w.clone() }));
            assert!(found.contains(&Point2 { u: z, v: -w }));
        }
    }
}

/// Doubling P shrinks every residual bound by at least `2^(P/2 − 4)`.
#[test]
fn residuals_shrink_with_precision() {
    let labels = TowerLabels::from_catalog(67).unwrap();
    let p = 160;
    let lo = verify_tower(&ModularContext::new(67, Some(p)).unwrap(), &labels).unwrap();
    let hi = verify_tower(&ModularContext::new(67, Some(2 * p)).unwrap(), &labels).unwrap();
    for (k, r) in &lo.residuals {
        let gain = r.abs_upper_log2() - hi.residuals[k].abs_upper_log2();
        assert!(gain >= (p / 2 - 4) as f64, "{k}: gain 2^{gain:.1}");
    }
}
