//! Coverings and birational maps between the curves.
//!
//! Every map is a rational map of the affine plane and accepts off-curve
//! input; the on-curve guarantees only hold for on-curve input. Maps with
//! denominators report the vanishing factor when evaluated outside their
//! domain.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::catalog::{is_on_curve, ks_rhs, CurveId, Point2};
use crate::exact::{BivarPoly, ExactError, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapId {
    K3toK6,
    K1toK2,
    K1toK3,
    K2toK6,
    K1toKs,
    KstoK3,
    K3toKs,
}

impl MapId {
    pub const ALL: [MapId; 7] = [
        MapId::K3toK6,
        MapId::K1toK2,
        MapId::K1toK3,
        MapId::K2toK6,
        MapId::K1toKs,
        MapId::KstoK3,
        MapId::K3toKs,
    ];

    pub fn endpoints(self) -> (CurveId, CurveId) {
        use CurveId::*;
        match self {
            MapId::K3toK6 => (K3, K6),
            MapId::K1toK2 => (K1, K2),
            MapId::K1toK3 => (K1, K3),
            MapId::K2toK6 => (K2, K6),
            MapId::K1toKs => (K1, Ks),
            MapId::KstoK3 => (Ks, K3),
            MapId::K3toKs => (K3, Ks),
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = self.endpoints();
        write!(f, "{s}->{t}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("{map} undefined: {} vanishes", vanishing.join(", "))]
    Domain { map: MapId, vanishing: Vec<String> },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A pair of invariants such as `(a3, b3)`, `(α3, β3)`, `(α2, β2)` or
/// `(a2, b2)`, independent of any curve's coordinate naming.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractPair {
    pub first: Rational,
    pub second: Rational,
}

impl AbstractPair {
    pub fn new(first: impl Into<Rational>, second: impl Into<Rational>) -> Self {
        AbstractPair { first: first.into(), second: second.into() }
    }

    pub fn from_point(p: &Point2<Rational>) -> Self {
        AbstractPair { first: p.u.clone(), second: p.v.clone() }
    }

    pub fn to_point(&self) -> Point2<Rational> {
        Point2 { u: self.first.clone(), v: self.second.clone() }
    }
}

impl fmt::Display for AbstractPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// `(k, u, v)` with `b2 = k(a2−1)+2`, `u = k/2 − (a2+1)`, `v = (a2+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellTriple {
    pub k: Rational,
    pub u: Rational,
    pub v: Rational,
}

impl PellTriple {
    /// `u² − 2v²`, equal to 1 on K6.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - Rational::from(2) * (&self.v * &self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PellParams {
    Triple(PellTriple),
    /// `a2 = 1`: the slope `k` is undefined, membership is read off G.
    NoSlope { on_k6: bool },
}

fn int(n: i64) -> Rational {
    Rational::from(n)
}

fn half(r: Rational) -> Rational {
    r.checked_div(&int(2)).expect("2 is nonzero")
}

/// `a2 = a3² − b3`, `2 b2 = b3² − 8 a3`.
pub fn cover_k3_to_k6(p: &AbstractPair) -> AbstractPair {
    let (a3, b3) = (&p.first, &p.second);
    AbstractPair { first: a3 * a3 - b3, second: half(b3 * b3 - int(8) * a3) }
}

pub fn pell_params(p: &AbstractPair) -> PellParams {
    let (a2, b2) = (&p.first, &p.second);
    let am1 = a2 - int(1);
    match (b2 - int(2)).checked_div(&am1) {
        Ok(k) => {
            let ap1 = a2 + int(1);
            let u = half(k.clone()) - &ap1;
            PellParams::Triple(PellTriple { k, u, v: half(ap1) })
        }
        Err(_) => PellParams::NoSlope { on_k6: is_on_curve(CurveId::K6, &p.to_point()) },
    }
}

/// The quartic `z⁴ − 2a2 z² − 8z + (a2² − 2b2)` at `z = a3`, with `(a2, b2)`
/// the image of `(a3, b3)`. It vanishes identically.
pub fn euler_resolvent_check(p: &AbstractPair) -> bool {
    let z = &p.first;
    let AbstractPair { first: a2, second: b2 } = cover_k3_to_k6(p);
    let val = z.pow(4) - int(2) * &a2 * z.pow(2) - int(8) * z + (&a2 * &a2 - int(2) * b2);
    val.is_zero()
}

/// `α2 = α3² − β3`, `2β2 = β3² − 4α3`.
pub fn alpha_beta_2(p: &AbstractPair) -> AbstractPair {
    let (a, b) = (&p.first, &p.second);
    AbstractPair { first: a * a - b, second: half(b * b - int(4) * a) }
}

/// K1 → K2 in curve coordinates: `x = α2`, `y = β2 − 2α2²`.
pub fn cover_k1_to_k2(p: &AbstractPair) -> Point2<Rational> {
    let AbstractPair { first: a2, second: b2 } = alpha_beta_2(p);
    let y = &b2 - int(2) * (&a2 * &a2);
    Point2 { u: a2, v: y }
}

/// `a3 = 2α3³ − 3α3β3 + 3`, `b3 = β3³ − 6α3β3 + 6`.
pub fn k1_to_k3(p: &AbstractPair) -> AbstractPair {
    let (a, b) = (&p.first, &p.second);
    let ab = a * b;
    AbstractPair {
        first: int(2) * a.pow(3) - int(3) * &ab + int(3),
        second: b.pow(3) - int(6) * &ab + int(6),
    }
}

/// Takes the `(α2, β2)` parameter pair, not K2's `(x, y)`.
pub fn k2_to_k6(p: &AbstractPair) -> AbstractPair {
    let (a, b) = (&p.first, &p.second);
    let ab = a * b;
    AbstractPair {
        first: int(4) * a.pow(3) - int(6) * &ab + int(3),
        second: int(4) * b.pow(3) - int(12) * &ab + int(6),
    }
}

/// `z = β3/α3² − 1`, `w = 4(z−2)t − 2(3z²−2z−1)` with `t = 1/α3³`.
pub fn k1_to_ks(p: &AbstractPair) -> Result<Point2<Rational>, MapError> {
    let (a, b) = (&p.first, &p.second);
    if a.is_zero() {
        return Err(MapError::Domain { map: MapId::K1toKs, vanishing: vec!["alpha3".into()] });
    }
    let z = b.checked_div(&a.pow(2))? - int(1);
    let t = a.pow(3).recip()?;
    let w = int(4) * (&z - int(2)) * t - int(2) * (int(3) * z.pow(2) - int(2) * &z - int(1));
    Ok(Point2 { u: z, v: w })
}

struct MapPolys {
    ks_x_num: BivarPoly,
    ks_den: BivarPoly,
    p8: BivarPoly,
    k3_z_num: BivarPoly,
    k3_z_den: BivarPoly,
    w_den_factors: Vec<(&'static str, BivarPoly, u32)>,
    p12: BivarPoly,
}

const KS_DEN_SRC: &str = "z^4+4z^3-2z^2-12z+1";
const K3_Z_DEN_SRC: &str = "2x^4+2x^3-3x^2y-2xy+6x-y+2";
const P8_SRC: &str = "2z^5w+10z^4w+36z^3w+68z^2w+10zw-30w\
    -z^8+60z^6+192z^5+82z^4-128z^3+172z^2+64z+7";
const P12_SRC: &str = "4x^12+252x^11-24x^10y+156x^10-622x^9y+15x^8y^2+440x^9-514x^8y\
    +322x^7y^2-x^6y^3+1256x^8-708x^7y+288x^6y^2-21x^5y^3+1536x^7-620x^6y\
    +310x^5y^2-19x^4y^3+1344x^6-716x^5y+64x^4y^2-20x^3y^3+440x^5-640x^4y\
    +22x^3y^2-7x^2y^3-12x^4-316x^3y-8x^2y^2-3xy^3-124x^3-140x^2y-6xy^2\
    -y^3-92x^2-22xy+y^2-16x+2y";

fn polys() -> &'static MapPolys {
    static POLYS: OnceLock<MapPolys> = OnceLock::new();
    POLYS.get_or_init(|| {
        let zw = |s: &str| BivarPoly::parse(s, ('z', 'w')).expect("built-in map polynomial");
        let xy = |s: &str| BivarPoly::parse(s, ('x', 'y')).expect("built-in map polynomial");
        MapPolys {
            ks_x_num: zw("z^4+8z^3+2wz+18z^2+6w-3"),
            ks_den: zw(KS_DEN_SRC),
            p8: zw(P8_SRC),
            k3_z_num: xy("4x^3-4xy-y^2+4x+4"),
            k3_z_den: xy(K3_Z_DEN_SRC),
            w_den_factors: vec![
                ("x-1", xy("x-1"), 1),
                ("x^2+1", xy("x^2+1"), 1),
                ("x^2-2x-1", xy("x^2-2x-1"), 1),
                ("x^2+2x+3", xy("x^2+2x+3"), 1),
                ("(x+1)^5", xy("x+1"), 5),
            ],
            p12: xy(P12_SRC),
        }
    })
}

/// The degree-8 numerator polynomial of the Ks → K3 map.
pub fn p8() -> &'static BivarPoly {
    &polys().p8
}

/// The degree-12 numerator polynomial of the K3 → Ks map.
pub fn p12() -> &'static BivarPoly {
    &polys().p12
}

/// Ks → K3:
/// `x = −(z⁴+8z³+2wz+18z²+6w−3)/D`, `y = 2·P8(z,w)/D²`,
/// `D = z⁴+4z³−2z²−12z+1`.
pub fn ks_to_k3<K: Scalar>(p: &Point2<K>) -> Result<Point2<K>, MapError> {
    p.u.same_field(&p.v)?;
    let m = polys();
    let (z, w) = (&p.u, &p.v);
    let den = m.ks_den.eval(z, w);
    if den.is_zero() {
        return Err(MapError::Domain { map: MapId::KstoK3, vanishing: vec![KS_DEN_SRC.into()] });
    }
    let x = m.ks_x_num.eval(z, w).neg().div(&den)?;
    let y = m.p8.eval(z, w).mul(&z.lift_int(2)).div(&den.mul(&den))?;
    Ok(Point2 { u: x, v: y })
}

/// K3 → Ks:
/// `z = 1 − (4x³−4xy−y²+4x+4)/(2x⁴+2x³−3x²y−2xy+6x−y+2)`,
/// `w = −2·P12(x,y)/((x−1)(x²+1)(x²−2x−1)(x²+2x+3)(x+1)⁵)`.
///
/// Where only the `w` denominator vanishes at a point of K3, the printed
/// formula is `0/0`; `w` is then recovered on the curve as the square root of
/// `f(z)` whose image under [`ks_to_k3`] is the input point.
pub fn k3_to_ks<K: Scalar>(p: &Point2<K>) -> Result<Point2<K>, MapError> {
    p.u.same_field(&p.v)?;
    let m = polys();
    let (x, y) = (&p.u, &p.v);
    let vanishing_w: Vec<String> = m
        .w_den_factors
        .iter()
        .filter(|(_, f, _)| f.eval(x, y).is_zero())
        .map(|(name, _, _)| name.to_string())
        .collect();
    let zden = m.k3_z_den.eval(x, y);
    if zden.is_zero() {
        let mut vanishing = vec![K3_Z_DEN_SRC.to_string()];
        vanishing.extend(vanishing_w);
        return Err(MapError::Domain { map: MapId::K3toKs, vanishing });
    }
    let z = x.lift_int(1).sub(&m.k3_z_num.eval(x, y).div(&zden)?);
    if vanishing_w.is_empty() {
        let wden = m
            .w_den_factors
            .iter()
            .fold(x.lift_int(1), |acc, (_, f, e)| acc.mul(&f.eval(x, y).powi(*e)));
        let w = m.p12.eval(x, y).mul(&x.lift_int(-2)).div(&wden)?;
        return Ok(Point2 { u: z, v: w });
    }
    if is_on_curve(CurveId::K3, p) {
        if let Some(r) = ks_rhs(&z).sqrt_exact() {
            for w in [r.clone(), r.neg()] {
                let cand = Point2 { u: z.clone(), v: w };
                if ks_to_k3(&cand).as_ref() == Ok(p) {
                    return Ok(cand);
                }
            }
        }
    }
    Err(MapError::Domain { map: MapId::K3toKs, vanishing: vanishing_w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::paper_points;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn pair(a: i64, b: i64) -> AbstractPair {
        AbstractPair::new(a, b)
    }

    #[test]
    fn printed_numerators_transcribed() {
        assert_eq!(p12().num_terms(), 39);
        assert_eq!(p12().total_degree(), 12);
        assert_eq!(p8().num_terms(), 14);
    }

    #[test]
    fn k3_to_k6_cover() {
        assert_eq!(cover_k3_to_k6(&pair(3, 6)), pair(3, 6));
        assert_eq!(cover_k3_to_k6(&pair(-17, 150)), pair(139, 11318));
        assert_eq!(cover_k3_to_k6(&pair(7, 26)), pair(23, 310));
    }

    #[test]
    fn pell_parameters() {
        let PellParams::Triple(t) = pell_params(&pair(139, 11318)) else { panic!() };
        assert_eq!((t.k.clone(), t.u.clone(), t.v.clone()), (int(82), int(-99), int(70)));
        assert_eq!(t.norm(), int(1));
        let PellParams::Triple(t) = pell_params(&pair(23, 310)) else { panic!() };
        assert_eq!((t.k, t.u, t.v), (int(14), int(-17), int(12)));
        let PellParams::Triple(t) = pell_params(&pair(-1, 6)) else { panic!() };
        assert_eq!((t.k, t.u, t.v), (int(-2), int(-1), int(0)));
        assert!(matches!(pell_params(&pair(1, 2)), PellParams::NoSlope { .. }));
    }

    #[test]
    fn no_slope_membership_comes_from_g() {
        // G(1,b) = b² − 4b + 4 = (b−2)², so (1,2) is on K6 and (1,3) is not
        assert_eq!(pell_params(&pair(1, 2)), PellParams::NoSlope { on_k6: true });
        assert_eq!(pell_params(&pair(1, 3)), PellParams::NoSlope { on_k6: false });
    }

    #[test]
    fn euler_resolvent() {
        assert!(euler_resolvent_check(&pair(3, 6)));
        assert!(euler_resolvent_check(&pair(1, 1)));
        assert!(euler_resolvent_check(&pair(-17, 150)));
        assert!(euler_resolvent_check(&AbstractPair::new(q(-9, 17), q(6, 289))));
    }

    #[test]
    fn k1_to_k2_cover() {
        let p = cover_k1_to_k2(&pair(2, 6));
        assert_eq!(p, Point2::ints(-2, 6));
        assert!(is_on_curve(CurveId::K2, &p));
        assert_eq!(cover_k1_to_k2(&pair(0, 0)), Point2::ints(0, 0));
        assert_eq!(cover_k1_to_k2(&pair(1, 2)), Point2::ints(-1, -2));
    }

    #[test]
    fn k1_to_k3_and_k2_to_k6() {
        assert_eq!(k1_to_k3(&pair(0, 0)), pair(3, 6));
        assert_eq!(k1_to_k3(&pair(2, 6)), pair(-17, 150));
        assert_eq!(k1_to_k3(&pair(-1, 2)), pair(7, 26));
        assert_eq!(k2_to_k6(&pair(-2, 14)), pair(139, 11318));
        assert_eq!(k2_to_k6(&pair(0, 0)), pair(3, 6));
        assert_eq!(k2_to_k6(&pair(-1, 0)), pair(-1, 6));
    }

    #[test]
    fn k1_labels_carry_to_k3_labels() {
        let k3 = paper_points(CurveId::K3);
        for r in paper_points(CurveId::K1) {
            let img = k1_to_k3(&AbstractPair::from_point(r.pt.as_rational().unwrap()));
            let hit = k3.iter().find(|t| t.pt.as_rational() == Some(&img.to_point())).unwrap();
            assert_eq!(hit.d, r.d);
        }
    }

    #[test]
    fn k1_to_ks_map() {
        assert_eq!(k1_to_ks(&pair(2, 6)).unwrap(), Point2 { u: q(1, 2), v: q(7, 4) });
        assert_eq!(k1_to_ks(&pair(1, 2)).unwrap(), Point2::ints(1, -4));
        assert!(matches!(k1_to_ks(&pair(0, 0)), Err(MapError::Domain { map: MapId::K1toKs, .. })));
    }

    #[test]
    fn ks_to_k3_examples() {
        assert_eq!(ks_to_k3(&Point2::ints(1, 4)).unwrap(), Point2::ints(7, 26));
        assert_eq!(ks_to_k3(&Point2::ints(2, -14)).unwrap(), Point2 { u: q(-9, 17), v: q(6, 289) });
        assert_eq!(
            ks_to_k3(&Point2 { u: q(1, 2), v: q(-7, 4) }).unwrap(),
            Point2 { u: q(-155, 79), v: q(42486, 6241) }
        );
        // P8(1,4) = 832 and P8(2,−14) = 3
        assert_eq!(p8().eval(&int(1), &int(4)), int(832));
        assert_eq!(p8().eval(&int(2), &int(-14)), int(3));
    }

    #[test]
    fn ks_to_k3_denominator_has_no_small_rational_zero() {
        // D splits only over ℚ(√2) into quadratics with irrational roots, so
        // the domain error is unreachable from rational or quadratic input.
        for n in -20..=20 {
            for d in 1..=5 {
                assert!(!polys().ks_den.eval(&q(n, d), &int(0)).is_zero());
            }
        }
    }

    #[test]
    fn k3_to_ks_examples() {
        assert_eq!(k3_to_ks(&Point2::ints(7, 26)).unwrap(), Point2::ints(1, 4));
        match k3_to_ks(&Point2::ints(1, 2)) {
            Err(MapError::Domain { vanishing, .. }) => assert!(vanishing.contains(&"x-1".to_string())),
            other => panic!("expected domain error, got {other:?}"),
        }
        match k3_to_ks(&Point2::ints(-1, -2)) {
            Err(MapError::Domain { vanishing, .. }) => assert_eq!(vanishing[0], K3_Z_DEN_SRC),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn k3_to_ks_resolves_indeterminate_w_on_the_curve() {
        // (x+1)⁵ and P12 both vanish at (−1,2); (x−1) and P12 at (1,6)
        assert!(p12().eval(&int(-1), &int(2)).is_zero());
        assert!(p12().eval(&int(1), &int(6)).is_zero());
        assert_eq!(k3_to_ks(&Point2::ints(-1, 2)).unwrap(), Point2::ints(1, -4));
        assert_eq!(k3_to_ks(&Point2::ints(1, 6)).unwrap(), Point2::ints(-1, -4));
        // off the curve the same locus stays an error
        assert!(matches!(
            k3_to_ks(&Point2::ints(-1, 5)),
            Err(MapError::Domain { map: MapId::K3toKs, .. })
        ));
    }
}
