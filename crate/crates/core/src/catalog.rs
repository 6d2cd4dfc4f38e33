//! The five plane curves, their defining polynomials exactly as printed, and
//! the tabulated points.
//!
//! Coordinates are `(x, y)` on K1, K2 and K3, `(a2, b2)` on K6 and `(z, w)` on
//! Ks. Ks tables are printed elsewhere as `(w, z)` pairs; everything here is
//! stored and emitted in `(z, w)` order.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{BivarPoly, QuadRat, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveId {
    K1,
    K2,
    K3,
    K6,
    Ks,
}

impl CurveId {
    pub const ALL: [CurveId; 5] = [CurveId::K1, CurveId::K2, CurveId::K3, CurveId::K6, CurveId::Ks];

    pub fn name(self) -> &'static str {
        match self {
            CurveId::K1 => "K1",
            CurveId::K2 => "K2",
            CurveId::K3 => "K3",
            CurveId::K6 => "K6",
            CurveId::Ks => "Ks",
        }
    }

    /// Names of the first and second coordinate.
    pub fn coords(self) -> (&'static str, &'static str) {
        match self {
            CurveId::K1 | CurveId::K2 | CurveId::K3 => ("x", "y"),
            CurveId::K6 => ("a2", "b2"),
            CurveId::Ks => ("z", "w"),
        }
    }

    pub fn convention(self) -> String {
        let (a, b) = self.coords();
        format!("({a},{b})")
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown curve {0:?} (expected one of k1, k2, k3, k6, ks)")]
    UnknownCurve(String),
    #[error("point {point} is not on {curve}")]
    NotOnCurve { curve: CurveId, point: String },
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

impl FromStr for CurveId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k1" => Ok(CurveId::K1),
            "k2" => Ok(CurveId::K2),
            "k3" => Ok(CurveId::K3),
            "k6" => Ok(CurveId::K6),
            "ks" => Ok(CurveId::Ks),
            _ => Err(CatalogError::UnknownCurve(s.to_string())),
        }
    }
}

/// A point with both coordinates in one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2<K> {
    pub u: K,
    pub v: K,
}

impl<K: Scalar> Point2<K> {
    pub fn new(u: K, v: K) -> Result<Self, CatalogError> {
        u.same_field(&v)?;
        Ok(Point2 { u, v })
    }
}

impl Point2<Rational> {
    pub fn ints(u: i64, v: i64) -> Self {
        Point2 { u: u.into(), v: v.into() }
    }

    /// Parses `"p/q,r/s"`.
    pub fn parse(s: &str) -> Result<Self, CatalogError> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| crate::exact::ExactError::Parse(s.to_string()))?;
        Ok(Point2 { u: a.parse()?, v: b.parse()? })
    }
}

impl<K: fmt::Display> fmt::Display for Point2<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Coordinates over ℚ or over one real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coords {
    Rational(Point2<Rational>),
    Quadratic(Point2<QuadRat>),
}

impl Coords {
    pub fn as_rational(&self) -> Option<&Point2<Rational>> {
        match self {
            Coords::Rational(p) => Some(p),
            Coords::Quadratic(_) => None,
        }
    }

    pub fn strings(&self) -> (String, String) {
        match self {
            Coords::Rational(p) => (p.u.to_string(), p.v.to_string()),
            Coords::Quadratic(p) => (p.u.to_string(), p.v.to_string()),
        }
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coords::Rational(p) => p.fmt(f),
            Coords::Quadratic(p) => p.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    PaperTable,
    Search,
    MapImage,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::PaperTable => "paper-table",
            Provenance::Search => "search",
            Provenance::MapImage => "map-image",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointRecord {
    pub curve: CurveId,
    pub pt: Coords,
    pub provenance: Provenance,
    /// Discriminant label, carried only where tabulated.
    pub d: Option<u32>,
}

impl PointRecord {
    pub fn to_json(&self) -> Value {
        let (a, b) = self.curve.coords();
        let (u, v) = self.pt.strings();
        json!({
            a: u,
            b: v,
            "provenance": self.provenance.as_str(),
            "d": self.d.map(|d| d.to_string()),
        })
    }

    /// `curve, coord1, coord2, provenance, d`.
    pub fn csv_fields(&self) -> [String; 5] {
        let (u, v) = self.pt.strings();
        [
            self.curve.name().to_string(),
            u,
            v,
            self.provenance.as_str().to_string(),
            self.d.map(|d| d.to_string()).unwrap_or_default(),
        ]
    }
}

pub const CSV_HEADER: [&str; 5] = ["curve", "coord1", "coord2", "provenance", "d"];

const K1_SRC: &str =
    "8x^8-32x^6y+40x^4y^2+32x^5-16x^2y^3-64x^3y+y^4+24xy^2+24x^2-8y";
const K2_SRC: &str = "y^2-2x^4+2x";
const K3_SRC: &str =
    "8x^8-32x^6y+40x^4y^2+64x^5-16x^2y^3-128x^3y+y^4+48xy^2+96x^2-32y-24";
/// `(b−2−2(a²−1))² − 2(a²−1)² − 4(a−1)²` expanded; the Pell conic with
/// `k = (b−2)/(a−1)` cleared of denominators.
const K6_SRC: &str = "b^2-4a^2b+2a^4+8a-6";
const KS_SRC: &str = "w^2-2z^5-8z^4+4z^3-8z^2-2z";

fn parse_static(src: &str, vars: (char, char)) -> BivarPoly {
    BivarPoly::parse(src, vars).expect("built-in curve equation parses")
}

/// Exact integer polynomial whose zero set is the affine curve.
pub fn defining_poly(c: CurveId) -> &'static BivarPoly {
    static POLYS: OnceLock<[BivarPoly; 5]> = OnceLock::new();
    let polys = POLYS.get_or_init(|| {
        [
            parse_static(K1_SRC, ('x', 'y')),
            parse_static(K2_SRC, ('x', 'y')),
            parse_static(K3_SRC, ('x', 'y')),
            parse_static(K6_SRC, ('a', 'b')),
            parse_static(KS_SRC, ('z', 'w')),
        ]
    });
    &polys[c as usize]
}

/// `f(z) = 2z(z⁴+4z³−2z²+4z+1)`, the right-hand side of `w² = f(z)`.
pub fn ks_rhs<K: Scalar>(z: &K) -> K {
    static RHS: OnceLock<BivarPoly> = OnceLock::new();
    let p = RHS.get_or_init(|| parse_static("2z^5+8z^4-4z^3+8z^2+2z", ('z', 'w')));
    p.eval(z, &z.lift(Rational::zero()))
}

pub fn is_on_curve<K: Scalar>(c: CurveId, p: &Point2<K>) -> bool {
    defining_poly(c).eval(&p.u, &p.v).is_zero()
}

pub fn coords_on_curve(c: CurveId, p: &Coords) -> bool {
    match p {
        Coords::Rational(p) => is_on_curve(c, p),
        Coords::Quadratic(p) => is_on_curve(c, p),
    }
}

/// Both formal partials vanish at an on-curve point.
pub fn is_singular_point<K: Scalar>(c: CurveId, p: &Point2<K>) -> Result<bool, CatalogError> {
    if !is_on_curve(c, p) {
        return Err(CatalogError::NotOnCurve { curve: c, point: p.to_string() });
    }
    let f = defining_poly(c);
    Ok(f.partial_x().eval(&p.u, &p.v).is_zero() && f.partial_y().eval(&p.u, &p.v).is_zero())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator in table")
}

fn rec(curve: CurveId, u: Rational, v: Rational, d: Option<u32>) -> PointRecord {
    PointRecord { curve, pt: Coords::Rational(Point2 { u, v }), provenance: Provenance::PaperTable, d }
}

fn build_tables() -> [Vec<PointRecord>; 5] {
    use CurveId::*;
    let i = |n: i64| Rational::from(n);
    let k1 = vec![
        rec(K1, i(0), i(0), Some(3)),
        rec(K1, i(1), i(2), Some(11)),
        rec(K1, i(-1), i(0), Some(19)),
        rec(K1, i(0), i(2), Some(43)),
        rec(K1, i(-1), i(2), Some(67)),
        rec(K1, i(2), i(6), Some(163)),
    ];
    let k3 = vec![
        rec(K3, i(3), i(6), Some(3)),
        rec(K3, i(-1), i(2), Some(11)),
        rec(K3, i(1), i(6), Some(19)),
        rec(K3, i(3), i(14), Some(43)),
        rec(K3, i(7), i(26), Some(67)),
        rec(K3, i(-17), i(150), Some(163)),
        rec(K3, i(-1), i(-2), None),
        rec(K3, i(-3), i(6), None),
        rec(K3, i(1), i(2), None),
        rec(K3, q(-9, 17), q(6, 289), None),
        rec(K3, q(-155, 79), q(42486, 6241), None),
    ];
    let ks = vec![
        rec(Ks, i(0), i(0), None),
        rec(Ks, i(1), i(4), None),
        rec(Ks, i(1), i(-4), None),
        rec(Ks, i(-1), i(4), None),
        rec(Ks, i(-1), i(-4), None),
        rec(Ks, q(1, 2), q(7, 4), None),
        rec(Ks, q(1, 2), q(-7, 4), None),
        rec(Ks, i(2), i(14), None),
        rec(Ks, i(2), i(-14), None),
    ];
    let tables = [k1, Vec::new(), k3, Vec::new(), ks];
    for t in &tables {
        for r in t {
            assert!(coords_on_curve(r.curve, &r.pt), "point table corrupted: {} {}", r.curve, r.pt);
        }
    }
    tables
}

/// The tabulated rational points of a curve (empty for K2 and K6).
pub fn paper_points(c: CurveId) -> &'static [PointRecord] {
    static TABLES: OnceLock<[Vec<PointRecord>; 5]> = OnceLock::new();
    &TABLES.get_or_init(build_tables)[c as usize]
}

/// The three real quadratic points on K3 attached to d = 51, 123, 267.
pub fn quadratic_points() -> &'static [PointRecord] {
    static QUAD: OnceLock<Vec<PointRecord>> = OnceLock::new();
    QUAD.get_or_init(|| {
        let qr = |m: i64, a: i64, b: i64| QuadRat::new(m, a.into(), b.into()).expect("squarefree radicand");
        let table = [
            (51, qr(17, -1, 0), qr(17, 8, 2)),
            (123, qr(41, 4, 1), qr(41, 40, 6)),
            (267, qr(89, -10, -1), qr(89, 310, 32)),
        ];
        table
            .into_iter()
            .map(|(d, u, v)| {
                let r = PointRecord {
                    curve: CurveId::K3,
                    pt: Coords::Quadratic(Point2 { u, v }),
                    provenance: Provenance::PaperTable,
                    d: Some(d),
                };
                assert!(coords_on_curve(r.curve, &r.pt), "quadratic table corrupted: {}", r.pt);
                r
            })
            .collect()
    })
}

/// Every tabulated record: K3, K1, Ks, then the quadratic K3 points.
pub fn all_paper_points() -> Vec<&'static PointRecord> {
    paper_points(CurveId::K3)
        .iter()
        .chain(paper_points(CurveId::K1))
        .chain(paper_points(CurveId::Ks))
        .chain(quadratic_points())
        .collect()
}

/// `{curve, convention, equation, points}` with exact coordinates as strings.
pub fn export_json(c: CurveId) -> Value {
    let vars = match c {
        CurveId::K6 => ('a', 'b'),
        CurveId::Ks => ('z', 'w'),
        _ => ('x', 'y'),
    };
    let mut points: Vec<Value> = paper_points(c).iter().map(PointRecord::to_json).collect();
    if c == CurveId::K3 {
        points.extend(quadratic_points().iter().map(PointRecord::to_json));
    }
    json!({
        "curve": c.name(),
        "convention": c.convention(),
        "equation": format!("{} = 0", defining_poly(c).render(vars)),
        "points": points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(u: Rational, v: Rational) -> Point2<Rational> {
        Point2 { u, v }
    }

    #[test]
    fn heegner_curve_polynomial() {
        let k2 = defining_poly(CurveId::K2);
        assert_eq!(k2, &BivarPoly::parse("y^2 - 2x^4 + 2x", ('x', 'y')).unwrap());
        assert!(is_on_curve(CurveId::K2, &Point2::ints(0, 0)));
    }

    #[test]
    fn k6_polynomial_matches_the_pell_conic() {
        // G(a,b) = (b−2−2(a²−1))² − 2(a²−1)² − 4(a−1)² at a grid of points
        let g = defining_poly(CurveId::K6);
        for a in -4..=4i64 {
            for b in -4..=4i64 {
                let (ar, br) = (Rational::from(a), Rational::from(b));
                let s = &ar * &ar - Rational::from(1);
                let t = &br - Rational::from(2) - Rational::from(2) * s.clone();
                let am1 = &ar - Rational::from(1);
                let expect = &t * &t - Rational::from(2) * (&s * &s) - Rational::from(4) * (&am1 * &am1);
                assert_eq!(g.eval(&ar, &br), expect, "a={a} b={b}");
            }
        }
        assert!(is_on_curve(CurveId::K6, &Point2::ints(23, 310)));
    }

    #[test]
    fn membership() {
        assert!(is_on_curve(CurveId::K3, &Point2::ints(3, 6)));
        assert!(is_on_curve(CurveId::K3, &pt(q(-9, 17), q(6, 289))));
        assert!(!is_on_curve(CurveId::K3, &Point2::ints(0, 0)));
        assert_eq!(defining_poly(CurveId::K3).eval(&Rational::zero(), &Rational::zero()), Rational::from(-24));
        assert!(is_on_curve(CurveId::Ks, &Point2::ints(2, 14)));
    }

    #[test]
    fn singular_points() {
        assert_eq!(is_singular_point(CurveId::K3, &Point2::ints(1, 2)), Ok(true));
        assert_eq!(is_singular_point(CurveId::K3, &Point2::ints(3, 6)), Ok(false));
        assert_eq!(is_singular_point(CurveId::K2, &Point2::ints(0, 0)), Ok(false));
        assert!(matches!(
            is_singular_point(CurveId::K3, &Point2::ints(0, 0)),
            Err(CatalogError::NotOnCurve { .. })
        ));
    }

    #[test]
    fn exactly_one_double_point_in_the_k3_table() {
        let singular: Vec<_> = paper_points(CurveId::K3)
            .iter()
            .filter(|r| is_singular_point(CurveId::K3, r.pt.as_rational().unwrap()).unwrap())
            .collect();
        assert_eq!(singular.len(), 1);
        assert_eq!(singular[0].pt, Coords::Rational(Point2::ints(1, 2)));
    }

    #[test]
    fn table_sizes_and_labels() {
        let k1 = paper_points(CurveId::K1);
        assert_eq!(k1.len(), 6);
        let labels: Vec<_> = k1.iter().map(|r| r.d.unwrap()).collect();
        assert_eq!(labels, [3, 11, 19, 43, 67, 163]);
        let k3 = paper_points(CurveId::K3);
        assert_eq!(k3.len(), 11);
        assert_eq!(k3.iter().filter(|r| r.d.is_some()).count(), 6);
        assert_eq!(paper_points(CurveId::Ks).len(), 9);
        assert!(paper_points(CurveId::K2).is_empty());
        assert_eq!(all_paper_points().len(), 29);
    }

    #[test]
    fn quadratic_points_and_conjugates() {
        for r in quadratic_points() {
            let Coords::Quadratic(p) = &r.pt else { panic!("expected quadratic") };
            assert!(is_on_curve(CurveId::K3, p));
            assert!(is_on_curve(CurveId::K3, &Point2 { u: p.u.conj(), v: p.v.conj() }));
        }
    }

    #[test]
    fn json_export_uses_curve_coordinates() {
        let v = export_json(CurveId::Ks);
        assert_eq!(v["convention"], "(z,w)");
        assert_eq!(v["points"][5]["z"], "1/2");
        assert_eq!(v["points"][5]["w"], "7/4");
        let k3 = export_json(CurveId::K3);
        assert_eq!(k3["points"].as_array().unwrap().len(), 14);
        assert_eq!(k3["points"][10]["y"], "42486/6241");
        assert_eq!(k3["points"][11]["y"], "8+2*sqrt(17)");
    }

    #[test]
    fn curve_names_parse() {
        assert_eq!("ks".parse::<CurveId>().unwrap(), CurveId::Ks);
        assert_eq!("K3".parse::<CurveId>().unwrap(), CurveId::K3);
        assert!("k4".parse::<CurveId>().is_err());
    }
}
