//! Bounded exact searches: rational points of bounded height on Ks and
//! integral points in a box on K1 and K3.

use std::collections::BTreeSet;
use std::time::Duration;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::catalog::{is_on_curve, Coords, CurveId, Point2, PointRecord, Provenance};
use crate::exact::{exact_isqrt, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    RationalHeight,
    IntegralBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub curve: CurveId,
    pub mode: SearchMode,
    pub bound: u64,
    pub partitions: u32,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub spec: SearchSpec,
    /// Sorted by `(coord1, coord2)`.
    pub found: Vec<PointRecord>,
    pub scanned: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn points(&self) -> Vec<Point2<Rational>> {
        self.found.iter().filter_map(|r| r.pt.as_rational().cloned()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search bound must be at least 1")]
    BoundTooSmall,
    #[error("partitions must be at least 1")]
    NoPartitions,
    #[error("{0} has no integral search (use k1 or k3)")]
    UnsupportedCurve(CurveId),
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

/// Runs `work` on every residue class `0..parts` and concatenates.
fn over_partitions<F>(parts: u32, work: F) -> Vec<(Vec<Point2<Rational>>, u64)>
where
    F: Fn(u32) -> (Vec<Point2<Rational>>, u64) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..parts).into_par_iter().map(work).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..parts).map(work).collect()
    }
}

fn finish(spec: SearchSpec, chunks: Vec<(Vec<Point2<Rational>>, u64)>, watch: Stopwatch) -> SearchResult {
    let mut set = BTreeSet::new();
    let mut scanned = 0;
    for (pts, n) in chunks {
        scanned += n;
        set.extend(pts);
    }
    let found = set
        .into_iter()
        .map(|p| {
            assert!(is_on_curve(spec.curve, &p), "search emitted an off-curve point {p}");
            PointRecord { curve: spec.curve, pt: Coords::Rational(p), provenance: Provenance::Search, d: None }
        })
        .collect();
    SearchResult { spec, found, scanned, elapsed: watch.elapsed() }
}

/// `q⁶·f(p/q) = q·2p(p⁴ + 4p³q − 2p²q² + 4pq³ + q⁴)`.
fn ks_numerator_i128(p: i128, q: i128) -> Option<i128> {
    let (p2, q2) = (p.checked_mul(p)?, q.checked_mul(q)?);
    let inner = p2
        .checked_mul(p2)?
        .checked_add(4i128.checked_mul(p2)?.checked_mul(p)?.checked_mul(q)?)?
        .checked_sub(2i128.checked_mul(p2)?.checked_mul(q2)?)?
        .checked_add(4i128.checked_mul(p)?.checked_mul(q2)?.checked_mul(q)?)?
        .checked_add(q2.checked_mul(q2)?)?;
    2i128.checked_mul(p)?.checked_mul(q)?.checked_mul(inner)
}

fn ks_numerator_big(p: &BigInt, q: &BigInt) -> BigInt {
    let inner = p.pow(4) + 4 * p.pow(3) * q - 2 * p.pow(2) * q.pow(2) + 4 * p * q.pow(3) + q.pow(4);
    2 * p * q * inner
}

/// `w·q³` when `f(p/q)` is a rational square.
fn ks_root(p: i64, q: i64) -> Option<BigInt> {
    match ks_numerator_i128(p as i128, q as i128) {
        Some(n) if n < 0 => None,
        Some(n) => {
            let r = (n as u128).isqrt();
            (r * r == n as u128).then(|| BigInt::from(r))
        }
        None => exact_isqrt(&ks_numerator_big(&BigInt::from(p), &BigInt::from(q))),
    }
}

/// Every affine rational point of Ks with `height(z) ≤ H`: `z = p/q` in
/// lowest terms, `|p| ≤ H`, `1 ≤ q ≤ H`. Work is split by `p mod partitions`.
pub fn search_ks(h: u64, partitions: u32) -> Result<SearchResult, SearchError> {
    if h == 0 {
        return Err(SearchError::BoundTooSmall);
    }
    if partitions == 0 {
        return Err(SearchError::NoPartitions);
    }
    let watch = Stopwatch::start();
    let hb = h as i64;
    let chunks = over_partitions(partitions, |class| {
        let mut pts = Vec::new();
        let mut scanned = 0u64;
        let first = -hb + (class as i64 - (-hb)).rem_euclid(partitions as i64);
        let mut p = first;
        while p <= hb {
            for q in 1..=hb {
                if p.gcd(&q) != 1 {
                    continue;
                }
                scanned += 1;
                if let Some(wq3) = ks_root(p, q) {
                    let z = Rational::new(p, q).expect("q ≥ 1");
                    let w = Rational::new(wq3, BigInt::from(q).pow(3)).expect("q ≥ 1");
                    if !w.is_zero() {
                        pts.push(Point2 { u: z.clone(), v: -&w });
                    }
                    pts.push(Point2 { u: z, v: w });
                }
            }
            p += partitions as i64;
        }
        (pts, scanned)
    });
    let spec = SearchSpec { curve: CurveId::Ks, mode: SearchMode::RationalHeight, bound: h, partitions };
    Ok(finish(spec, chunks, watch))
}

/// Integral points of K1 or K3 with `|x| ≤ B`; for each `x` every integer
/// root `y` of the specialized quartic is found, with no cap on `|y|`.
pub fn search_integral(curve: CurveId, b: u64, partitions: u32) -> Result<SearchResult, SearchError> {
    if !matches!(curve, CurveId::K1 | CurveId::K3) {
        return Err(SearchError::UnsupportedCurve(curve));
    }
    if b == 0 {
        return Err(SearchError::BoundTooSmall);
    }
    if partitions == 0 {
        return Err(SearchError::NoPartitions);
    }
    let watch = Stopwatch::start();
    let poly = crate::catalog::defining_poly(curve);
    let bb = b as i64;
    let chunks = over_partitions(partitions, |class| {
        let mut pts = Vec::new();
        let mut scanned = 0u64;
        let mut x = -bb + (class as i64 + bb).rem_euclid(partitions as i64);
        while x <= bb {
            scanned += 1;
            let xb = BigInt::from(x);
            for y in poly.specialize_x(&xb).integer_roots() {
                pts.push(Point2 { u: Rational::from(xb.clone()), v: Rational::from(y) });
            }
            x += partitions as i64;
        }
        (pts, scanned)
    });
    let spec = SearchSpec { curve, mode: SearchMode::IntegralBox, bound: b, partitions };
    Ok(finish(spec, chunks, watch))
}

/// Found-versus-table comparison on one curve.
#[derive(Debug, Clone, Default)]
pub struct ReconcileReport {
    pub both: Vec<Coords>,
    pub paper_only: Vec<Coords>,
    pub search_only: Vec<Coords>,
}

impl ReconcileReport {
    pub fn agrees(&self) -> bool {
        self.paper_only.is_empty() && self.search_only.is_empty()
    }
}

pub fn reconcile(found: &SearchResult, table: &[PointRecord]) -> ReconcileReport {
    let key = |c: &Coords| c.to_string();
    let table: Vec<&Coords> = table.iter().filter(|r| r.curve == found.spec.curve).map(|r| &r.pt).collect();
    let found: Vec<&Coords> = found.found.iter().map(|r| &r.pt).collect();
    let has = |set: &[&Coords], c: &Coords| set.iter().any(|x| key(x) == key(c));
    let mut rep = ReconcileReport::default();
    for c in &found {
        if has(&table, c) {
            rep.both.push((*c).clone());
        } else {
            rep.search_only.push((*c).clone());
        }
    }
    for c in &table {
        if !has(&found, c) {
            rep.paper_only.push((*c).clone());
        }
    }
    rep
}

/// The records of `table` whose coordinates are both integers.
pub fn integral_subset(table: &[PointRecord]) -> Vec<PointRecord> {
    table
        .iter()
        .filter(|r| r.pt.as_rational().is_some_and(|p| p.u.is_integer() && p.v.is_integer()))
        .cloned()
        .collect()
}

/// Height bound `max(|p|, q)` of `z`, as `u64` when it fits.
pub fn z_height(z: &Rational) -> Option<u64> {
    z.height().to_u64()
}
