//! Turns library results into report records.

use curve_atlas::catalog::{
    all_paper_points, coords_on_curve, is_on_curve, is_singular_point, paper_points, quadratic_points, Coords,
    CurveId, Point2,
};
use curve_atlas::exact::Rational;
use curve_atlas::maps::{
    alpha_beta_2, cover_k1_to_k2, cover_k3_to_k6, euler_resolvent_check, k1_to_k3, k1_to_ks, k2_to_k6, k3_to_ks,
    ks_to_k3, pell_params, AbstractPair, MapError, PellParams,
};
use curve_atlas::modular::{
    exact_cbrt, j_invariant, recover_pair, schlafli_w, verify_tower, weber_product_selftest, ModularContext,
    ModularError, TowerLabels,
};
use curve_atlas::search::{integral_subset, reconcile, search_integral, search_ks, SearchResult};

use crate::report::{Record, Report, Status};

pub const SIX: [u64; 6] = [3, 11, 19, 43, 67, 163];

pub fn verify_points() -> Report {
    let mut rep = Report::new("verify-points");
    for r in all_paper_points() {
        let on = coords_on_curve(r.curve, &r.pt);
        let mut details = format!("on {}", r.curve);
        if let (CurveId::K3, Coords::Rational(p)) = (r.curve, &r.pt) {
            if is_singular_point(CurveId::K3, p).unwrap_or(false) {
                details.push_str(", double point");
            }
        }
        let mut rec = Record::new(format!("points/{}/{}", r.curve, r.pt), Status::from_ok(on), details);
        if let Some(d) = r.d {
            rec = rec.value("d", d);
        }
        rep.records.push(rec);
        rep.points.push(r.clone());
    }
    rep
}

fn pair_of(p: &Point2<Rational>) -> AbstractPair {
    AbstractPair::from_point(p)
}

fn k3_rational() -> Vec<Point2<Rational>> {
    paper_points(CurveId::K3).iter().filter_map(|r| r.pt.as_rational().cloned()).collect()
}

/// 500 deterministic rational pairs spread over a small box.
fn grid_pairs() -> Vec<AbstractPair> {
    (0..500i64)
        .map(|k| {
            let a = Rational::new((k * 37) % 199 - 99, k % 13 + 1).expect("nonzero");
            let b = Rational::new((k * 53) % 211 - 105, k % 17 + 1).expect("nonzero");
            AbstractPair::new(a, b)
        })
        .collect()
}

pub fn verify_maps() -> Report {
    let mut rep = Report::new("verify-maps");
    let recs = &mut rep.records;

    let k3 = k3_rational();
    for p in &k3 {
        let img = cover_k3_to_k6(&pair_of(p));
        let on = is_on_curve(CurveId::K6, &img.to_point());
        let mut rec = Record::new(format!("maps/K3->K6/{p}"), Status::from_ok(on), "image on K6")
            .value("a2", &img.first)
            .value("b2", &img.second);
        if let PellParams::Triple(t) = pell_params(&img) {
            let unit = t.norm() == Rational::one();
            rec.status = Status::from_ok(on && unit);
            rec = rec.value("k", &t.k).value("u", &t.u).value("v", &t.v).value("u^2-2v^2", t.norm());
        }
        recs.push(rec);
        let ok = euler_resolvent_check(&pair_of(p));
        recs.push(Record::new(format!("maps/resolvent/{p}"), Status::from_ok(ok), "quartic vanishes at a3"));
    }

    for r in paper_points(CurveId::K1) {
        let p = r.pt.as_rational().expect("rational table");
        let pair = pair_of(p);
        let k3_img = k1_to_k3(&pair);
        let k2_img = cover_k1_to_k2(&pair);
        let ok = is_on_curve(CurveId::K3, &k3_img.to_point()) && is_on_curve(CurveId::K2, &k2_img);
        recs.push(
            Record::new(format!("maps/K1->K3,K2/{p}"), Status::from_ok(ok), "images on K3 and K2")
                .value("K3", &k3_img)
                .value("K2", &k2_img),
        );
        match k1_to_ks(&pair) {
            Ok(s) => {
                let ok = is_on_curve(CurveId::Ks, &s);
                recs.push(Record::new(format!("maps/K1->Ks/{p}"), Status::from_ok(ok), "image on Ks").value("Ks", &s));
            }
            Err(e) => recs.push(Record::new(format!("maps/K1->Ks/{p}"), Status::Skip, e.to_string())),
        }
    }

    let mut square_ok = 0;
    let inputs: Vec<_> = grid_pairs()
        .into_iter()
        .chain(paper_points(CurveId::K1).iter().map(|r| pair_of(r.pt.as_rational().expect("rational"))))
        .collect();
    for p in &inputs {
        square_ok += usize::from(cover_k3_to_k6(&k1_to_k3(p)) == k2_to_k6(&alpha_beta_2(p)));
    }
    recs.push(
        Record::new("maps/commuting-square", Status::from_ok(square_ok == inputs.len()), "K1->K3->K6 = K1->K2->K6")
            .value("pairs", inputs.len())
            .value("agreeing", square_ok),
    );

    for r in paper_points(CurveId::Ks) {
        let s = r.pt.as_rational().expect("rational table");
        let id = format!("maps/Ks<->K3/{s}");
        let rec = match ks_to_k3(s) {
            Ok(x) => {
                let back = k3_to_ks(&x);
                let ok = is_on_curve(CurveId::K3, &x) && back.as_ref() == Ok(s);
                Record::new(id, Status::from_ok(ok), "image on K3, inverse recovers the point").value("K3", &x)
            }
            Err(e) => Record::new(id, Status::Fail, e.to_string()),
        };
        recs.push(rec);
    }
    for p in [Point2::ints(1, 2), Point2::ints(-1, -2)] {
        let id = format!("maps/K3->Ks/exceptional/{p}");
        let rec = match k3_to_ks(&p) {
            Err(e @ MapError::Domain { .. }) => Record::new(id, Status::Pass, e.to_string()),
            other => Record::new(id, Status::Fail, format!("expected a domain error, got {other:?}")),
        };
        recs.push(rec);
    }
    for r in quadratic_points() {
        let Coords::Quadratic(p) = &r.pt else { continue };
        let id = format!("maps/K3->Ks->K3/{p}");
        let rec = match k3_to_ks(p).and_then(|s| Ok((ks_to_k3(&s)?, s))) {
            Ok((back, s)) => Record::new(id, Status::from_ok(&back == p), "round trip over the quadratic field")
                .value("Ks", &s),
            Err(e) => Record::new(id, Status::Fail, e.to_string()),
        };
        recs.push(rec);
    }
    rep
}

fn tower_records(d: u64, bits: Option<u32>) -> Vec<Record> {
    let id = format!("tower/{d}");
    let ctx = match ModularContext::new(d, bits) {
        Ok(c) => c,
        Err(e) => return vec![Record::new(id, Status::Fail, e.to_string())],
    };
    let mut out = Vec::new();
    match recover_pair(&ctx) {
        Ok((a3, b3)) => {
            let labels = TowerLabels::from_catalog(d);
            let agrees = labels.as_ref().is_none_or(|l| l.a3 == a3 && l.b3 == b3);
            let details = if labels.is_some() { "recovered pair matches the table" } else { "no tabulated pair" };
            out.push(
                Record::new(format!("{id}/pair"), Status::from_ok(agrees), details)
                    .value("a3", &a3)
                    .value("b3", &b3)
                    .value("bits", ctx.prec()),
            );
        }
        Err(e) => out.push(Record::new(format!("{id}/pair"), Status::Fail, e.to_string())),
    }
    let Some(labels) = TowerLabels::from_catalog(d) else {
        out.push(Record::new(format!("{id}/residuals"), Status::Skip, "no tabulated labels"));
        return out;
    };
    match verify_tower(&ctx, &labels) {
        Ok(rep) => {
            let cube = rep.gamma2.is_some();
            let mut rec = Record::new(format!("{id}/j"), Status::from_ok(cube), "j is an integer cube")
                .value("j", &rep.j);
            if let Some(g) = &rep.gamma2 {
                rec = rec.value("gamma2", g);
            }
            out.push(rec);
            let failures = rep.failures();
            for (name, r) in &rep.residuals {
                out.push(
                    Record::new(
                        format!("{id}/residual/{name}"),
                        Status::from_ok(!failures.contains(name)),
                        format!("{name}-cubic below 2^{}", rep.threshold_log2),
                    )
                    .approx("residual", r),
                );
            }
        }
        Err(e) => out.push(Record::new(format!("{id}/residuals"), Status::Fail, e.to_string())),
    }
    out
}

pub fn verify_tower_report(ds: &[u64], bits: Option<u32>) -> Report {
    let mut rep = Report::new("verify-tower");
    for &d in ds {
        rep.records.extend(tower_records(d, bits));
    }
    for p in [64, 128, 256] {
        let rec = match weber_product_selftest(p) {
            Ok(r) => Record::new(
                format!("selftest/weber-product/{p}"),
                Status::from_ok(r.abs_below_pow2(-(p as i64 - 8))),
                format!("product of the three series minus sqrt(2) below 2^-{}", p - 8),
            )
            .approx("defect", &r),
            Err(e) => Record::new(format!("selftest/weber-product/{p}"), Status::Fail, e.to_string()),
        };
        rep.records.push(rec);
    }
    rep
}

/// Everything about one `d`: `W`, the pair, `j`, `γ2`, and the residual table.
pub fn modular(d: u64, bits: Option<u32>) -> Result<Report, ModularError> {
    let ctx = ModularContext::new(d, bits)?;
    let mut rep = Report::new("modular");
    let w = schlafli_w(&ctx)?;
    let mut rec = Record::new(format!("modular/{d}"), Status::Pass, "Schläfli value")
        .value("bits", ctx.prec())
        .value("terms", ctx.n_terms())
        .approx("W", &w);
    match j_invariant(&ctx) {
        Ok(j) => {
            rec = rec.value("j", &j);
            if let Some(g) = exact_cbrt(&j) {
                rec = rec.value("gamma2", g);
            }
        }
        Err(e) => {
            rec.status = Status::Fail;
            rec.details = e.to_string();
        }
    }
    rep.records.push(rec);
    rep.records.extend(tower_records(d, bits));
    Ok(rep)
}

fn search_report(res: &SearchResult, table: &[curve_atlas::catalog::PointRecord]) -> Report {
    let mut rep = Report::new("search");
    let rec = reconcile(res, table);
    let spec = &res.spec;
    let status = if rec.search_only.is_empty() { Status::Pass } else { Status::Fail };
    let list = |v: &[Coords]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    rep.records.push(
        Record::new(
            format!("search/{}/{}", spec.curve, spec.bound),
            status,
            format!("{} found, {} tabulated in range", res.found.len(), rec.both.len()),
        )
        .value("bound", spec.bound)
        .value("scanned", res.scanned)
        .value("both", rec.both.len())
        .value("paper_only", list(&rec.paper_only))
        .value("search_only", list(&rec.search_only))
        .value("elapsed_ms", res.elapsed.as_millis()),
    );
    rep.points.extend(res.found.iter().cloned());
    rep
}

pub fn search(curve: CurveId, bound: u64, partitions: u32) -> Result<Report, curve_atlas::search::SearchError> {
    match curve {
        CurveId::Ks => Ok(search_report(&search_ks(bound, partitions)?, paper_points(CurveId::Ks))),
        c => {
            let res = search_integral(c, bound, partitions)?;
            Ok(search_report(&res, &integral_subset(paper_points(c))))
        }
    }
}

/// The full battery at the given search bounds.
pub fn full_report(height: u64, box_bound: u64, partitions: u32) -> Report {
    let mut rep = Report::new("report");
    rep.extend(verify_points());
    rep.extend(verify_maps());
    rep.extend(verify_tower_report(&SIX, None));
    for (c, b) in [(CurveId::Ks, height), (CurveId::K3, box_bound), (CurveId::K1, box_bound)] {
        match search(c, b, partitions) {
            Ok(s) => rep.records.extend(s.records),
            Err(e) => rep.records.push(Record::new(format!("search/{c}"), Status::Fail, e.to_string())),
        }
    }
    rep
}
