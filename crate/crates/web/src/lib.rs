//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as a thrown string.
//! The `*_json` functions hold the logic so they can be tested natively.

use curve_atlas::catalog::{is_on_curve, CurveId, Point2};
use curve_atlas::exact::Rational;
use curve_atlas::maps::ks_to_k3;
use curve_atlas::modular::{exact_cbrt, j_invariant, recover_pair, schlafli_w, ModularContext};
use curve_atlas::search::search_ks;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest height the page will search; keeps the tab responsive.
pub const MAX_HEIGHT: u32 = 400;

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|e| format!("{s:?}: {e}"))
}

/// Image of `(z, w)` on Ks under the map to K3.
pub fn map_ks_to_k3_json(z: &str, w: &str) -> Result<String, String> {
    let p = Point2 { u: parse_rational(z)?, v: parse_rational(w)? };
    if !is_on_curve(CurveId::Ks, &p) {
        return Err(format!("({}, {}) is not on Ks", p.u, p.v));
    }
    let q = ks_to_k3(&p).map_err(|e| e.to_string())?;
    Ok(json!({
        "z": p.u.to_string(),
        "w": p.v.to_string(),
        "x": q.u.to_string(),
        "y": q.v.to_string(),
        "on_k3": is_on_curve(CurveId::K3, &q),
    })
    .to_string())
}

/// Rational points of Ks with height at most `h`, with float coordinates for
/// plotting.
pub fn search_ks_json(h: u32) -> Result<String, String> {
    if h > MAX_HEIGHT {
        return Err(format!("height {h} exceeds the page limit {MAX_HEIGHT}"));
    }
    let res = search_ks(h as u64, 1).map_err(|e| e.to_string())?;
    let points: Vec<_> = res
        .points()
        .iter()
        .map(|p| json!({ "z": p.u.to_string(), "w": p.v.to_string(), "zf": p.u.to_f64(), "wf": p.v.to_f64() }))
        .collect();
    Ok(json!({ "height": h, "scanned": res.scanned, "points": points }).to_string())
}

/// Schläfli value, recovered integral pair and j for one discriminant.
pub fn modular_json(d: u32, bits: Option<u32>) -> Result<String, String> {
    let ctx = ModularContext::new(d as u64, bits).map_err(|e| e.to_string())?;
    let w = schlafli_w(&ctx).map_err(|e| e.to_string())?;
    let (a3, b3) = recover_pair(&ctx).map_err(|e| e.to_string())?;
    let j = j_invariant(&ctx).map_err(|e| e.to_string())?;
    Ok(json!({
        "d": d,
        "bits": ctx.prec(),
        "W": w.to_decimal(30),
        "a3": a3.to_string(),
        "b3": b3.to_string(),
        "j": j.to_string(),
        "gamma2": exact_cbrt(&j).map(|g| g.to_string()),
    })
    .to_string())
}

#[wasm_bindgen(js_name = ksToK3)]
pub fn ks_to_k3_js(z: &str, w: &str) -> Result<String, JsValue> {
    map_ks_to_k3_json(z, w).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = searchKs)]
pub fn search_ks_js(h: u32) -> Result<String, JsValue> {
    search_ks_json(h).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = modular)]
pub fn modular_js(d: u32, bits: Option<u32>) -> Result<String, JsValue> {
    modular_json(d, bits).map_err(JsValue::from)
}
