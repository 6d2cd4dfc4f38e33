use curve_atlas_web::{map_ks_to_k3_json, modular_json, search_ks_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn maps_a_ks_point() {
    let v = parse(map_ks_to_k3_json("1", "4").unwrap());
    assert_eq!(v["on_k3"], true);
    assert_eq!((v["z"].as_str(), v["w"].as_str()), (Some("1"), Some("4")));
}

#[test]
fn search_matches_small_height() {
    let v = parse(search_ks_json(2).unwrap());
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 9);
    assert!(pts.iter().all(|p| p["zf"].is_f64() && p["wf"].is_f64()));
}

#[test]
fn modular_163() {
    let v = parse(modular_json(163, None).unwrap());
    assert_eq!(v["a3"], "-17");
    assert_eq!(v["b3"], "150");
    assert_eq!(v["gamma2"], "-640320");
    assert!(v["W"].as_str().unwrap().starts_with("0.0265864952955473643"));
}

#[test]
fn modular_rejects_bad_d() {
    assert!(modular_json(7, None).is_err());
    assert!(modular_json(35, None).is_err());
}
