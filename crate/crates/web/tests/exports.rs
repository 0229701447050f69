use covert_web::{pinsker_curve, risk_curves, simulate_round};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("valid json")
}

#[test]
fn risk_curves_are_consistent() {
    let v = parse(risk_curves(200, 0.05, 0.3, 26).unwrap());
    let points = v.as_array().unwrap();
    assert_eq!(points.len(), 26);
    for p in points {
        let public = p["public_message_risk"].as_f64().unwrap();
        let private = p["private_message_risk"].as_f64().unwrap();
        assert!(private >= public);
        let total = p["public_total"].as_f64().unwrap();
        assert!((total - public - p["output_risk"].as_f64().unwrap()).abs() < 1e-15);
    }
    let at_02 = &points[15];
    assert!((at_02["epsilon"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!((at_02["public_message_risk"].as_f64().unwrap() - 0.079_655_674_554_058).abs() < 1e-12);
    assert!(risk_curves(0, 0.1, 0.2, 5).is_err());
}

#[test]
fn pinsker_curve_stays_below_bound() {
    let v = parse(pinsker_curve(1.0, 101).unwrap());
    for p in v.as_array().unwrap() {
        assert!(p["total_variation"].as_f64().unwrap() <= p["bound"].as_f64().unwrap());
    }
}

#[test]
fn simulated_round_is_reproducible() {
    let a = simulate_round(300, 20, "quorum_sensing", 0.3, 0.8, 0.0, false, 4).unwrap();
    let b = simulate_round(300, 20, "quorum_sensing", 0.3, 0.8, 0.0, false, 4).unwrap();
    assert_eq!(a, b);
    let v = parse(a);
    assert_eq!(v["agents"].as_array().unwrap().len(), 300);
    assert_eq!(v["arrested"].as_array().unwrap().len(), 300);
    let rebels = v["rebels"].as_u64().unwrap();
    assert!(rebels > 180 && rebels < 300);
    assert!(v["succeeded"].as_bool().unwrap());
}

#[test]
fn simulated_round_rejects_bad_input() {
    assert!(simulate_round(10_000, 20, "median", 0.1, 0.8, 0.0, true, 1).is_err());
    assert!(simulate_round(100, 10, "telepathy", 0.1, 0.8, 0.0, true, 1).is_err());
    assert!(simulate_round(100, 10, "median", 0.1, 0.9, 0.2, true, 1).is_err());
    assert!(simulate_round(11, 3, "median", 0.1, 0.5, 0.0, false, 1).is_err());
}
