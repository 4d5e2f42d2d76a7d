use magiclim_web::{classical_tower_report, paper_block_report, scenario_report};

fn checks(json: &str) -> Vec<(String, String)> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["id"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn paper_block_with_gadgets_is_a_factor() {
    let json = paper_block_report(3, 4, true).unwrap();
    assert!(json.contains("\"is_factor\":true"));
    assert!(checks(&json).iter().all(|(_, s)| s == "PASS"));
}

#[test]
fn truncated_paper_block_reports_sum_defect() {
    let json = paper_block_report(3, 3, false).unwrap();
    assert!(checks(&json).contains(&("magic.relations.sums".into(), "FAIL".into())));
}

#[test]
fn tower_passes() {
    let json = classical_tower_report(3).unwrap();
    let c = checks(&json);
    assert!(c.iter().any(|(id, _)| id == "hopf.limit.coassociativity"));
    assert!(c.iter().all(|(_, s)| s == "PASS"));
}

#[test]
fn bad_input_is_an_error() {
    assert!(paper_block_report(0, 1, false).is_err());
    assert!(classical_tower_report(9).is_err());
    assert!(scenario_report("{").unwrap_err().contains("line 1"));
    assert_eq!(scenario_report("{}").unwrap(), r#"{"checks":[],"summary":{"pass":0,"fail":0}}"#);
}
