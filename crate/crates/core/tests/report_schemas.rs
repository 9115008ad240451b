use sasakian::reports::*;

fn check(schema_file: &str, value: &serde_json::Value) {
    let path = format!("{}/schemas/{schema_file}", env!("CARGO_MANIFEST_DIR"));
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn value<T: serde::Serialize>(x: &T) -> serde_json::Value {
    serde_json::from_str(&to_json(x)).unwrap()
}

#[test]
fn algebra_report_matches_schema() {
    check("algebra.schema.json", &value(&verify_algebra(&Group::ALL, Mutation::None, 1)));
    check("algebra.schema.json", &value(&verify_algebra(&[], Mutation::FlipStar, 1)));
}

#[test]
fn symbols_report_matches_schema() {
    let cfg = RunConfig { sweep_n: 5, ..Default::default() };
    check("symbols.schema.json", &value(&run_verify_symbols(&cfg).unwrap()));
}

#[test]
fn flow_report_matches_schema() {
    let cfg = RunConfig { max_iter: 2, ..Default::default() };
    check("flow.schema.json", &value(&run_flow(&cfg).unwrap().report));
}

#[test]
fn cohomology_report_matches_schema() {
    let cfg = RunConfig { n: 2, algebra: "u1".into(), ..Default::default() };
    check("cohomology.schema.json", &value(&run_cohomology(&cfg).unwrap()));
}

#[test]
fn schema_rejects_a_malformed_report() {
    let mut v = value(&verify_algebra(&[Group::Exterior], Mutation::None, 1));
    v["checks"][0]["group"] = "nonsense".into();
    let schema: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{}/schemas/algebra.schema.json", env!("CARGO_MANIFEST_DIR"))).unwrap(),
    )
    .unwrap();
    assert!(!jsonschema::validator_for(&schema).unwrap().is_valid(&v));
}
