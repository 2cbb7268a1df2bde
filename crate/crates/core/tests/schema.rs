use std::path::PathBuf;

use relpower::scenario::bundled::BUNDLED;
use relpower::scenario::config::{listing_schema_json, preset_listing, schema_json};
use relpower::scenario::ScenarioConfig;
use serde_json::Value;

fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema").join(name)
}

/// Compares the published file with the generated schema; set
/// `RELPOWER_BLESS=1` to rewrite it.
fn published(name: &str, generated: &str) -> Value {
    let path = schema_path(name);
    if std::env::var_os("RELPOWER_BLESS").is_some() {
        std::fs::write(&path, generated).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(on_disk, generated, "{name} is stale; rerun with RELPOWER_BLESS=1");
    serde_json::from_str(&on_disk).unwrap()
}

#[test]
fn bundled_scenarios_validate_against_published_schema() {
    let schema = published("scenario.schema.json", &schema_json());
    let v = jsonschema::validator_for(&schema).unwrap();
    for (name, text) in BUNDLED {
        let doc: Value = serde_json::from_str(text).unwrap();
        let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
        let cfg = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(&cfg.name, name);
    }
}

#[test]
fn schema_and_parser_reject_unknown_keys() {
    let schema = published("scenario.schema.json", &schema_json());
    let v = jsonschema::validator_for(&schema).unwrap();
    let mut doc: Value = serde_json::from_str(BUNDLED[0].1).unwrap();
    doc["colour"] = Value::from("red");
    assert!(!v.is_valid(&doc));
    let e = ScenarioConfig::from_json(&doc.to_string()).unwrap_err();
    assert_eq!(e.exit_code(), 2);

    let mut doc: Value = serde_json::from_str(BUNDLED[0].1).unwrap();
    doc["material"]["model"] = Value::from("mooney-rivlin");
    assert!(!v.is_valid(&doc));
    assert!(ScenarioConfig::from_json(&doc.to_string()).is_err());
}

#[test]
fn preset_listing_validates() {
    let schema = published("presets.schema.json", &listing_schema_json());
    let v = jsonschema::validator_for(&schema).unwrap();
    let listing = serde_json::to_value(preset_listing()).unwrap();
    assert!(v.is_valid(&listing));
    let names: Vec<&str> = listing["materials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["stvk", "neo-hookean", "quadratic"]);
}

#[test]
fn config_round_trips_through_json() {
    for (_, text) in BUNDLED {
        let cfg = ScenarioConfig::from_json(text).unwrap();
        let again = ScenarioConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }
}
