use std::fs;
use std::path::Path;

use plcircle::format::{
    element_from_json, parse_json, presentation_from_json, symbolic_set_from_json,
};

#[test]
fn every_fixture_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        let v = parse_json(&fs::read_to_string(&path).unwrap()).unwrap();
        let ok = if v.get("generators").is_some() {
            presentation_from_json(&v).map(|_| ())
        } else if v.get("clusters").is_some() {
            symbolic_set_from_json(&v).map(|_| ())
        } else {
            element_from_json(&v, "$").map(|_| ())
        };
        assert!(ok.is_ok(), "{}: {:?}", path.display(), ok);
        seen += 1;
    }
    assert!(seen >= 4);
}
