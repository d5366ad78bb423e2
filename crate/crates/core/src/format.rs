//! JSON file formats.
//!
//! Element: `{"vertices": [["p/q", "r/s"], ...]}` (lift coordinates,
//! closing vertex included), `{"rotation": "p/q"}` or
//! `{"exotic": {"A": "p/q", "lambda": "r/s"}}`.
//!
//! Group presentation: `{"generators": {"name": <element>, ...}}`.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::cantor::SymbolicSet;
use crate::error::Error;
use crate::homeo::{ExoticParams, PlHomeo};
use crate::rational::{self, Q};
use crate::smoothing::GroupPresentation;

fn field_err(path: &str, message: impl Into<String>) -> Error {
    Error::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

fn rational_at(v: &Value, path: &str) -> Result<Q, Error> {
    let s = v
        .as_str()
        .ok_or_else(|| field_err(path, "expected a rational string \"p/q\""))?;
    rational::parse(s).map_err(|e| field_err(path, e.to_string()))
}

/// Parses text as JSON; syntax errors carry line and column.
pub fn parse_json(text: &str) -> Result<Value, Error> {
    Ok(serde_json::from_str(text)?)
}

pub fn element_from_json(v: &Value, path: &str) -> Result<PlHomeo, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| field_err(path, "element must be a JSON object"))?;
    if obj.len() != 1 {
        return Err(field_err(
            path,
            "element needs exactly one of \"vertices\", \"rotation\", \"exotic\"",
        ));
    }
    let (key, body) = obj.iter().next().unwrap();
    let here = format!("{path}.{key}");
    match key.as_str() {
        "rotation" => Ok(PlHomeo::rotation(&rational_at(body, &here)?)),
        "exotic" => {
            let a = body
                .get("A")
                .ok_or_else(|| field_err(&here, "missing field \"A\""))?;
            let l = body
                .get("lambda")
                .ok_or_else(|| field_err(&here, "missing field \"lambda\""))?;
            let params = ExoticParams::new(
                rational_at(a, &format!("{here}.A"))?,
                rational_at(l, &format!("{here}.lambda"))?,
            )
            .map_err(|e| field_err(&here, e.to_string()))?;
            Ok(PlHomeo::exotic_element(&params))
        }
        "vertices" => {
            let arr = body
                .as_array()
                .ok_or_else(|| field_err(&here, "expected an array of [x, y] pairs"))?;
            let mut verts = Vec::with_capacity(arr.len());
            for (i, pair) in arr.iter().enumerate() {
                let p = format!("{here}[{i}]");
                let xy = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| field_err(&p, "expected a pair [\"x\", \"y\"]"))?;
                verts.push((
                    rational_at(&xy[0], &format!("{p}[0]"))?,
                    rational_at(&xy[1], &format!("{p}[1]"))?,
                ));
            }
            PlHomeo::from_lift_vertices(&verts).map_err(|violation| Error::InvalidElement {
                path: path.to_string(),
                violation,
            })
        }
        other => Err(field_err(path, format!("unknown element kind \"{other}\""))),
    }
}

pub fn element_to_json(h: &PlHomeo) -> Value {
    match h.rotation_amount() {
        Some(a) => json!({ "rotation": rational::format(&a) }),
        None => {
            let v: Vec<Value> = h
                .lift_vertices()
                .iter()
                .map(|(x, y)| json!([rational::format(x), rational::format(y)]))
                .collect();
            json!({ "vertices": v })
        }
    }
}

impl Serialize for PlHomeo {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        element_to_json(self).serialize(s)
    }
}

pub fn presentation_from_json(v: &Value) -> Result<GroupPresentation, Error> {
    let gens = v
        .get("generators")
        .ok_or_else(|| field_err("$", "missing field \"generators\""))?
        .as_object()
        .ok_or_else(|| field_err("$.generators", "expected an object of named elements"))?;
    let mut out = Vec::with_capacity(gens.len());
    for (name, elem) in gens {
        out.push((
            name.clone(),
            element_from_json(elem, &format!("$.generators.{name}"))?,
        ));
    }
    GroupPresentation::new(out)
}

pub fn presentation_to_json(g: &GroupPresentation) -> Value {
    let mut m = Map::new();
    for (name, h) in g.generators() {
        m.insert(name.clone(), element_to_json(h));
    }
    json!({ "generators": m })
}

impl Serialize for GroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("generators", &presentation_to_json(self)["generators"])?;
        m.end()
    }
}

pub fn symbolic_set_from_json(v: &Value) -> Result<SymbolicSet, Error> {
    let s: SymbolicSet =
        serde_json::from_value(v.clone()).map_err(|e| field_err("$", e.to_string()))?;
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::InvariantViolation;
    use crate::rational::{int, q};

    #[test]
    fn element_roundtrip() {
        let v = parse_json(r#"{"vertices": [["0/1","0/1"],["1/2","1/4"],["1/1","1/1"]]}"#).unwrap();
        let h = element_from_json(&v, "$").unwrap();
        assert_eq!(element_to_json(&h), v);
        let r = element_from_json(&json!({"rotation": "5/4"}), "$").unwrap();
        assert_eq!(r, PlHomeo::rotation(&q(1, 4)));
        assert_eq!(element_to_json(&r), json!({"rotation": "1/4"}));
        let e = element_from_json(&json!({"exotic": {"A": "4", "lambda": "2/1"}}), "$").unwrap();
        assert_eq!(
            e,
            PlHomeo::exotic_element(&ExoticParams::new(int(4), int(2)).unwrap())
        );
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let v = json!({"vertices": [["0","0"],["1/2","3/4"],["1","3/2"]]});
        match element_from_json(&v, "$.generators.f") {
            Err(Error::InvalidElement { path, violation }) => {
                assert_eq!(path, "$.generators.f");
                assert!(matches!(violation, InvariantViolation::DegreeNotOne(..)));
            }
            other => panic!("{other:?}"),
        }
        let v = json!({"vertices": [["0","0"],["1/2"],["1","1"]]});
        let err = element_from_json(&v, "$").unwrap_err().to_string();
        assert!(err.starts_with("$.vertices[1]"), "{err}");
        let err = element_from_json(&json!({"exotic": {"A": "4", "lambda": "5"}}), "$")
            .unwrap_err()
            .to_string();
        assert!(err.contains("lambda"), "{err}");
        assert!(element_from_json(&json!({"spin": "1"}), "$").is_err());
        let err = parse_json("{\n  \"rotation\": \n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn presentations() {
        let v = json!({"generators": {"a": {"rotation": "1/3"}, "b": {"rotation": "1/5"}}});
        let g = presentation_from_json(&v).unwrap();
        assert_eq!(g.generators().len(), 2);
        assert_eq!(presentation_to_json(&g), v);
        assert_eq!(serde_json::to_value(&g).unwrap(), v);
        assert!(presentation_from_json(&json!({"generators": {}})).is_err());
        assert!(presentation_from_json(&json!({"gens": {}})).is_err());
    }
}
