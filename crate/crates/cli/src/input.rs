use std::fmt;
use std::fs;

use plcircle::format::{
    element_from_json, parse_json, presentation_from_json, symbolic_set_from_json,
};
use plcircle::rational;
use plcircle::{CirclePoint, Error, GroupPresentation, PlHomeo, SymbolicSet, Q};
use serde_json::Value;

/// An input problem: reported on stderr, exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn invariant_name(v: &plcircle::InvariantViolation) -> String {
    let dbg = format!("{v:?}");
    dbg.split('(').next().unwrap_or(&dbg).to_string()
}

pub fn describe(source: &str, e: Error) -> InputError {
    match e {
        Error::Json(j) => InputError(format!("{source}: malformed JSON: {j}")),
        Error::InvalidElement { path, violation } => InputError(format!(
            "{source}: {path}: violates invariant {}: {violation}",
            invariant_name(&violation)
        )),
        other => InputError(format!("{source}: {other}")),
    }
}

fn read_json(path: &str) -> Result<Value, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
    parse_json(&text).map_err(|e| describe(path, e))
}

pub fn element(path: &str) -> Result<PlHomeo, InputError> {
    element_from_json(&read_json(path)?, "$").map_err(|e| describe(path, e))
}

pub fn presentation(path: &str) -> Result<GroupPresentation, InputError> {
    presentation_from_json(&read_json(path)?).map_err(|e| describe(path, e))
}

/// A group file, or an element file read as a one-generator group `g`.
pub fn element_or_presentation(path: &str) -> Result<GroupPresentation, InputError> {
    let v = read_json(path)?;
    let g = if v.get("generators").is_some() {
        presentation_from_json(&v)
    } else {
        element_from_json(&v, "$").and_then(|h| GroupPresentation::new(vec![("g".into(), h)]))
    };
    g.map_err(|e| describe(path, e))
}

pub fn symbolic_set(path: &str) -> Result<SymbolicSet, InputError> {
    symbolic_set_from_json(&read_json(path)?).map_err(|e| describe(path, e))
}

pub fn rational_arg(s: &str) -> Result<Q, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

pub fn point_arg(s: &str) -> Result<CirclePoint, String> {
    CirclePoint::new(rational_arg(s)?).map_err(|e| e.to_string())
}
