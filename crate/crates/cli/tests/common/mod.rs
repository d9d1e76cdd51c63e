//! Test helpers: run the `had` binary and validate reports against the
//! shipped schema with a small self-contained JSON Schema checker (the
//! subset of draft-07 the schema actually uses).

use serde_json::Value;
use std::path::PathBuf;
use std::process::Output;

pub fn had_binary() -> &'static str {
    env!("CARGO_BIN_EXE_had")
}

pub fn run_had(args: &[&str]) -> Output {
    std::process::Command::new(had_binary())
        .args(args)
        .output()
        .expect("spawn had")
}

pub fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("had-test-{}-{}", std::process::id(), name));
    p
}

pub fn shipped_schema() -> Value {
    let text = include_str!("../../schema/report.v1.json");
    serde_json::from_str(text).expect("schema document parses")
}

/// Validate an instance, returning a list of problems (empty = valid).
pub fn validate(schema: &Value, instance: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, instance, schema, "$", &mut errors);
    errors
}

fn resolve<'a>(root: &'a Value, reference: &str) -> &'a Value {
    let mut node = root;
    for part in reference.trim_start_matches("#/").split('/') {
        node = node.get(part).unwrap_or_else(|| panic!("dangling $ref {reference}"));
    }
    node
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unknown type keyword {other}"),
    }
}

fn check(schema: &Value, v: &Value, root: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        check(resolve(root, reference), v, root, path, errors);
        return;
    }
    if let Some(c) = schema.get("const") {
        if v != c {
            errors.push(format!("{path}: expected const {c}, got {v}"));
        }
        return;
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            errors.push(format!("{path}: {v} not in enum"));
        }
        return;
    }
    if let Some(alts) = schema.get("oneOf").and_then(Value::as_array) {
        let hits = alts
            .iter()
            .filter(|alt| {
                let mut sub = Vec::new();
                check(alt, v, root, path, &mut sub);
                sub.is_empty()
            })
            .count();
        if hits != 1 {
            errors.push(format!("{path}: matched {hits} oneOf branches, want 1"));
        }
        return;
    }
    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts
                .iter()
                .any(|t| type_matches(t.as_str().expect("type name"), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            errors.push(format!("{path}: type mismatch (want {ty}, got {v})"));
            return;
        }
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_i64) {
        if let Some(x) = v.as_i64().or_else(|| v.as_u64().map(|u| u as i64)) {
            if x < min {
                errors.push(format!("{path}: {x} below minimum {min}"));
            }
        }
    }
    if let Some(max) = schema.get("maximum").and_then(Value::as_i64) {
        if let Some(x) = v.as_i64() {
            if x > max {
                errors.push(format!("{path}: {x} above maximum {max}"));
            }
        }
    }
    if let Some(pat) = schema.get("pattern").and_then(Value::as_str) {
        if let Some(s) = v.as_str() {
            let re = regex::Regex::new(pat).expect("schema pattern compiles");
            if !re.is_match(s) {
                errors.push(format!("{path}: `{s}` does not match /{pat}/"));
            }
        }
    }
    if let Some(arr) = v.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                errors.push(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
            if (arr.len() as u64) > max {
                errors.push(format!("{path}: more than {max} items"));
            }
        }
        if let Some(items) = schema.get("items") {
            for (i, item) in arr.iter().enumerate() {
                check(items, item, root, &format!("{path}[{i}]"), errors);
            }
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required {
                let key = key.as_str().expect("required key");
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing required `{key}`"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        if let Some(props) = props {
            for (key, val) in obj {
                match props.get(key) {
                    Some(sub) => check(sub, val, root, &format!("{path}.{key}"), errors),
                    None => {
                        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                            errors.push(format!("{path}: unexpected property `{key}`"));
                        }
                    }
                }
            }
        }
    }
}
