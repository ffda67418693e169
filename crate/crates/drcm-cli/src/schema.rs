//! JSON schemas of the command outputs.

use serde_json::{json, Value};

use crate::SCHEMA_VERSION;

fn ideal() -> Value {
    json!({
        "type": "object",
        "required": ["disc", "a", "b", "c", "denom"],
        "properties": {
            "disc": {"type": "integer"}, "a": {"type": "integer"}, "b": {"type": "integer"},
            "c": {"type": "integer"}, "denom": {"type": "integer"}
        }
    })
}

fn ball() -> Value {
    json!({
        "type": "object",
        "required": ["re", "im", "err2exp"],
        "properties": {"re": {"type": "string"}, "im": {"type": "string"}, "err2exp": {"type": "integer"}}
    })
}

fn ints() -> Value {
    json!({"type": "array", "items": {"type": "integer"}})
}

fn group() -> Value {
    json!({
        "type": "object",
        "required": ["divisors", "generators", "order"],
        "properties": {"divisors": ints(), "generators": {"type": "array", "items": ideal()}, "order": {"type": "integer"}}
    })
}

fn object(required: &[&str], props: Value) -> Value {
    json!({"type": "object", "required": required, "properties": props})
}

fn vector() -> Value {
    object(
        &["disc", "conductor", "spec", "prec", "components"],
        json!({
            "disc": {"type": "integer"},
            "conductor": ideal(),
            "spec": {"type": ["object", "null"]},
            "prec": {"type": "integer"},
            "components": {"type": "array", "items": object(
                &["class", "minpoly", "degree", "approx", "flags"],
                json!({
                    "class": {"type": "integer"},
                    "element": {},
                    "minpoly": {"type": "array", "items": {"type": ["integer", "string"]}},
                    "degree": {"type": "integer"},
                    "approx": ball(),
                    "flags": {"type": "array", "items": {"type": "string"}}
                }),
            )}
        }),
    )
}

fn result(cmd: &str) -> Value {
    match cmd {
        "field-info" => object(
            &["d", "disc", "omega", "units", "class_number"],
            json!({
                "d": {"type": "integer"}, "disc": {"type": "integer"}, "name": {"type": "string"},
                "omega": {"type": "string"}, "units": {"type": "integer"},
                "class_number": {"type": "integer"}, "class_group": ints()
            }),
        ),
        "classgroup" => group(),
        "rayclassgroup" => {
            let mut g = group();
            g["properties"]["modulus"] = ideal();
            g["properties"]["residue_units"] = ints();
            g["properties"]["class_group"] = ints();
            g
        }
        "drmonoid" => object(
            &["disc", "conductor", "elements", "mul", "identity", "units", "orbit_labels", "size"],
            json!({
                "disc": {"type": "integer"},
                "conductor": ideal(),
                "elements": {"type": "array", "items": ideal()},
                "mul": {"type": "array", "items": ints()},
                "identity": {"type": "integer"},
                "units": ints(),
                "orbit_labels": {"type": "array", "items": ideal()},
                "size": {"type": "integer"},
                "unit_group": ints(),
                "orbits": {"type": "array", "items": ints()}
            }),
        ),
        "theta" => object(
            &["value", "k", "radius", "prec"],
            json!({"value": ball(), "k": {"type": "array", "items": {"type": "string"}}, "radius": {"type": "integer"}, "prec": {"type": "integer"}}),
        ),
        "classical" => object(&["kind", "value", "prec"], json!({"kind": {}, "value": ball(), "prec": {"type": "integer"}})),
        "mvector-build" => vector(),
        "mvector-verify" => object(
            &["vector", "equivariance", "degree_audit", "frobenius", "crosscheck", "pass"],
            json!({
                "vector": vector(),
                "equivariance": {"type": "object"},
                "degree_audit": {"type": "array"},
                "frobenius": {"type": "array"},
                "crosscheck": {"type": "array"},
                "pass": {"type": "boolean"}
            }),
        ),
        "simn-compare" => object(&["report", "pass"], json!({"report": {"type": "object"}, "pass": {"type": "boolean"}})),
        "duality-check" => object(
            &["size", "congruences_tested", "families_tested", "failures", "pass"],
            json!({
                "size": {"type": "integer"}, "congruences_tested": {"type": "integer"},
                "families_tested": {"type": "integer"}, "failures": {"type": "array"}, "pass": {"type": "boolean"}
            }),
        ),
        "cmpoint" => object(
            &["data", "riemann_form", "report", "u", "delta", "tau", "flipped", "residual_log2"],
            json!({
                "data": {"type": "object"}, "riemann_form": {"type": "object"}, "report": {"type": "object"},
                "u": {"type": "array", "items": ints()}, "delta": {"type": "object"},
                "tau": {"type": "array", "items": {"type": "array", "items": ball()}},
                "flipped": {"type": "boolean"}, "residual_log2": {"type": "number"},
                "theta_nulls": {"type": "array", "items": ball()}
            }),
        ),
        _ => json!({}),
    }
}

/// Schema of the envelope `{"schema", "command", "result"}` for one command.
pub fn schema(cmd: &str) -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": format!("drcm {cmd}"),
        "type": "object",
        "required": ["schema", "command", "result"],
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "command": {"const": cmd},
            "result": result(cmd)
        }
    })
}
