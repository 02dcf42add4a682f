//! Structured command output. The JSON form has sorted keys and rationals as
//! `"p"` or `"p/q"` strings; the text form is derived from the same value.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::charp::NuReport;
use crate::curves::{CurveData, CurveReport};
use crate::engine::LctCertificate;
use crate::linalg::RatMatrix;
use crate::rational::{format_rational, Rational};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A check that must hold did not (or an internal error).
    pub const FAILURE: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const UPPER_BOUND_ONLY: i32 = 3;
    pub const BUDGET: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Ok,
    UpperBoundOnly,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: ReportStatus,
    pub diagnostics: Vec<String>,
    /// First line of text output, e.g. `lct = 13/9`.
    pub headline: String,
    /// The one value printed under `--quiet`.
    pub essential: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.into(),
            inputs,
            result: Value::Null,
            status: ReportStatus::Ok,
            diagnostics: Vec::new(),
            headline: String::new(),
            essential: String::new(),
        }
    }

    pub fn error(command: &str, inputs: Value, diagnostics: Vec<String>) -> Self {
        let mut r = Self::new(command, inputs);
        r.status = ReportStatus::Error;
        r.headline = "error".into();
        r.essential = "error".into();
        r.diagnostics = diagnostics;
        r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "status": self.status,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report values serialize") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headline);
        out.push('\n');
        if let Value::Object(map) = &self.result {
            write_fields(&mut out, map, 0);
        }
        out.push_str(&format!("status: {}\n", status_word(self.status)));
        for d in &self.diagnostics {
            out.push_str(&format!("note: {d}\n"));
        }
        out
    }

    pub fn render_quiet(&self) -> String {
        format!("{}\n", self.essential)
    }
}

fn status_word(s: ReportStatus) -> &'static str {
    match s {
        ReportStatus::Ok => "ok",
        ReportStatus::UpperBoundOnly => "upper_bound_only",
        ReportStatus::Error => "error",
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("({})", parts.join(", "))
        }
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect();
            parts.join(" ")
        }
        other => other.to_string(),
    }
}

fn write_fields(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match v {
            Value::Object(inner) if !inner.is_empty() => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_fields(out, inner, depth + 1);
            }
            Value::Array(rows) if rows.first().is_some_and(Value::is_array) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for row in rows {
                    out.push_str(&format!("{pad}  {}\n", inline(row)));
                }
            }
            _ => out.push_str(&format!("{pad}{k}: {}\n", inline(v))),
        }
    }
}

pub fn rational_json(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn matrix_json(m: &RatMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_json(m.row(r))).collect())
}

/// Value and status; with `full`, the witness, matrix and its invariants.
pub fn certificate_json(cert: &LctCertificate, full: bool) -> Value {
    let mut map = Map::new();
    map.insert("lct".into(), rational_json(&cert.value));
    map.insert("certificate_status".into(), json!(cert.status));
    if full {
        map.insert("solution".into(), vector_json(&cert.solution));
        map.insert("criterion_witness".into(), cert.criterion_witness.as_deref().map_or(Value::Null, vector_json));
        map.insert("matrix".into(), matrix_json(&cert.matrix));
        map.insert("rank".into(), json!(cert.rank));
        map.insert("kernel_dim".into(), json!(cert.kernel_dim));
        map.insert("binomials".into(), json!(cert.binomials));
        map.insert("monomials".into(), json!(cert.monomials));
        map.insert("vertices_examined".into(), json!(cert.vertices_examined));
    }
    Value::Object(map)
}

pub fn nu_report_json(r: &NuReport) -> Value {
    json!({
        "p": r.p,
        "e": r.e,
        "q": r.q,
        "nu": r.nu,
        "ratio": rational_json(&r.ratio),
        "lower_bound": r.lower_bound.as_ref().map_or(Value::Null, rational_json),
        "bound_satisfied": r.bound_satisfied,
        "work": r.work,
    })
}

pub fn curve_report_json(r: &CurveReport, full_certificate: bool) -> Value {
    let params = match r.params.data {
        CurveData::CompleteIntersection(p) => json!(p),
        CurveData::Herzog(p) => json!({
            "a1": p.a1, "a2": p.a2, "b1": p.b1, "b2": p.b2, "c1": p.c1, "c2": p.c2,
            "alpha": rational_json(&p.alpha()),
            "beta": rational_json(&p.beta()),
            "gamma": rational_json(&p.gamma()),
        }),
    };
    let mut map = Map::new();
    map.insert("kind".into(), json!(r.params.kind()));
    map.insert("params".into(), params);
    map.insert("permutation".into(), json!(r.params.permutation));
    map.insert("weights".into(), json!(r.params.weights));
    map.insert("lct".into(), rational_json(&r.value));
    if let Some((row, value)) = &r.table {
        map.insert(
            "table".into(),
            json!({ "row": row.number(), "condition": row.condition(), "value": rational_json(value) }),
        );
    }
    if let Some(cert) = &r.certificate {
        map.insert("lp".into(), certificate_json(cert, full_certificate));
    }
    Value::Object(map)
}
