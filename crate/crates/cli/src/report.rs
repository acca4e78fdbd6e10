//! Structured reports: one JSON-able value per command, plus the
//! human-readable rendering. Output is deterministic: maps are sorted,
//! rationals are exact `p/q` strings, indices are 1-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    pub human: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Report {
        Report {
            command: command.to_string(),
            inputs,
            results: Value::Null,
            warnings: Vec::new(),
            human: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "warnings": self.warnings,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.command));
        for line in &self.human {
            out.push_str(line);
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

pub fn rat_s(x: &BigRational) -> String {
    x.to_string()
}

pub fn rats_json(xs: &[BigRational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(rat_s(x))).collect())
}

pub fn rats_s(xs: &[BigRational]) -> String {
    let parts: Vec<String> = xs.iter().map(rat_s).collect();
    format!("({})", parts.join(","))
}

pub fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x.clone()) {
        Ok(v) => json!(v),
        Err(_) => Value::String(x.to_string()),
    }
}

pub fn ints_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}

pub fn ints_s(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(BigInt::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn matrix_json(m: &hypertoric::IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| ints_json(m.row(r))).collect())
}

/// 1-based index list for display.
pub fn indices_json(idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| json!(i + 1)).collect())
}

pub fn indices_s(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|&i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Integer linear combination such as `u1 - 2u3 + u4`.
pub fn combination_s(coeffs: &[BigInt], var: &str) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&format!("{var}{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Square-free monomial such as `u1*u2*u4` from a 0-based index set.
pub fn monomial_s(idx: &[usize], var: &str) -> String {
    idx.iter()
        .map(|&i| format!("{var}{}", i + 1))
        .collect::<Vec<_>>()
        .join("*")
}
