//! Output rendering. Every float is printed to 12 significant digits; JSON
//! values are rounded to 12 significant digits before serialization so the
//! textual output is stable and format-independent.

use serde_json::Value;

/// Round to 12 significant digits.
pub fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let magnitude = v.abs().log10().floor();
    let factor = 10f64.powi(11 - magnitude as i32);
    (v * factor).round() / factor
}

/// Apply [`round_sig12`] to every number in a JSON tree.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig12(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Fixed-width scientific notation with 12 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

/// A `name,value` CSV / `name = value` pretty table.
pub enum Field {
    Float(&'static str, f64),
    /// A float that may be infinite (infinite divergences print as `inf`).
    MaybeFloat(&'static str, Option<f64>),
    Int(&'static str, u64),
    Bool(&'static str, bool),
    Text(&'static str, String),
}

impl Field {
    fn value_string(&self) -> String {
        match self {
            Field::Float(_, v) => fmt_f64(*v),
            Field::MaybeFloat(_, Some(v)) => fmt_f64(*v),
            Field::MaybeFloat(_, None) => "inf".to_string(),
            Field::Int(_, v) => v.to_string(),
            Field::Bool(_, v) => v.to_string(),
            Field::Text(_, v) => v.clone(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Field::Float(n, _)
            | Field::MaybeFloat(n, _)
            | Field::Int(n, _)
            | Field::Bool(n, _)
            | Field::Text(n, _) => n,
        }
    }
}

pub fn fields_to_csv(fields: &[Field]) -> String {
    let mut out = String::from("name,value\n");
    for f in fields {
        out.push_str(&format!("{},{}\n", f.name(), f.value_string()));
    }
    out
}

pub fn fields_to_pretty(fields: &[Field]) -> String {
    let width = fields.iter().map(|f| f.name().len()).max().unwrap_or(0);
    let mut out = String::new();
    for f in fields {
        out.push_str(&format!("{:width$}  {}\n", f.name(), f.value_string()));
    }
    out
}
