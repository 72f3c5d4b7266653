//! JSON schemas for the file-facing surfaces.
//!
//! Field specification: `{"poly": [c0, ..., 1], "integral_basis": [[...]],
//! "precision_bits": n}` — coefficients may be JSON integers of any size
//! or strings; rationals may be numbers, "p/q" strings, or [num, den]
//! pairs; `integral_basis` is column-major (entry j is the coordinate
//! vector of the j-th basis element) and optional.
//!
//! Ideal: `{"den": d, "hnf": [[...], ...]}` with column-major hnf.
//! Divisor: `{"ideal": <ideal or "OF">, "log_u": [...]}` — reals are
//! accepted as numbers or decimal strings and always emitted as strings so
//! no precision is lost in transit.

use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::divisor::ArakelovDivisor;
use crate::error::{Error, Result};
use crate::field::{build_field, NumberField};
use crate::ideals::FracIdeal;
use crate::pipeline::{ReductionOutcome, SweepResult, TraceRow};
use crate::theta::H0Result;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn integer_from_value(v: &Value) -> Result<Integer> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(bad("expected an integer (number or string)")),
    };
    text.parse::<Integer>().map_err(|_| bad(format!("not an integer: {}", text)))
}

fn rational_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => {
            let text = n.to_string();
            if let Ok(z) = text.parse::<Integer>() {
                return Ok(Rational::from(z));
            }
            Err(bad(format!("rational entries must be exact; got {}", text)))
        }
        Value::String(s) => {
            s.trim().parse::<Rational>().map_err(|_| bad(format!("not a rational: {}", s)))
        }
        Value::Array(pair) if pair.len() == 2 => {
            let num = integer_from_value(&pair[0])?;
            let den = integer_from_value(&pair[1])?;
            if den.cmp0() == std::cmp::Ordering::Equal {
                return Err(bad("rational with zero denominator"));
            }
            Ok(Rational::from((num, den)))
        }
        _ => Err(bad("expected a rational (number, \"p/q\" string, or [num, den])")),
    }
}

fn float_from_value(v: &Value, prec: u32) -> Result<Float> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(bad("expected a real (number or decimal string)")),
    };
    let parsed = Float::parse(&text).map_err(|_| bad(format!("not a real: {}", text)))?;
    Ok(Float::with_val(prec, parsed))
}

/// Full-precision decimal string of a float (scientific notation allowed).
pub fn float_to_string(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

/// Parse a field specification document and build the field; the optional
/// `precision_override` wins over the file's own `precision_bits`.
pub fn field_from_spec_str(spec: &str, precision_override: Option<u32>) -> Result<NumberField> {
    let v: Value = serde_json::from_str(spec).map_err(|e| bad(format!("invalid JSON: {}", e)))?;
    let obj = v.as_object().ok_or_else(|| bad("field spec must be a JSON object"))?;
    let poly_v = obj.get("poly").ok_or_else(|| bad("field spec needs \"poly\""))?;
    let poly: Vec<Integer> = poly_v
        .as_array()
        .ok_or_else(|| bad("\"poly\" must be an array"))?
        .iter()
        .map(integer_from_value)
        .collect::<Result<_>>()?;
    let basis: Option<Vec<Vec<Rational>>> = match obj.get("integral_basis") {
        None | Some(Value::Null) => None,
        Some(Value::Array(cols)) => Some(
            cols.iter()
                .map(|col| {
                    col.as_array()
                        .ok_or_else(|| bad("integral_basis must be an array of columns"))?
                        .iter()
                        .map(rational_from_value)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?,
        ),
        Some(_) => return Err(bad("integral_basis must be an array of columns")),
    };
    let prec_file = match obj.get("precision_bits") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let z = integer_from_value(v)?;
            Some(z.to_u32().ok_or_else(|| bad("precision_bits out of range"))?)
        }
    };
    build_field(&poly, basis.as_deref(), precision_override.or(prec_file))
}

pub fn ideal_from_value(v: &Value, field: &NumberField) -> Result<FracIdeal> {
    if let Value::String(s) = v {
        if s == "OF" || s == "O_F" {
            return Ok(FracIdeal::ring_of_integers(field.n));
        }
        return Err(bad(format!("unknown ideal shorthand: {}", s)));
    }
    let obj = v.as_object().ok_or_else(|| bad("ideal must be an object or \"OF\""))?;
    let den = match obj.get("den") {
        None => Integer::from(1),
        Some(d) => integer_from_value(d)?,
    };
    if den.cmp0() != std::cmp::Ordering::Greater {
        return Err(bad("ideal denominator must be positive"));
    }
    let hnf = obj.get("hnf").ok_or_else(|| bad("ideal needs \"hnf\""))?;
    let cols = hnf.as_array().ok_or_else(|| bad("hnf must be an array of columns"))?;
    if cols.len() != field.n {
        return Err(bad(format!("hnf must have {} columns", field.n)));
    }
    let gens: Vec<Vec<Rational>> = cols
        .iter()
        .map(|col| {
            let entries =
                col.as_array().ok_or_else(|| bad("hnf columns must be arrays"))?;
            if entries.len() != field.n {
                return Err(bad(format!("hnf columns must have {} entries", field.n)));
            }
            entries
                .iter()
                .map(|e| Ok(Rational::from((integer_from_value(e)?, den.clone()))))
                .collect()
        })
        .collect::<Result<_>>()?;
    FracIdeal::from_generators(&gens)
}

pub fn ideal_to_value(ideal: &FracIdeal) -> Value {
    json!({
        "den": ideal.den().to_string(),
        "hnf": ideal
            .hnf()
            .iter()
            .map(|col| col.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn divisor_from_str(spec: &str, field: &NumberField) -> Result<ArakelovDivisor> {
    let v: Value = serde_json::from_str(spec).map_err(|e| bad(format!("invalid JSON: {}", e)))?;
    divisor_from_value(&v, field)
}

pub fn divisor_from_value(v: &Value, field: &NumberField) -> Result<ArakelovDivisor> {
    let obj = v.as_object().ok_or_else(|| bad("divisor must be a JSON object"))?;
    let ideal = match obj.get("ideal") {
        None => FracIdeal::ring_of_integers(field.n),
        Some(iv) => ideal_from_value(iv, field)?,
    };
    let log_u_v = obj.get("log_u").ok_or_else(|| bad("divisor needs \"log_u\""))?;
    let arr = log_u_v.as_array().ok_or_else(|| bad("log_u must be an array"))?;
    if arr.len() != field.num_places() {
        return Err(bad(format!("log_u must have {} entries (one per infinite place)", field.num_places())));
    }
    let log_u = arr
        .iter()
        .map(|e| float_from_value(e, field.precision_bits))
        .collect::<Result<Vec<_>>>()?;
    Ok(ArakelovDivisor { ideal, log_u })
}

pub fn divisor_to_value(d: &ArakelovDivisor) -> Value {
    json!({
        "ideal": ideal_to_value(&d.ideal),
        "log_u": d.log_u.iter().map(|x| Value::String(float_to_string(x))).collect::<Vec<_>>(),
    })
}

/// One trace line, mirroring the reference tables:
/// `{"i": step, "hnf": [[...]], "den": "...", "norm_Jinv": "...",
///   "log_omega": ["...", ...]}`.
pub fn trace_row_to_value(row: &TraceRow) -> Value {
    json!({
        "i": row.step,
        "den": row.ideal.den().to_string(),
        "hnf": row
            .ideal
            .hnf()
            .iter()
            .map(|col| col.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "norm_Jinv": row.norm_j_inv.to_string(),
        "log_omega": row.log_omega.iter().map(|x| Value::String(float_to_string(x))).collect::<Vec<_>>(),
    })
}

pub fn reduction_to_value(out: &ReductionOutcome) -> Value {
    json!({
        "J": ideal_to_value(&out.ideal),
        "norm_Jinv": out.norm_j_inv().to_string(),
        "log_s": out.log_s.iter().map(|x| Value::String(float_to_string(x))).collect::<Vec<_>>(),
    })
}

pub fn h0_result_to_value(r: &H0Result) -> Value {
    json!({
        "h0": Value::String(float_to_string(&r.value)),
        "M": r.m,
        "delta": r.delta,
        "term_count": r.term_count,
        "path": r.path.as_str(),
        "tail_bound": Value::String(float_to_string(&r.tail_bound)),
    })
}

/// Fixed 10-significant-digit decimal used by the CSV table; this width
/// round-trips through f64 parsing byte-identically.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=14).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.9e}", x)
    }
}

pub fn sweep_to_csv(result: &SweepResult, dims: usize) -> String {
    let mut out = String::new();
    for i in 1..=dims {
        out.push_str(&format!("offset{},", i));
    }
    out.push_str("h0,M,term_count,cache_index\n");
    for row in &result.rows {
        for t in &row.offsets {
            out.push_str(&sig10(*t));
            out.push(',');
        }
        out.push_str(&format!("{},{},{},{}\n", sig10(row.h0), sig10(row.m), row.term_count, row.cache_index));
    }
    out
}

/// Re-parse an emitted CSV table (used to verify the round-trip contract).
pub fn csv_roundtrip(csv: &str, dims: usize) -> Result<String> {
    let mut lines = csv.lines();
    let header = lines.next().ok_or_else(|| bad("empty CSV"))?.to_string();
    let mut out = header.clone();
    out.push('\n');
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dims + 4 {
            return Err(bad("CSV row has the wrong number of fields"));
        }
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            if i < dims + 2 {
                let x: f64 = f.parse().map_err(|_| bad("CSV field is not a real"))?;
                out.push_str(&sig10(x));
            } else {
                let x: usize = f.parse().map_err(|_| bad("CSV field is not an integer"))?;
                out.push_str(&x.to_string());
            }
        }
        out.push('\n');
    }
    Ok(out)
}
