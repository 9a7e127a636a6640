//! Multivector wire format:
//! `{"algebra":[p,q,r],"coeffs":{"1":[re,im],"e12":[re,im],...}}`.
//!
//! Omitted keys are zero. Blade keys use ascending generator indices;
//! written orientations such as `"e21"` are accepted on input and folded
//! into the coefficient sign. Output is deterministic: keys in blade mask
//! order, floats with 17 significant digits.

use std::sync::Arc;

use num_complex::Complex64;
use serde_json::Value;

use crate::algebra::Algebra;
use crate::error::{GaError, Result};
use crate::multivector::Multivector;

/// Fixed float formatting used for all emitted JSON numbers.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // normalize -0.0
        return "0".to_string();
    }
    format!("{x:.16e}")
}

pub fn complex_json(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// Serialize a multivector to the wire format (single line, fixed order).
pub fn to_json(mv: &Multivector) -> String {
    let (p, q, r) = mv.algebra().signature();
    let mut out = format!("{{\"algebra\":[{p},{q},{r}],\"coeffs\":{{");
    let mut first = true;
    for (mask, &c) in mv.coeffs().iter().enumerate() {
        if c == Complex64::ZERO {
            continue;
        }
        if !first {
            out.push(',');
        }
        out.push_str(&format!(
            "\"{}\":{}",
            mv.algebra().blade_name(mask),
            complex_json(c)
        ));
        first = false;
    }
    out.push_str("}}");
    out
}

pub fn from_json_str(s: &str) -> Result<Multivector> {
    let value: Value = serde_json::from_str(s).map_err(|e| GaError::Json(e.to_string()))?;
    from_json_value(&value)
}

pub fn from_json_value(value: &Value) -> Result<Multivector> {
    let obj = value
        .as_object()
        .ok_or_else(|| GaError::Json("expected a JSON object".into()))?;
    let algebra = parse_algebra_field(
        obj.get("algebra")
            .ok_or_else(|| GaError::Json("missing \"algebra\" field".into()))?,
    )?;
    let mut mv = Multivector::zero(&algebra);
    if let Some(coeffs) = obj.get("coeffs") {
        let map = coeffs
            .as_object()
            .ok_or_else(|| GaError::Json("\"coeffs\" must be an object".into()))?;
        for (key, raw) in map {
            let (mask, sign) = algebra.parse_blade_name(key)?;
            let c = parse_complex(raw)?;
            let current = mv.coeff(mask);
            mv = mv.with_coeff(mask, current + c * sign);
        }
    }
    Ok(mv)
}

fn parse_algebra_field(value: &Value) -> Result<Arc<Algebra>> {
    let arr = value
        .as_array()
        .ok_or_else(|| GaError::Json("\"algebra\" must be an array [p,q,r]".into()))?;
    if arr.is_empty() || arr.len() > 3 {
        return Err(GaError::Json("\"algebra\" must have 1 to 3 entries".into()));
    }
    let mut pqr = [0usize; 3];
    for (i, v) in arr.iter().enumerate() {
        pqr[i] = v
            .as_u64()
            .ok_or_else(|| GaError::Json("algebra entries must be non-negative integers".into()))?
            as usize;
    }
    Algebra::new(pqr[0], pqr[1], pqr[2])
}

/// Accepts `[re, im]` pairs and bare numbers (treated as real).
pub fn parse_complex(value: &Value) -> Result<Complex64> {
    if let Some(x) = value.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    let arr = value
        .as_array()
        .ok_or_else(|| GaError::Json("complex values must be [re,im] pairs".into()))?;
    if arr.len() != 2 {
        return Err(GaError::Json("complex values must be [re,im] pairs".into()));
    }
    let re = arr[0]
        .as_f64()
        .ok_or_else(|| GaError::Json("non-numeric real part".into()))?;
    let im = arr[1]
        .as_f64()
        .ok_or_else(|| GaError::Json("non-numeric imaginary part".into()))?;
    Ok(Complex64::new(re, im))
}
