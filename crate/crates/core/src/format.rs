//! JSON encodings shared by reports and point-set files.
//!
//! Integers are written as JSON numbers when they fit in an i64 and as
//! decimal strings otherwise; both forms are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn rational_json(r: &BigRational) -> Value {
    json!({ "num": int_json(r.numer()), "den": int_json(r.denom()) })
}

pub fn scalar_json(s: &Scalar) -> Value {
    json!({
        "num": int_json(s.a().numer()),
        "den": int_json(s.a().denom()),
        "rnum": int_json(s.b().numer()),
        "rden": int_json(s.b().denom()),
    })
}

pub fn point_json(p: &Point) -> Value {
    json!({ "x": scalar_json(&p.x), "y": scalar_json(&p.y) })
}

fn invalid(path: &str, what: &str) -> Error {
    Error::InvalidInput(format!("{path}: {what}"))
}

pub fn parse_int(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| invalid(path, "expected an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| invalid(path, "expected an integer string")),
        _ => Err(invalid(path, "expected an integer")),
    }
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| invalid(&format!("{path}.{key}"), "missing"))
}

fn nonzero(x: BigInt, path: &str) -> Result<BigInt> {
    if x.is_zero() {
        Err(invalid(path, "zero denominator"))
    } else {
        Ok(x)
    }
}

pub fn parse_rational_json(v: &Value, path: &str) -> Result<BigRational> {
    if !v.is_object() {
        return Err(invalid(path, "expected {num, den}"));
    }
    let num = parse_int(field(v, "num", path)?, &format!("{path}.num"))?;
    let den = nonzero(parse_int(field(v, "den", path)?, &format!("{path}.den"))?, &format!("{path}.den"))?;
    Ok(BigRational::new(num, den))
}

/// `{num, den, rnum, rden}`; `rnum`/`rden` default to 0/1.
pub fn parse_scalar(v: &Value, path: &str) -> Result<Scalar> {
    if !v.is_object() {
        return Err(invalid(path, "expected {num, den, rnum, rden}"));
    }
    let a = parse_rational_json(v, path)?;
    let rnum = match v.get("rnum") {
        Some(x) => parse_int(x, &format!("{path}.rnum"))?,
        None => BigInt::zero(),
    };
    let rden = match v.get("rden") {
        Some(x) => nonzero(parse_int(x, &format!("{path}.rden"))?, &format!("{path}.rden"))?,
        None => BigInt::from(1),
    };
    Ok(Scalar::new(a, BigRational::new(rnum, rden)))
}

pub fn parse_point(v: &Value, path: &str) -> Result<Point> {
    Ok(Point::new(
        parse_scalar(field(v, "x", path)?, &format!("{path}.x"))?,
        parse_scalar(field(v, "y", path)?, &format!("{path}.y"))?,
    ))
}

/// Declared-mode coordinate: a JSON number or a decimal string.
pub fn parse_decimal(v: &Value, path: &str) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    };
    x.filter(|x| x.is_finite())
        .ok_or_else(|| invalid(path, "expected a decimal number"))
}

/// `serialize_with` helper for a single rational.
pub fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    rational_json(r).serialize(s)
}

/// `serialize_with` helper for a vector of rationals.
pub fn ser_rationals<S: Serializer>(rs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(rational_json))
}
