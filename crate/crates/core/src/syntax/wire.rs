//! JSON encodings of field elements, polynomials and rational functions.

use serde_json::{json, Value};

use crate::error::{MahlerError, Result};
use crate::field::rational::{format_rational, parse_rational};
use crate::field::{Field, FieldElem, Poly, RatFun, Rational};

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn elem_to_json(e: &FieldElem) -> Value {
    Value::Array(e.to_strings().into_iter().map(Value::String).collect())
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(elem_to_json).collect())
}

pub fn ratfun_to_json(c: &RatFun) -> Value {
    json!({"num": poly_to_json(c.num()), "den": poly_to_json(c.den())})
}

fn invalid(msg: impl Into<String>) -> MahlerError {
    MahlerError::Invalid(msg.into())
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| invalid(format!("non-integer number {n}; use a rational string"))),
        _ => Err(invalid(format!("expected rational, found {v}"))),
    }
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<FieldElem> {
    let arr = v.as_array().ok_or_else(|| invalid(format!("expected coordinate array, found {v}")))?;
    if arr.len() != field.degree() {
        return Err(MahlerError::FieldMismatch(format!(
            "element has {} coordinates, field Q(zeta_{}) needs {}",
            arr.len(),
            field.order(),
            field.degree()
        )));
    }
    let coords = arr.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    Ok(field.from_coords(coords))
}

pub fn poly_from_json(field: &Field, v: &Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| invalid(format!("expected polynomial array, found {v}")))?;
    let coeffs = arr.iter().map(|c| elem_from_json(field, c)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_coeffs(field, coeffs))
}

pub fn ratfun_from_json(field: &Field, v: &Value) -> Result<RatFun> {
    let num = poly_from_json(field, v.get("num").ok_or_else(|| invalid("rational function without \"num\""))?)?;
    let den = match v.get("den") {
        Some(d) => poly_from_json(field, d)?,
        None => Poly::one(field),
    };
    if den.is_zero() {
        return Err(MahlerError::ZeroDenominator);
    }
    Ok(RatFun::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratfun_round_trip() {
        let f = Field::new(5);
        let c = RatFun::new(Poly::from_coeffs(&f, vec![-f.zeta().pow(2), f.one()]), Poly::linear(&f.zeta()));
        let v = ratfun_to_json(&c);
        assert_eq!(ratfun_from_json(&f, &v).unwrap(), c);
        assert_eq!(v.to_string(), serde_json::to_string(&ratfun_to_json(&ratfun_from_json(&f, &v).unwrap())).unwrap());
    }

    #[test]
    fn coordinate_count_checked() {
        let f = Field::new(5);
        assert!(matches!(elem_from_json(&f, &json!(["1"])), Err(MahlerError::FieldMismatch(_))));
    }
}
