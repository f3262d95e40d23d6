//! JSON encodings of scalars, matrices, block endomorphisms and Lie algebras.
//!
//! Rationals are strings `"p/q"` (or `"p"` when `q = 1`), always reduced with
//! `q > 0`. Gaussian rationals are `{"re", "im"}`, Lorentz numbers `{"a", "b"}`
//! and quaternions `{"w", "x", "y", "z"}`, each component a rational string.
//! A matrix is `{"algebra": ..., "entries": [[...], ...]}` in row-major order.
//! Lie algebras list their nonzero brackets with 1-based indices.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::Error;
use crate::extended::{BlockEndo, ExtendedVector};
use crate::lie::LieAlgebraData;
use crate::scalars::Algebra;
use crate::matrix::RMat;
use crate::scalars::Rational;

/// Canonical text of a rational.
pub fn rational_to_string(x: &Rational) -> String {
    if *x.denom() == BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn ser_rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational_to_string))
}

pub(crate) fn ser_rmat<S: Serializer>(m: &RMat, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(rational_to_string).collect())
        .collect();
    rows.serialize(s)
}

pub(crate) fn ser_rmat_block<S: Serializer>(m: &BlockEndo, s: S) -> Result<S::Ok, S::Error> {
    ser_rmat(m.matrix(), s)
}

/// Parses `"p/q"`, `"p"`, a decimal string such as `"0.25"`, or an integer.
pub fn parse_rational(v: &Value) -> crate::Result<Rational> {
    match v {
        Value::String(s) => parse_rational_str(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(Error::Parse(format!(
                "number {n} is not an integer; write non-integers as \"p/q\""
            ))),
        },
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

pub fn parse_rational_str(s: &str) -> crate::Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    if let Some((p, d)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().map_err(|_| bad())? };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let x = Rational::new(whole * &den + frac, den);
        return Ok(if neg { -x } else { x });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// A real matrix: either `{"algebra": "real", "entries": [[...]]}` or the bare
/// array of rows.
pub fn parse_matrix(v: &Value) -> crate::Result<RMat> {
    let rows = match v {
        Value::Array(_) => v,
        Value::Object(o) => {
            if let Some(a) = o.get("algebra") {
                let alg: Algebra = serde_json::from_value(a.clone())
                    .map_err(|e| Error::Parse(format!("bad algebra tag: {e}")))?;
                if alg != Algebra::Real {
                    return Err(Error::AlgebraMismatch {
                        expected: Algebra::Real,
                        found: alg,
                    });
                }
            }
            o.get("entries")
                .ok_or_else(|| Error::Parse("matrix object lacks \"entries\"".into()))?
        }
        other => return Err(Error::Parse(format!("expected a matrix, found {other}"))),
    };
    let Value::Array(rows) = rows else {
        return Err(Error::Parse("\"entries\" must be an array of rows".into()));
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let Value::Array(r) = r else {
            return Err(Error::Parse(format!("row {} is not an array", i + 1)));
        };
        out.push(
            r.iter()
                .enumerate()
                .map(|(j, x)| {
                    parse_rational(x).map_err(|e| Error::Parse(format!("entry ({}, {}): {e}", i + 1, j + 1)))
                })
                .collect::<crate::Result<Vec<_>>>()?,
        );
    }
    RMat::try_from_rows(out)
}

pub fn matrix_to_json(m: &RMat) -> Value {
    json!({
        "algebra": "real",
        "entries": m.to_rows().iter().map(|r| r.iter().map(rational_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn rational_vec_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rational_to_string(x))).collect())
}

/// `{"vec": [...], "covec": [...]}`.
pub fn parse_section(v: &Value) -> crate::Result<ExtendedVector> {
    let get = |k: &str| -> crate::Result<Vec<Rational>> {
        match v.get(k) {
            Some(Value::Array(a)) => a.iter().map(parse_rational).collect(),
            None => Ok(Vec::new()),
            Some(other) => Err(Error::Parse(format!("\"{k}\" must be an array, found {other}"))),
        }
    };
    let (mut vec, mut covec) = (get("vec")?, get("covec")?);
    if vec.is_empty() && covec.is_empty() {
        return Err(Error::Parse("section needs \"vec\" or \"covec\"".into()));
    }
    if vec.is_empty() {
        vec = vec![Rational::zero(); covec.len()];
    }
    if covec.is_empty() {
        covec = vec![Rational::zero(); vec.len()];
    }
    ExtendedVector::new(vec, covec)
}

/// `{"dim": n, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}]}` with
/// 1-based indices and `i < j`; omitted brackets vanish.
pub fn parse_lie_algebra(v: &Value) -> crate::Result<LieAlgebraData> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("Lie algebra needs a positive integer \"dim\"".into()))? as usize;
    if dim == 0 {
        return Err(Error::Parse("\"dim\" must be positive".into()));
    }
    let mut brackets = Vec::new();
    if let Some(list) = v.get("brackets") {
        let Value::Array(list) = list else {
            return Err(Error::Parse("\"brackets\" must be an array".into()));
        };
        for (t, b) in list.iter().enumerate() {
            let idx = |k: &str| -> crate::Result<usize> {
                let i = b
                    .get(k)
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse(format!("bracket {}: missing index \"{k}\"", t + 1)))?
                    as usize;
                if i == 0 || i > dim {
                    return Err(Error::Parse(format!("bracket {}: index {k} = {i} out of 1..={dim}", t + 1)));
                }
                Ok(i - 1)
            };
            let (i, j) = (idx("i")?, idx("j")?);
            if i >= j {
                return Err(Error::Parse(format!("bracket {}: need i < j", t + 1)));
            }
            let mut coeffs = vec![Rational::zero(); dim];
            if let Some(c) = b.get("coeffs") {
                let Value::Object(c) = c else {
                    return Err(Error::Parse(format!("bracket {}: \"coeffs\" must be an object", t + 1)));
                };
                for (k, x) in c {
                    let k: usize = k
                        .parse()
                        .ok()
                        .filter(|k| (1..=dim).contains(k))
                        .ok_or_else(|| Error::Parse(format!("bracket {}: bad coefficient index {k:?}", t + 1)))?;
                    coeffs[k - 1] = parse_rational(x)?;
                }
            }
            brackets.push((i, j, coeffs));
        }
    }
    LieAlgebraData::from_brackets(dim, &brackets)
}

pub fn lie_algebra_to_json(g: &LieAlgebraData) -> Value {
    let brackets: Vec<Value> = g
        .brackets()
        .into_iter()
        .map(|(i, j, c)| {
            let coeffs: serde_json::Map<String, Value> = c
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| ((k + 1).to_string(), Value::String(rational_to_string(x))))
                .collect();
            json!({"i": i + 1, "j": j + 1, "coeffs": coeffs})
        })
        .collect();
    json!({"dim": g.dim(), "brackets": brackets})
}
