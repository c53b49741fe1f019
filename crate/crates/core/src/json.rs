//! JSON wire formats.
//!
//! ```text
//! matrix     [["1", "-1/2"], ["0", "3"]]            rows of rational strings
//! subspace   {"ambient_dim": 2, "span": [["1", "0"]]}   one spanning vector per entry
//! instance   {"operator": matrix, "M": subspace, "N": subspace}
//! operator   {"bands": [{"offset": 1, "coeff": coeff}], "domain_op": "same" | {"bands": …}}
//! coeff      {"modulus": 2, "pieces": [{"residue": 1, "poly": ["0", "1"]}, …]} or a constant string
//! index set  {"modulus": 2, "residues": [1], "add": [], "remove": []}
//! sequence   "harmonic" | {"finite": ["1", "1/2"]} | {"num": coeff, "den": coeff}
//! ```
//!
//! Parse errors name the offending field by its path.

use std::collections::BTreeSet;

use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::complementable::Instance;
use crate::error::FormatError;
use crate::matrix::Matrix;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::seqspace::{Band, BandedOperator, CoefficientFn, DenselyDefinedOperator, IndexSet, Poly, SequenceRecipe};
use crate::subspace::Subspace;

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn err(field: &str, message: impl Into<String>) -> FormatError {
    FormatError::new(field, message)
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, field: &str) -> Result<&'a Value, FormatError> {
    obj.get(key)
        .ok_or_else(|| err(&format!("{field}.{key}"), "missing field"))
}

fn as_object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| err(field, "expected an object"))
}

fn as_array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| err(field, "expected an array"))
}

fn as_count(v: &Value, field: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| err(field, "expected a nonnegative integer"))
}

fn as_int(v: &Value, field: &str) -> Result<i64, FormatError> {
    v.as_i64().ok_or_else(|| err(field, "expected an integer"))
}

pub fn parse_scalar<F: Scalar>(v: &Value, field: &str) -> Result<F, FormatError> {
    match v {
        Value::String(s) => F::parse_wire(s).map_err(|e| err(field, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(F::from_i64(n.as_i64().expect("checked i64"))),
        _ => Err(err(field, "expected a rational string such as \"-1/2\"")),
    }
}

fn parse_vector<F: Scalar>(v: &Value, field: &str) -> Result<Vec<F>, FormatError> {
    as_array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_scalar(x, &format!("{field}[{i}]")))
        .collect()
}

pub fn parse_matrix<F: Scalar>(v: &Value, field: &str) -> Result<Matrix<F>, FormatError> {
    let rows = as_array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(r, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(err(field, "matrix has no rows"));
    }
    Matrix::from_rows(rows).map_err(|e| err(field, e.to_string()))
}

pub fn matrix_to_json<F: Scalar>(m: &Matrix<F>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn parse_subspace<F: Scalar>(v: &Value, field: &str) -> Result<Subspace<F>, FormatError> {
    let obj = as_object(v, field)?;
    let n = as_count(get(obj, "ambient_dim", field)?, &format!("{field}.ambient_dim"))?;
    let span_field = format!("{field}.span");
    let vectors = as_array(get(obj, "span", field)?, &span_field)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = format!("{span_field}[{i}]");
            let vec: Vec<F> = parse_vector(x, &f)?;
            if vec.len() != n {
                return Err(err(&f, format!("expected {n} entries, found {}", vec.len())));
            }
            Ok(vec)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Subspace::new(n, vectors).map_err(|e| err(field, e.to_string()))
}

pub fn subspace_to_json<F: Scalar>(s: &Subspace<F>) -> Value {
    let span: Vec<Value> = s
        .spanning_set()
        .columns()
        .into_iter()
        .map(|c| Value::Array(c.into_iter().map(|x| Value::String(x.to_string())).collect()))
        .collect();
    json!({ "ambient_dim": s.ambient_dim(), "span": span })
}

pub fn parse_instance<F: Scalar>(v: &Value) -> Result<Instance<F>, FormatError> {
    let obj = as_object(v, "instance")?;
    let operator = parse_matrix(get(obj, "operator", "instance")?, "operator")?;
    let m: Subspace<F> = parse_subspace(get(obj, "M", "instance")?, "M")?;
    let n: Subspace<F> = parse_subspace(get(obj, "N", "instance")?, "N")?;
    if m.ambient_dim() != operator.cols() {
        return Err(err(
            "M.ambient_dim",
            format!("operator has {} columns", operator.cols()),
        ));
    }
    if n.ambient_dim() != operator.rows() {
        return Err(err("N.ambient_dim", format!("operator has {} rows", operator.rows())));
    }
    Ok(Instance { operator, m, n })
}

pub fn instance_to_json<F: Scalar>(inst: &Instance<F>) -> Value {
    json!({
        "operator": matrix_to_json(&inst.operator),
        "M": subspace_to_json(&inst.m),
        "N": subspace_to_json(&inst.n),
    })
}

fn parse_rational_value(v: &Value, field: &str) -> Result<Rational, FormatError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| err(field, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked i64").into())),
        _ => Err(err(field, "expected a rational string")),
    }
}

pub fn parse_poly(v: &Value, field: &str) -> Result<Poly, FormatError> {
    let coeffs = as_array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_rational_value(c, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

pub fn parse_coefficient(v: &Value, field: &str) -> Result<CoefficientFn, FormatError> {
    if v.is_string() || v.is_number() {
        return Ok(CoefficientFn::constant(parse_rational_value(v, field)?));
    }
    let obj = as_object(v, field)?;
    let modulus = as_count(get(obj, "modulus", field)?, &format!("{field}.modulus"))?;
    let pieces_field = format!("{field}.pieces");
    let pieces = as_array(get(obj, "pieces", field)?, &pieces_field)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let f = format!("{pieces_field}[{i}]");
            let po = as_object(p, &f)?;
            let residue = as_count(get(po, "residue", &f)?, &format!("{f}.residue"))?;
            let poly = parse_poly(get(po, "poly", &f)?, &format!("{f}.poly"))?;
            Ok((residue, poly))
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    CoefficientFn::new(modulus, pieces).map_err(|e| err(field, e.to_string()))
}

fn coefficient_to_json(c: &CoefficientFn) -> Value {
    let pieces: Vec<Value> = c
        .pieces()
        .iter()
        .enumerate()
        .map(|(r, p)| {
            let poly: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
            json!({ "residue": r, "poly": if poly.is_empty() { vec!["0".to_string()] } else { poly } })
        })
        .collect();
    json!({ "modulus": c.modulus(), "pieces": pieces })
}

pub fn parse_banded(v: &Value, field: &str) -> Result<BandedOperator, FormatError> {
    let obj = as_object(v, field)?;
    let bands_field = format!("{field}.bands");
    let bands = as_array(get(obj, "bands", field)?, &bands_field)?
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let f = format!("{bands_field}[{i}]");
            let bo = as_object(b, &f)?;
            let offset = as_int(get(bo, "offset", &f)?, &format!("{f}.offset"))?;
            let coeff = parse_coefficient(get(bo, "coeff", &f)?, &format!("{f}.coeff"))?;
            Ok(Band { offset, coeff })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    BandedOperator::new(bands).map_err(|e| err(&bands_field, e.to_string()))
}

pub fn banded_to_json(op: &BandedOperator) -> Value {
    let bands: Vec<Value> = op
        .bands()
        .iter()
        .map(|b| json!({ "offset": b.offset, "coeff": coefficient_to_json(&b.coeff) }))
        .collect();
    json!({ "bands": bands })
}

pub fn parse_operator_spec(v: &Value, field: &str) -> Result<DenselyDefinedOperator, FormatError> {
    let action = parse_banded(v, field)?;
    let obj = as_object(v, field)?;
    match obj.get("domain_op") {
        None => Ok(DenselyDefinedOperator::new(action)),
        Some(Value::String(s)) if s == "same" => Ok(DenselyDefinedOperator::new(action)),
        Some(Value::String(_)) => Err(err(&format!("{field}.domain_op"), "expected \"same\" or an operator")),
        Some(w) => Ok(DenselyDefinedOperator::with_domain(
            action,
            parse_banded(w, &format!("{field}.domain_op"))?,
        )),
    }
}

pub fn operator_spec_to_json(t: &DenselyDefinedOperator) -> Value {
    let mut v = banded_to_json(&t.action);
    v["domain_op"] = match &t.domain_op {
        None => Value::String("same".into()),
        Some(w) => banded_to_json(w),
    };
    v
}

fn parse_index_list(v: Option<&Value>, field: &str) -> Result<BTreeSet<i64>, FormatError> {
    match v {
        None => Ok(BTreeSet::new()),
        Some(v) => as_array(v, field)?
            .iter()
            .enumerate()
            .map(|(i, x)| as_int(x, &format!("{field}[{i}]")))
            .collect(),
    }
}

pub fn parse_index_set(v: &Value, field: &str) -> Result<IndexSet, FormatError> {
    let obj = as_object(v, field)?;
    let modulus = as_count(get(obj, "modulus", field)?, &format!("{field}.modulus"))?;
    let res_field = format!("{field}.residues");
    let residues = as_array(get(obj, "residues", field)?, &res_field)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_count(x, &format!("{res_field}[{i}]")))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let add = parse_index_list(obj.get("add"), &format!("{field}.add"))?;
    let remove = parse_index_list(obj.get("remove"), &format!("{field}.remove"))?;
    IndexSet::new(modulus, residues, add, remove).map_err(|e| err(field, e.to_string()))
}

pub fn index_set_to_json(s: &IndexSet) -> Value {
    json!({
        "modulus": s.modulus(),
        "residues": s.residues().iter().collect::<Vec<_>>(),
        "add": s.added().iter().collect::<Vec<_>>(),
        "remove": s.removed().iter().collect::<Vec<_>>(),
    })
}

pub fn parse_sequence(v: &Value, field: &str) -> Result<SequenceRecipe, FormatError> {
    match v {
        Value::String(s) if s == "harmonic" => Ok(SequenceRecipe::harmonic()),
        Value::Object(obj) if obj.contains_key("finite") => {
            let f = format!("{field}.finite");
            let values = as_array(&obj["finite"], &f)?
                .iter()
                .enumerate()
                .map(|(i, x)| parse_rational_value(x, &format!("{f}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SequenceRecipe::finite(values))
        }
        Value::Object(obj) => Ok(SequenceRecipe::Ratio {
            num: parse_coefficient(get(obj, "num", field)?, &format!("{field}.num"))?,
            den: parse_coefficient(get(obj, "den", field)?, &format!("{field}.den"))?,
        }),
        _ => Err(err(
            field,
            "expected \"harmonic\", {\"finite\": […]} or {\"num\": …, \"den\": …}",
        )),
    }
}
