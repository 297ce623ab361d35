//! JSON file formats.
//!
//! All numbers are exact rational strings (`"3"`, `"-7/2"`); integer JSON
//! numbers are accepted on input. Index keys are written in numeric
//! (lexicographic by subset) order.
//!
//! ```text
//! matrix:      {"n": 4, "entries": {"1,2": "2", "1,3": "3", ...}}
//! tensor:      {"n": 4, "m": 3, "entries": {"1,2,3": "4", ...}}
//! pi point:    {"n": 4, "entries": {"1,2;3,4": "5", ...}}
//! ```
//!
//! Inputs must list every key exactly once with strictly increasing
//! indices inside each group.

use serde_json::{json, Map, Value};

use crate::dissim::{DissimTensor, PiPoint};
use crate::error::{Error, Result};
use crate::matrix::DistanceMatrix;
use crate::puiseux::{CertEdge, Certificate3, PuiseuxPoly};
use crate::scalar::{format_exact, Scalar};
use crate::subsets::{join_labels, subsets};

fn err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn scalar_json<S: Scalar>(v: &S) -> Value {
    Value::String(format_exact(v))
}

fn parse_scalar<S: Scalar>(v: &Value, what: &str) -> Result<S> {
    match v {
        Value::String(s) => {
            S::parse_exact(s).ok_or_else(|| err(format!("{what}: {s:?} is not an exact rational")))
        }
        Value::Number(num) => num.as_i64().map(S::from_int).ok_or_else(|| {
            err(format!(
                "{what}: {num} is not an integer; write fractions as \"p/q\""
            ))
        }),
        other => Err(err(format!(
            "{what}: expected a rational string, got {other}"
        ))),
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| err(format!("{what} must be a JSON object")))
}

fn only_fields(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(format!("unknown field {k:?}"))),
        None => Ok(()),
    }
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .ok_or_else(|| err(format!("missing field {key:?}")))?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| err(format!("field {key:?} must be a non-negative integer")))
}

fn parse_group(s: &str, n: usize) -> Result<Vec<usize>> {
    let labels: Vec<usize> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| err(format!("bad index key {s:?}")))
        })
        .collect::<Result<_>>()?;
    if labels.iter().any(|&l| l == 0 || l > n) {
        return Err(err(format!("index key {s:?} is outside 1..={n}")));
    }
    if !labels.windows(2).all(|w| w[0] < w[1]) {
        return Err(err(format!("index key {s:?} must be strictly increasing")));
    }
    Ok(labels)
}

/// Reads `entries` into `(key, value)` pairs, checking that exactly the
/// expected keys occur.
fn entries<S: Scalar>(
    obj: &Map<String, Value>,
    expected: usize,
    mut key: impl FnMut(&str) -> Result<Vec<usize>>,
) -> Result<Vec<(Vec<usize>, S)>> {
    let e = object(
        obj.get("entries")
            .ok_or_else(|| err("missing field \"entries\""))?,
        "\"entries\"",
    )?;
    let mut out = Vec::with_capacity(e.len());
    for (k, v) in e {
        out.push((key(k)?, parse_scalar(v, k)?));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(err(format!("duplicate entry {:?}", w[0].0)));
    }
    if out.len() != expected {
        return Err(err(format!(
            "expected {expected} entries, found {}",
            out.len()
        )));
    }
    Ok(out)
}

pub fn matrix_to_json<S: Scalar>(d: &DistanceMatrix<S>) -> Value {
    let entries: Map<String, Value> = d
        .pairs()
        .map(|(i, j, v)| (format!("{i},{j}"), scalar_json(v)))
        .collect();
    json!({ "n": d.n(), "entries": entries })
}

pub fn matrix_from_json<S: Scalar>(v: &Value) -> Result<DistanceMatrix<S>> {
    let obj = object(v, "a distance matrix")?;
    only_fields(obj, &["n", "entries"])?;
    let n = usize_field(obj, "n")?;
    if n < 2 {
        return Err(err(format!("a distance matrix needs n >= 2, got {n}")));
    }
    let items = entries::<S>(obj, n * (n - 1) / 2, |k| {
        let g = parse_group(k, n)?;
        if g.len() != 2 {
            return Err(err(format!("matrix key {k:?} must name two indices")));
        }
        Ok(g)
    })?;
    let mut d = DistanceMatrix::zeros(n);
    for (k, v) in items {
        d.set(k[0], k[1], v);
    }
    Ok(d)
}

pub fn tensor_to_json<S: Scalar>(t: &DissimTensor<S>) -> Value {
    let entries: Map<String, Value> = t
        .iter()
        .map(|(s, v)| (join_labels(&s), scalar_json(v)))
        .collect();
    json!({ "n": t.n(), "m": t.m(), "entries": entries })
}

pub fn tensor_from_json<S: Scalar>(v: &Value) -> Result<DissimTensor<S>> {
    let obj = object(v, "a dissimilarity tensor")?;
    only_fields(obj, &["n", "m", "entries"])?;
    let n = usize_field(obj, "n")?;
    let m = usize_field(obj, "m")?;
    let mut t = DissimTensor::zeros(n, m).map_err(|e| err(e.to_string()))?;
    let expected = subsets(n, m).count();
    let items = entries::<S>(obj, expected, |k| {
        let g = parse_group(k, n)?;
        if g.len() != m {
            return Err(err(format!("tensor key {k:?} must name {m} indices")));
        }
        Ok(g)
    })?;
    for (k, v) in items {
        t.set(&k, v)?;
    }
    Ok(t)
}

pub fn pi_point_to_json<S: Scalar>(p: &PiPoint<S>) -> Value {
    let entries: Map<String, Value> = p
        .iter()
        .map(|(((a, b), (c, d)), v)| (format!("{a},{b};{c},{d}"), scalar_json(v)))
        .collect();
    json!({ "n": p.n(), "entries": entries })
}

pub fn pi_point_from_json<S: Scalar>(v: &Value) -> Result<PiPoint<S>> {
    let obj = object(v, "a pairing-coordinate point")?;
    only_fields(obj, &["n", "entries"])?;
    let n = usize_field(obj, "n")?;
    let mut p = PiPoint::zeros(n).map_err(|e| err(e.to_string()))?;
    let expected = p.iter().count();
    let items = entries::<S>(obj, expected, |k| {
        let (l, r) = k
            .split_once(';')
            .ok_or_else(|| err(format!("pairing key {k:?} needs the form \"i,j;k,l\"")))?;
        let (l, r) = (parse_group(l, n)?, parse_group(r, n)?);
        if l.len() != 2 || r.len() != 2 || l.iter().any(|x| r.contains(x)) {
            return Err(err(format!(
                "pairing key {k:?} must name two disjoint pairs"
            )));
        }
        Ok(vec![l[0], l[1], r[0], r[1]])
    })?;
    for (k, v) in items {
        p.set(k[0], k[1], k[2], k[3], v)?;
    }
    Ok(p)
}

pub fn poly_to_json<S: Scalar>(p: &PuiseuxPoly<S>) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(q, c)| json!([format_exact(q), format_exact(c)]))
            .collect(),
    )
}

pub fn poly_from_json<S: Scalar>(v: &Value) -> Result<PuiseuxPoly<S>> {
    let terms = v
        .as_array()
        .ok_or_else(|| err("a polynomial is a list of [exponent, coefficient] pairs"))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        match t.as_array().map(Vec::as_slice) {
            Some([q, c]) => out.push((
                parse_scalar(q, "exponent")?,
                parse_scalar(c, "coefficient")?,
            )),
            _ => return Err(err(format!("bad polynomial term {t}"))),
        }
    }
    Ok(PuiseuxPoly::from_terms(out))
}

pub fn certificate_to_json<S: Scalar>(c: &Certificate3<S>) -> Value {
    let edges: Vec<Value> = c
        .edges
        .iter()
        .map(|e| {
            json!({
                "parent": e.parent,
                "child": e.child,
                "height": format_exact(&e.height),
                "leaves": e.leaves_below,
                "label": e.label,
            })
        })
        .collect();
    let matrix: Vec<Value> = c
        .matrix
        .iter()
        .map(|row| Value::Array(row.iter().map(poly_to_json).collect()))
        .collect();
    json!({
        "tree": c.newick,
        "E": format_exact(&c.e),
        "rerooted": matrix_to_json(&c.rerooted),
        "equidistant": c.equidistant,
        "edges": edges,
        "x": c.x.iter().map(poly_to_json).collect::<Vec<_>>(),
        "matrix": matrix,
    })
}

pub fn certificate_from_json<S: Scalar>(v: &Value) -> Result<Certificate3<S>> {
    let obj = object(v, "a certificate")?;
    only_fields(
        obj,
        &[
            "tree",
            "E",
            "rerooted",
            "equidistant",
            "edges",
            "x",
            "matrix",
        ],
    )?;
    let field = |k: &str| {
        obj.get(k)
            .ok_or_else(|| err(format!("missing field {k:?}")))
    };
    let string = |k: &str| -> Result<String> {
        field(k)?
            .as_str()
            .map(str::to_owned)
            .ok_or_else(|| err(format!("field {k:?} must be a string")))
    };
    let list = |k: &str| -> Result<&Vec<Value>> {
        field(k)?
            .as_array()
            .ok_or_else(|| err(format!("field {k:?} must be a list")))
    };

    let mut edges = Vec::new();
    for e in list("edges")? {
        let o = object(e, "an edge")?;
        let leaves = o
            .get("leaves")
            .and_then(Value::as_array)
            .ok_or_else(|| err("edge needs a \"leaves\" list"))?
            .iter()
            .map(|l| {
                l.as_u64()
                    .map(|v| v as usize)
                    .ok_or_else(|| err("leaf labels are integers"))
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(CertEdge {
            parent: usize_field(o, "parent")?,
            child: usize_field(o, "child")?,
            height: parse_scalar(
                o.get("height")
                    .ok_or_else(|| err("edge needs a \"height\""))?,
                "height",
            )?,
            leaves_below: leaves,
            label: o
                .get("label")
                .and_then(Value::as_i64)
                .ok_or_else(|| err("edge needs an integer \"label\""))?,
        });
    }
    let x = list("x")?
        .iter()
        .map(poly_from_json)
        .collect::<Result<Vec<_>>>()?;
    let rows = list("matrix")?;
    if rows.len() != 3 {
        return Err(err("\"matrix\" must have three rows"));
    }
    let mut matrix: [Vec<PuiseuxPoly<S>>; 3] = Default::default();
    for (slot, row) in matrix.iter_mut().zip(rows) {
        let row = row.as_array().ok_or_else(|| err("matrix rows are lists"))?;
        *slot = row.iter().map(poly_from_json).collect::<Result<_>>()?;
        if slot.len() != x.len() {
            return Err(err(format!("matrix rows need {} columns", x.len())));
        }
    }
    Ok(Certificate3 {
        newick: string("tree")?,
        e: parse_scalar(field("E")?, "E")?,
        rerooted: matrix_from_json(field("rerooted")?)?,
        equidistant: string("equidistant")?,
        edges,
        x,
        matrix,
    })
}

fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| err(format!("invalid JSON: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn read_matrix<S: Scalar>(text: &str) -> Result<DistanceMatrix<S>> {
    matrix_from_json(&parse_text(text)?)
}

pub fn write_matrix<S: Scalar>(d: &DistanceMatrix<S>) -> String {
    pretty(&matrix_to_json(d))
}

pub fn read_tensor<S: Scalar>(text: &str) -> Result<DissimTensor<S>> {
    tensor_from_json(&parse_text(text)?)
}

pub fn write_tensor<S: Scalar>(t: &DissimTensor<S>) -> String {
    pretty(&tensor_to_json(t))
}

pub fn read_pi_point<S: Scalar>(text: &str) -> Result<PiPoint<S>> {
    pi_point_from_json(&parse_text(text)?)
}

pub fn write_pi_point<S: Scalar>(p: &PiPoint<S>) -> String {
    pretty(&pi_point_to_json(p))
}

pub fn read_certificate<S: Scalar>(text: &str) -> Result<Certificate3<S>> {
    certificate_from_json(&parse_text(text)?)
}

pub fn write_certificate<S: Scalar>(c: &Certificate3<S>) -> String {
    pretty(&certificate_to_json(c))
}
