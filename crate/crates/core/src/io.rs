//! File formats: algorithms and matrices as JSON, vectors and tensors as a
//! plain-text dims header followed by whitespace-separated values.

use serde_json::{json, Map, Value};

use crate::algebra::{
    parse_rational, Complex64, Domain, Matrix, Node, Rational, RealScalar, Scalar,
};
use crate::bilinear::{AnyAlgorithm, BilinearAlgorithm, ConvVariant, Tensor};
use crate::error::{ConvError, Result};

/// Scalars with a JSON entry encoding: rationals as `"num/den"` strings,
/// reals as numbers, complex values as `[re, im]`.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_i64(n.as_i64().unwrap())),
            _ => Err(ConvError::Parse(format!(
                "expected a rational string, got {v}"
            ))),
        }
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| ConvError::Parse(format!("bad number {n}"))),
            Value::String(s) => Ok(parse_rational(s)?.to_f64()),
            _ => Err(ConvError::Parse(format!("expected a number, got {v}"))),
        }
    }
}

impl JsonScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(Complex64::new(f64::from_json(re)?, f64::from_json(im)?)),
            _ => Err(ConvError::Parse(format!("expected [re, im], got {v}"))),
        }
    }
}

pub fn matrix_to_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "domain": T::DOMAIN.as_str(),
        "entries": m.data().iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json<T: JsonScalar>(v: &Value) -> Result<Matrix<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| ConvError::Parse("matrix must be a JSON object".into()))?;
    let rows = get_usize(obj, "rows")?;
    let cols = get_usize(obj, "cols")?;
    let domain = get_domain(obj)?;
    if domain != T::DOMAIN {
        return Err(ConvError::DomainMismatch(format!(
            "matrix is {}, expected {}",
            domain.as_str(),
            T::DOMAIN.as_str()
        )));
    }
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| ConvError::Parse("matrix is missing 'entries'".into()))?;
    let data = entries
        .iter()
        .map(T::from_json)
        .collect::<Result<Vec<_>>>()?;
    Matrix::new(rows, cols, data)
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| ConvError::Parse(format!("missing or invalid '{key}'")))
}

fn get_domain(obj: &Map<String, Value>) -> Result<Domain> {
    let v = obj
        .get("domain")
        .ok_or_else(|| ConvError::Parse("missing 'domain'".into()))?;
    Ok(serde_json::from_value(v.clone())?)
}

pub fn variant_to_json(v: &ConvVariant) -> Value {
    let mut obj = json!({
        "variant": v.name(),
        "r": v.filter_len(),
        "n": v.input_len(),
        "out": v.output_len(),
    });
    if let ConvVariant::Product(factors) = v {
        obj["factors"] = Value::Array(factors.iter().map(variant_to_json).collect());
    }
    obj
}

pub fn variant_from_json(v: &Value) -> Result<ConvVariant> {
    let obj = v
        .as_object()
        .ok_or_else(|| ConvError::Parse("variant must be a JSON object".into()))?;
    let name = obj
        .get("variant")
        .and_then(Value::as_str)
        .ok_or_else(|| ConvError::Parse("missing 'variant'".into()))?;
    let variant = match name {
        "linear" => ConvVariant::Linear {
            r: get_usize(obj, "r")?,
            n: get_usize(obj, "n")?,
        },
        "cyclic" => ConvVariant::Cyclic {
            n: get_usize(obj, "n")?,
        },
        "correlation" => ConvVariant::Correlation {
            r: get_usize(obj, "r")?,
            n_out: get_usize(obj, "out")?,
        },
        "product" => ConvVariant::Product(
            obj.get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| ConvError::Parse("product variant needs 'factors'".into()))?
                .iter()
                .map(variant_from_json)
                .collect::<Result<_>>()?,
        ),
        other => return Err(ConvError::Parse(format!("unknown variant '{other}'"))),
    };
    for key in ["r", "n", "out"] {
        if let Some(given) = obj.get(key).and_then(Value::as_u64) {
            let want = match key {
                "r" => variant.filter_len(),
                "n" => variant.input_len(),
                _ => variant.output_len(),
            };
            if given as usize != want {
                return Err(ConvError::Parse(format!(
                    "'{key}' = {given} is inconsistent with {variant}"
                )));
            }
        }
    }
    Ok(variant)
}

pub fn algorithm_to_json<T: JsonScalar>(alg: &BilinearAlgorithm<T>) -> Value {
    let mut obj = variant_to_json(alg.variant());
    obj["rank"] = json!(alg.rank());
    obj["domain"] = json!(T::DOMAIN.as_str());
    obj["provenance"] = json!(alg.provenance());
    obj["A"] = matrix_to_json(alg.a());
    obj["B"] = matrix_to_json(alg.b());
    obj["C"] = matrix_to_json(alg.c());
    obj
}

fn algorithm_from_obj<T: JsonScalar>(v: &Value) -> Result<BilinearAlgorithm<T>> {
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| ConvError::Parse(format!("algorithm is missing '{k}'")))
    };
    let alg = BilinearAlgorithm::new(
        matrix_from_json(field("A")?)?,
        matrix_from_json(field("B")?)?,
        matrix_from_json(field("C")?)?,
        variant_from_json(v)?,
        v.get("provenance").and_then(Value::as_str).unwrap_or(""),
    )?;
    if let Some(rank) = v.get("rank").and_then(Value::as_u64) {
        if rank as usize != alg.rank() {
            return Err(ConvError::Parse(format!(
                "'rank' = {rank} but the matrices have {} columns",
                alg.rank()
            )));
        }
    }
    Ok(alg)
}

pub fn any_algorithm_to_json(alg: &AnyAlgorithm) -> Value {
    match alg {
        AnyAlgorithm::Rational(a) => algorithm_to_json(a),
        AnyAlgorithm::Real(a) => algorithm_to_json(a),
        AnyAlgorithm::Complex(a) => algorithm_to_json(a),
    }
}

/// Reads an algorithm in whichever domain its `domain` field names.
pub fn any_algorithm_from_json(v: &Value) -> Result<AnyAlgorithm> {
    let obj = v
        .as_object()
        .ok_or_else(|| ConvError::Parse("algorithm must be a JSON object".into()))?;
    Ok(match get_domain(obj)? {
        Domain::Rational => AnyAlgorithm::Rational(algorithm_from_obj(v)?),
        Domain::Real => AnyAlgorithm::Real(algorithm_from_obj(v)?),
        Domain::Complex => AnyAlgorithm::Complex(algorithm_from_obj(v)?),
    })
}

pub fn write_algorithm(alg: &AnyAlgorithm) -> Result<String> {
    Ok(serde_json::to_string_pretty(&any_algorithm_to_json(alg))?)
}

pub fn read_algorithm(text: &str) -> Result<AnyAlgorithm> {
    any_algorithm_from_json(&serde_json::from_str(text)?)
}

/// Parses a vector or tensor: the first line lists the mode lengths, the
/// rest holds the entries (row-major, any whitespace). Entries may be
/// decimals or `num/den` rationals.
pub fn read_tensor(text: &str) -> Result<Tensor<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| ConvError::Parse("empty vector file".into()))?;
    let shape = header
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| ConvError::Parse(format!("bad dimension '{t}' in header")))
        })
        .collect::<Result<Vec<_>>>()?;
    if shape.is_empty() {
        return Err(ConvError::Parse("empty dims header".into()));
    }
    let values = lines
        .flat_map(str::split_whitespace)
        .map(parse_value)
        .collect::<Result<Vec<_>>>()?;
    Tensor::new(shape, values)
}

fn parse_value(t: &str) -> Result<f64> {
    if t.contains('/') {
        return Ok(parse_rational(t)?.to_f64());
    }
    t.parse::<f64>()
        .map_err(|_| ConvError::Parse(format!("bad value '{t}'")))
}

/// Inverse of [`read_tensor`]: dims line, then one line per last-mode row.
pub fn write_tensor(t: &Tensor<f64>) -> String {
    let dims: Vec<String> = t.shape().iter().map(usize::to_string).collect();
    let mut out = dims.join(" ");
    out.push('\n');
    let row = *t.shape().last().unwrap_or(&1);
    for chunk in t.data().chunks(row.max(1)) {
        let vals: Vec<String> = chunk.iter().map(|&v| format_value(v)).collect();
        out.push_str(&vals.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a node list such as `"0, 1, -1, 1/2, inf"`.
pub fn parse_node_list(s: &str) -> Result<Vec<Node<Rational>>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "inf" | "∞" => Ok(Node::Infinity),
            _ => parse_rational(t).map(Node::Finite),
        })
        .collect()
}

/// Plain decimal for integers and moderate magnitudes, scientific otherwise,
/// so round-off residues stay short.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == v.trunc() && a < 1e16 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}
