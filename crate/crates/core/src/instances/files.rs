//! JSON instance and stream documents.
//!
//! Rationals are accepted as `"p/q"` strings or as decimal literals and are
//! always written back as canonical strings. Keys are written sorted, so a
//! canonical document survives a parse/serialize cycle byte for byte.

use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::problem::{validate_problem, HypothesisClass, Problem, Stream, Task, ThresholdedExample};
use crate::rational::{self, Rational};

fn parse_json(bytes: &[u8]) -> Result<Value> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::schema("", format!("not UTF-8: {e}")))?;
    serde_json::from_str(text).map_err(|e| Error::schema("", format!("invalid JSON: {e}")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(format!("{path}/{key}"), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(path, "expected an array"))
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::schema(format!("{path}/{i}"), "expected a string"))
        })
        .collect()
}

fn index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|i| i as usize)
        .ok_or_else(|| Error::schema(path, "expected a nonnegative integer"))
}

fn nonnegative(v: &Value, path: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::schema(path, "expected a rational")),
    };
    let r = rational::parse(&text).map_err(|e| Error::schema(path, e.to_string()))?;
    if r.is_negative() {
        return Err(Error::schema(path, "must be nonnegative"));
    }
    Ok(r)
}

fn text(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn render(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parses an instance document into a validated task.
pub fn parse_instance(bytes: &[u8]) -> Result<Task> {
    let doc = parse_json(bytes)?;
    let root = object(&doc, "")?;
    let labels = strings(field(root, "labels", "")?, "/labels")?;
    let predictions = strings(field(root, "predictions", "")?, "/predictions")?;
    let instances = strings(field(root, "instances", "")?, "/instances")?;
    let loss = array(field(root, "loss", "")?, "/loss")?
        .iter()
        .enumerate()
        .map(|(y, row)| {
            let path = format!("/loss/{y}");
            array(row, &path)?
                .iter()
                .enumerate()
                .map(|(z, v)| nonnegative(v, &format!("{path}/{z}")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = nonnegative(field(root, "bound_c", "")?, "/bound_c")?;
    let table = array(field(root, "hypotheses", "")?, "/hypotheses")?
        .iter()
        .enumerate()
        .map(|(h, row)| {
            let path = format!("/hypotheses/{h}");
            array(row, &path)?
                .iter()
                .enumerate()
                .map(|(x, v)| index(v, &format!("{path}/{x}")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let problem = Problem::new(instances, labels, predictions, loss, bound)?;
    validate_problem(problem, HypothesisClass::new(table)?)
}

pub fn instance_value(task: &Task) -> Value {
    let p = &task.problem;
    json!({
        "labels": p.labels(),
        "predictions": p.predictions(),
        "instances": p.instances(),
        "loss": p.loss_matrix().iter().map(|row| row.iter().map(text).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "bound_c": text(p.declared_bound()),
        "hypotheses": task.class.rows(),
    })
}

/// Canonical instance document.
pub fn instance_to_json(task: &Task) -> String {
    render(&instance_value(task))
}

pub fn parse_stream(bytes: &[u8]) -> Result<Stream> {
    let doc = parse_json(bytes)?;
    let root = object(&doc, "")?;
    let items = array(field(root, "stream", "")?, "/stream")?;
    let examples = items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let path = format!("/stream/{i}");
            let obj = object(item, &path)?;
            let x = index(field(obj, "x", &path)?, &format!("{path}/x"))?;
            let y = index(field(obj, "y", &path)?, &format!("{path}/y"))?;
            let eps = match obj.get("eps") {
                None | Some(Value::Null) => None,
                Some(v) => Some(nonnegative(v, &format!("{path}/eps"))?),
            };
            Ok(ThresholdedExample { instance: x, label: y, eps })
        })
        .collect::<Result<Vec<_>>>()?;
    Stream::new(examples)
}

/// Parses a stream and checks its indices against a task.
pub fn parse_stream_for(bytes: &[u8], task: &Task) -> Result<Stream> {
    let stream = parse_stream(bytes)?;
    stream.validate_for(&task.problem)?;
    Ok(stream)
}

pub fn stream_to_json(stream: &Stream) -> String {
    let items: Vec<Value> = stream
        .examples()
        .iter()
        .map(|e| {
            let mut m = Map::new();
            m.insert("x".into(), json!(e.instance));
            m.insert("y".into(), json!(e.label));
            if let Some(eps) = &e.eps {
                m.insert("eps".into(), text(eps));
            }
            Value::Object(m)
        })
        .collect();
    render(&json!({ "stream": items }))
}
