//! Instance documents and JSON encodings of elements and verdicts.
//!
//! Errors carry a JSON pointer to the offending field. Objects are
//! emitted with sorted keys, so serialized output is stable.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::arith::{fmt_q, parse_q, QuadraticValue, Q};
use crate::budget::SearchBudget;
use crate::culayer::{CuElem, Tail};
use crate::cuz::CuZ;
use crate::elem::Elem;
use crate::finite::{FiniteMonoid, OrderSpec};
use crate::instance::{Backend, Instance};
use crate::tensorz::{ChainCertificate, FormalSum, Step};
use crate::vector::{OrderMode, VectorMonoid};
use crate::verdict::{Fact, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// JSON pointer, `""` for the document root.
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "at {at}: {}", self.message)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

fn err<T>(pointer: &str, message: impl Into<String>) -> ParseResult<T> {
    Err(ParseError { pointer: pointer.to_string(), message: message.into() })
}

fn child(pointer: &str, key: impl fmt::Display) -> String {
    format!("{pointer}/{key}")
}

fn field<'a>(obj: &'a Map<String, Value>, pointer: &str, key: &str) -> ParseResult<&'a Value> {
    obj.get(key).ok_or_else(|| ParseError { pointer: child(pointer, key), message: "missing field".into() })
}

fn as_obj<'a>(v: &'a Value, pointer: &str) -> ParseResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected an object".into() })
}

fn as_arr<'a>(v: &'a Value, pointer: &str) -> ParseResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected an array".into() })
}

fn as_str<'a>(v: &'a Value, pointer: &str) -> ParseResult<&'a str> {
    v.as_str().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected a string".into() })
}

fn as_i64(v: &Value, pointer: &str) -> ParseResult<i64> {
    v.as_i64().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected an integer".into() })
}

fn as_u64(v: &Value, pointer: &str) -> ParseResult<u64> {
    v.as_u64().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected a nonnegative integer".into() })
}

// ---- instances --------------------------------------------------------------

pub fn parse_instance_str(s: &str) -> ParseResult<Instance> {
    let v: Value = serde_json::from_str(s).map_err(|e| ParseError { pointer: String::new(), message: e.to_string() })?;
    parse_instance(&v)
}

pub fn parse_instance(v: &Value) -> ParseResult<Instance> {
    parse_at(v, "")
}

fn parse_at(v: &Value, p: &str) -> ParseResult<Instance> {
    let obj = as_obj(v, p)?;
    let kind = as_str(field(obj, p, "backend")?, &child(p, "backend"))?;
    let parent = |key: &str| parse_at(field(obj, p, key)?, &child(p, key));
    let mut inst = match kind {
        "finite" => parse_finite(obj, p)?,
        "vector" => parse_vector(obj, p)?,
        "cuz" => Instance::cuz(),
        "qplus" => Instance::qplus(),
        "direct_sum" => Instance::direct_sum(parent("left")?, parent("right")?),
        "principal_ideal" | "quotient" => {
            let par = parent("parent")?;
            let gp = child(p, "generator");
            let g = parse_elem(&par, field(obj, p, "generator")?, &gp)?;
            let ideal = Instance::ideal(&par, g).map_err(|e| ParseError { pointer: gp.clone(), message: e.to_string() })?;
            if kind == "quotient" {
                Instance::quotient(&par, &ideal).map_err(|e| ParseError { pointer: gp, message: e.to_string() })?
            } else {
                ideal
            }
        }
        "au_hull" => Instance::au_hull(&parent("parent")?),
        "tensor_one" => Instance::tensor_one(&parent("parent")?),
        other => return err(&child(p, "backend"), format!("unknown backend `{other}`")),
    };
    if let Some(n) = obj.get("name") {
        inst = inst.named(as_str(n, &child(p, "name"))?);
    }
    if let Some(b) = obj.get("budget") {
        inst = inst.with_budget(parse_budget(b, &child(p, "budget"))?);
    }
    Ok(inst)
}

fn parse_finite(obj: &Map<String, Value>, p: &str) -> ParseResult<Instance> {
    let ep = child(p, "elements");
    let names: Vec<String> = as_arr(field(obj, p, "elements")?, &ep)?
        .iter()
        .enumerate()
        .map(|(i, v)| as_str(v, &child(&ep, i)).map(str::to_string))
        .collect::<ParseResult<_>>()?;
    let index = |v: &Value, at: &str| -> ParseResult<usize> {
        let s = as_str(v, at)?;
        names.iter().position(|n| n == s).ok_or_else(|| ParseError { pointer: at.into(), message: format!("unknown element `{s}`") })
    };
    let tp = child(p, "table");
    let rows = as_arr(field(obj, p, "table")?, &tp)?;
    let mut table = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rp = child(&tp, i);
        table.push(as_arr(row, &rp)?.iter().enumerate().map(|(j, c)| index(c, &child(&rp, j))).collect::<ParseResult<Vec<_>>>()?);
    }
    let op = child(p, "order");
    let order = match obj.get("order") {
        None => OrderSpec::Algebraic,
        Some(Value::String(s)) if s == "algebraic" => OrderSpec::Algebraic,
        Some(Value::Array(pairs)) => {
            let mut out = Vec::new();
            for (i, pr) in pairs.iter().enumerate() {
                let pp = child(&op, i);
                let ab = as_arr(pr, &pp)?;
                if ab.len() != 2 {
                    return err(&pp, "an order pair has two entries");
                }
                out.push((index(&ab[0], &child(&pp, 0))?, index(&ab[1], &child(&pp, 1))?));
            }
            OrderSpec::Pairs(out)
        }
        Some(_) => return err(&op, "expected \"algebraic\" or a list of [a, b] pairs"),
    };
    let m = FiniteMonoid::new(names, table, order).map_err(|e| ParseError { pointer: p.into(), message: e })?;
    Ok(Instance::finite("finite", m))
}

fn parse_vector(obj: &Map<String, Value>, p: &str) -> ParseResult<Instance> {
    let dim = as_u64(field(obj, p, "dim")?, &child(p, "dim"))? as usize;
    let gp = child(p, "generators");
    let mut gens = Vec::new();
    for (i, g) in as_arr(field(obj, p, "generators")?, &gp)?.iter().enumerate() {
        gens.push(int_vec(g, &child(&gp, i))?);
    }
    let op = child(p, "order_mode");
    let mode = match obj.get("order_mode") {
        None => OrderMode::Algebraic,
        Some(Value::String(s)) if s == "algebraic" => OrderMode::Algebraic,
        Some(Value::String(s)) if s == "coordinatewise" => OrderMode::Coordinatewise,
        Some(Value::Object(o)) if o.contains_key("linear") => {
            let lp = child(&op, "linear");
            let ws = as_arr(&o["linear"], &lp)?;
            let mut out = Vec::new();
            for (i, w) in ws.iter().enumerate() {
                out.push(parse_quadratic(w, &child(&lp, i))?);
            }
            OrderMode::Linear(out)
        }
        Some(_) => return err(&op, "expected \"algebraic\", \"coordinatewise\" or {\"linear\": [...]}"),
    };
    let v = VectorMonoid::new(dim, gens, mode).map_err(|e| ParseError { pointer: p.into(), message: e })?;
    Ok(Instance::vector("vector", v))
}

fn int_vec(v: &Value, p: &str) -> ParseResult<Vec<i64>> {
    as_arr(v, p)?.iter().enumerate().map(|(i, c)| as_i64(c, &child(p, i))).collect()
}

fn parse_quadratic(v: &Value, p: &str) -> ParseResult<QuadraticValue> {
    let o = as_obj(v, p)?;
    let part = |k: &str| -> ParseResult<_> {
        let kp = child(p, k);
        match o.get(k) {
            None => Ok(num_rational::Ratio::from_integer(0)),
            Some(s) => parse_q(as_str(s, &kp)?).map_err(|e| ParseError { pointer: kp, message: e }),
        }
    };
    Ok(QuadraticValue::new(part("a")?, part("b")?))
}

fn parse_budget(v: &Value, p: &str) -> ParseResult<SearchBudget> {
    let o = as_obj(v, p)?;
    let mut b = SearchBudget::default();
    for (k, val) in o {
        let kp = child(p, k);
        let n = as_u64(val, &kp)?;
        match k.as_str() {
            "box" => b.sample_box = n as i64,
            "nmax" => b.n_max = n,
            "coeff_bound" => b.coeff_bound = n,
            "depth" => b.chain_depth = n as u32,
            _ => return err(&kp, "unknown budget field"),
        }
    }
    b.validate().map_err(|e| ParseError { pointer: p.into(), message: e })?;
    Ok(b)
}

pub fn budget_json(b: &SearchBudget) -> Value {
    json!({ "box": b.sample_box, "nmax": b.n_max, "coeff_bound": b.coeff_bound, "depth": b.chain_depth })
}

/// Serializes an instance built from a document; `None` for instances
/// with no document form.
pub fn instance_json(m: &Instance) -> Option<Value> {
    let mut o = Map::new();
    match &m.backend {
        Backend::Finite(f) => {
            o.insert("backend".into(), json!("finite"));
            o.insert("elements".into(), json!(f.names));
            let table: Vec<Vec<&String>> = f.table.iter().map(|r| r.iter().map(|&c| &f.names[c]).collect()).collect();
            o.insert("table".into(), json!(table));
            let alg = FiniteMonoid::new(f.names.clone(), f.table.clone(), OrderSpec::Algebraic).ok();
            if alg.map(|a| a.leq) != Some(f.leq.clone()) {
                let mut pairs = Vec::new();
                for (a, row) in f.leq.iter().enumerate() {
                    for (c, &le) in row.iter().enumerate() {
                        if le && a != c {
                            pairs.push(json!([f.names[a], f.names[c]]));
                        }
                    }
                }
                o.insert("order".into(), Value::Array(pairs));
            } else {
                o.insert("order".into(), json!("algebraic"));
            }
        }
        Backend::Vector(v) => {
            o.insert("backend".into(), json!("vector"));
            o.insert("dim".into(), json!(v.dim));
            o.insert("generators".into(), json!(v.generators));
            let mode = match &v.order_mode {
                OrderMode::Algebraic => json!("algebraic"),
                OrderMode::Coordinatewise => json!("coordinatewise"),
                OrderMode::Linear(ws) => {
                    let ws: Vec<Value> = ws.iter().map(|w| json!({"a": fmt_q(&w.a), "b": fmt_q(&w.b)})).collect();
                    json!({ "linear": ws })
                }
            };
            o.insert("order_mode".into(), mode);
        }
        Backend::CuZ => {
            o.insert("backend".into(), json!("cuz"));
        }
        Backend::QPlus => {
            o.insert("backend".into(), json!("qplus"));
        }
        Backend::DirectSum(l, r) => {
            o.insert("backend".into(), json!("direct_sum"));
            o.insert("left".into(), instance_json(l)?);
            o.insert("right".into(), instance_json(r)?);
        }
        Backend::PrincipalIdeal { parent, generator } | Backend::Quotient { parent, generator } => {
            let kind = if matches!(m.backend, Backend::Quotient { .. }) { "quotient" } else { "principal_ideal" };
            o.insert("backend".into(), json!(kind));
            o.insert("parent".into(), instance_json(parent)?);
            o.insert("generator".into(), elem_json(parent, generator));
        }
        Backend::AuHull(p) | Backend::TensorOne(p) => {
            let kind = if matches!(m.backend, Backend::AuHull(_)) { "au_hull" } else { "tensor_one" };
            o.insert("backend".into(), json!(kind));
            o.insert("parent".into(), instance_json(p)?);
        }
    }
    o.insert("name".into(), json!(m.name));
    if m.budget != SearchBudget::default() {
        o.insert("budget".into(), budget_json(&m.budget));
    }
    Some(Value::Object(o))
}

// ---- elements ---------------------------------------------------------------

/// Parses an element of `m`, validating membership.
pub fn parse_elem(m: &Instance, v: &Value, p: &str) -> ParseResult<Elem> {
    let e = elem_shape(m, v, p)?;
    m.validate(&e).map_err(|x| ParseError { pointer: p.into(), message: x.to_string() })?;
    Ok(e)
}

fn elem_shape(m: &Instance, v: &Value, p: &str) -> ParseResult<Elem> {
    match &m.backend {
        Backend::Finite(f) => {
            let s = as_str(v, p)?;
            f.index_of(s).map(Elem::Idx).ok_or_else(|| ParseError { pointer: p.into(), message: format!("unknown element `{s}`") })
        }
        Backend::Vector(_) => Ok(Elem::Vec(int_vec(v, p)?)),
        Backend::CuZ => CuZ::parse(as_str(v, p)?).map(Elem::Cu).map_err(|e| ParseError { pointer: p.into(), message: e }),
        Backend::QPlus => rational(v, p).map(Elem::Rat),
        Backend::DirectSum(l, r) => {
            let a = as_arr(v, p)?;
            if a.len() != 2 {
                return err(p, "a direct-sum element is a pair [left, right]");
            }
            Ok(Elem::pair(elem_shape(l, &a[0], &child(p, 0))?, elem_shape(r, &a[1], &child(p, 1))?))
        }
        Backend::PrincipalIdeal { parent, .. } | Backend::Quotient { parent, .. } | Backend::TensorOne(parent) => {
            elem_shape(parent, v, p)
        }
        Backend::AuHull(parent) => gr_shape(parent, v, p),
    }
}

fn gr_shape(m: &Instance, v: &Value, p: &str) -> ParseResult<Elem> {
    match &m.backend {
        Backend::Vector(_) => Ok(Elem::Vec(int_vec(v, p)?)),
        Backend::QPlus => rational(v, p).map(Elem::Rat),
        Backend::DirectSum(l, r) => {
            let a = as_arr(v, p)?;
            if a.len() != 2 {
                return err(p, "a direct-sum element is a pair [left, right]");
            }
            Ok(Elem::pair(gr_shape(l, &a[0], &child(p, 0))?, gr_shape(r, &a[1], &child(p, 1))?))
        }
        Backend::TensorOne(q) | Backend::AuHull(q) => gr_shape(q, v, p),
        Backend::CuZ => Ok(Elem::Vec(vec![])),
        _ => {
            // Finite groups are kernel elements of the carrier table.
            let e = elem_shape(m, v, p)?;
            match (m.finite_view(), &e) {
                (Some(view), _) if !matches!(m.backend, Backend::Finite(_)) => view
                    .index(&e)
                    .map(Elem::Idx)
                    .ok_or_else(|| ParseError { pointer: p.into(), message: "not a carrier element".into() }),
                _ => Ok(e),
            }
        }
    }
}

/// A rational as `"p/q"`, or an integer literal.
fn rational(v: &Value, p: &str) -> ParseResult<Q> {
    if let Some(n) = v.as_i64() {
        return Ok(Q::from_integer(n as i128));
    }
    parse_q(as_str(v, p)?).map_err(|e| ParseError { pointer: p.into(), message: e })
}

/// Parses a Grothendieck group element of `m`.
pub fn parse_gr(m: &Instance, v: &Value, p: &str) -> ParseResult<Elem> {
    let g = gr_shape(m, v, p)?;
    crate::grothendieck::gr_validate(m, &g).map_err(|e| ParseError { pointer: p.into(), message: e.to_string() })?;
    Ok(g)
}

pub fn elem_json(m: &Instance, e: &Elem) -> Value {
    match (&m.backend, e) {
        (Backend::Finite(f), Elem::Idx(i)) => json!(f.names[*i]),
        (Backend::DirectSum(l, r), Elem::Pair(a, b)) => json!([elem_json(l, a), elem_json(r, b)]),
        (Backend::PrincipalIdeal { parent, .. } | Backend::Quotient { parent, .. } | Backend::TensorOne(parent), _) => {
            elem_json(parent, e)
        }
        (Backend::AuHull(p), _) => gr_json(p, e),
        _ => raw_json(e),
    }
}

pub fn gr_json(m: &Instance, g: &Elem) -> Value {
    match (&m.backend, g) {
        (Backend::DirectSum(l, r), Elem::Pair(a, b)) => json!([gr_json(l, a), gr_json(r, b)]),
        (Backend::TensorOne(p) | Backend::AuHull(p), _) => gr_json(p, g),
        (Backend::Finite(_), _) => elem_json(m, g),
        (Backend::PrincipalIdeal { .. } | Backend::Quotient { .. }, Elem::Idx(i)) => match m.finite_view() {
            Some(v) if *i < v.elems.len() => elem_json(m, &v.elems[*i]),
            _ => raw_json(g),
        },
        _ => raw_json(g),
    }
}

fn raw_json(e: &Elem) -> Value {
    match e {
        Elem::Idx(i) => json!(i),
        Elem::Vec(v) => json!(v),
        Elem::Cu(c) => json!(c.to_literal()),
        Elem::Rat(r) => json!(fmt_q(r)),
        Elem::Pair(a, b) => json!([raw_json(a), raw_json(b)]),
    }
}

// ---- formal sums and Cu elements --------------------------------------------

/// A list of `[element, "compact:n" | "soft:p/q" | "soft:inf"]` pairs.
pub fn parse_formal_sum(m: &Instance, v: &Value, p: &str) -> ParseResult<FormalSum> {
    let mut terms = Vec::new();
    for (i, t) in as_arr(v, p)?.iter().enumerate() {
        let tp = child(p, i);
        let pair = as_arr(t, &tp)?;
        if pair.len() != 2 {
            return err(&tp, "a term is [element, z-value]");
        }
        let x = parse_elem(m, &pair[0], &child(&tp, 0))?;
        let zp = child(&tp, 1);
        let z = CuZ::parse(as_str(&pair[1], &zp)?).map_err(|e| ParseError { pointer: zp, message: e })?;
        terms.push((x, z));
    }
    Ok(FormalSum::from_terms(m, terms))
}

pub fn formal_sum_json(m: &Instance, f: &FormalSum) -> Value {
    Value::Array(f.terms().iter().map(|(x, t)| json!([elem_json(m, x), t.to_literal()])).collect())
}

pub fn chain_json(m: &Instance, c: &ChainCertificate) -> Value {
    let steps: Vec<Value> = c
        .steps
        .iter()
        .zip(c.states.iter().skip(1))
        .map(|(s, st)| {
            let mut o = Map::new();
            o.insert("step".into(), json!(s.tag()));
            o.insert("state".into(), formal_sum_json(m, st));
            if let Step::SplitRight { a, t, parts_a, parts_t } | Step::MergeLeft { a, t, parts_a, parts_t } = s {
                o.insert("term".into(), json!([elem_json(m, a), t.to_literal()]));
                o.insert("parts_a".into(), Value::Array(parts_a.iter().map(|x| elem_json(m, x)).collect()));
                o.insert("parts_t".into(), Value::Array(parts_t.iter().map(|x| json!(x.to_literal())).collect()));
            }
            Value::Object(o)
        })
        .collect();
    json!({ "source": formal_sum_json(m, &c.states[0]), "steps": steps, "depth": c.depth() })
}

/// `{"prefix": [...], "tail": "constant" | {"repeat_last_plus": x} |
/// {"sup": label, "below": x}}`.
pub fn parse_cu_elem(m: &Instance, v: &Value, p: &str) -> ParseResult<CuElem> {
    let o = as_obj(v, p)?;
    let pp = child(p, "prefix");
    let prefix = as_arr(field(o, p, "prefix")?, &pp)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_elem(m, x, &child(&pp, i)))
        .collect::<ParseResult<Vec<_>>>()?;
    let tp = child(p, "tail");
    let tail = match o.get("tail") {
        None => Tail::Constant,
        Some(Value::String(s)) if s == "constant" => Tail::Constant,
        Some(Value::Object(t)) if t.contains_key("repeat_last_plus") => {
            Tail::RepeatLastPlusDelta(parse_elem(m, &t["repeat_last_plus"], &child(&tp, "repeat_last_plus"))?)
        }
        Some(Value::Object(t)) if t.contains_key("sup") => Tail::FormalSupLabel {
            label: as_str(&t["sup"], &child(&tp, "sup"))?.to_string(),
            below: match t.get("below") {
                Some(b) => Some(parse_elem(m, b, &child(&tp, "below"))?),
                None => None,
            },
        },
        Some(_) => return err(&tp, "expected \"constant\", {\"repeat_last_plus\": x} or {\"sup\": label}"),
    };
    if prefix.is_empty() {
        return err(&pp, "the prefix needs at least one term");
    }
    Ok(CuElem { prefix, tail })
}

pub fn cu_elem_json(m: &Instance, u: &CuElem) -> Value {
    let tail = match &u.tail {
        Tail::Constant => json!("constant"),
        Tail::RepeatLastPlusDelta(d) => json!({ "repeat_last_plus": elem_json(m, d) }),
        Tail::FormalSupLabel { label, below } => {
            let mut o = Map::new();
            o.insert("sup".into(), json!(label));
            if let Some(b) = below {
                o.insert("below".into(), elem_json(m, b));
            }
            Value::Object(o)
        }
    };
    json!({ "prefix": u.prefix.iter().map(|x| elem_json(m, x)).collect::<Vec<_>>(), "tail": tail })
}

// ---- verdicts ---------------------------------------------------------------

fn fact_json(m: &Instance, f: &Fact) -> Value {
    let (rel, a, b) = match f {
        Fact::Leq(a, b) => ("<=", a, b),
        Fact::NotLeq(a, b) => ("not <=", a, b),
        Fact::Eq(a, b) => ("=", a, b),
        Fact::Ne(a, b) => ("!=", a, b),
    };
    json!([elem_json(m, a), rel, elem_json(m, b)])
}

pub fn verdict_json(m: &Instance, v: &Verdict) -> Value {
    let c = &v.certificate;
    let mut cert = Map::new();
    cert.insert("summary".into(), json!(c.summary));
    let mut w = Map::new();
    for (k, e) in &c.witness {
        w.insert(k.to_string(), elem_json(m, e));
    }
    cert.insert("witness".into(), Value::Object(w));
    if let Some(n) = c.n {
        cert.insert("n".into(), json!(n));
    }
    if !c.facts.is_empty() {
        cert.insert("facts".into(), Value::Array(c.facts.iter().map(|f| fact_json(m, f)).collect()));
    }
    if let Some(k) = &c.combination {
        cert.insert("combination".into(), json!(k));
    }
    if let Some(b) = c.bound {
        cert.insert("bound".into(), json!(b.as_str()));
    }
    json!({
        "value": v.value.as_str(),
        "certificate": Value::Object(cert),
        "budget_used": { "steps": v.budget_used.steps, "n_reached": v.budget_used.n_reached },
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Q;

    #[test]
    fn errors_point_at_the_field() {
        let e = parse_instance_str(r#"{"backend":"vector","dim":2,"generators":[[1,0],[0,"x"]]}"#).unwrap_err();
        assert_eq!(e.pointer, "/generators/1/1");
        let e = parse_instance_str(r#"{"backend":"direct_sum","left":{"backend":"qplus"},"right":{"backend":"nope"}}"#)
            .unwrap_err();
        assert_eq!(e.pointer, "/right/backend");
        let e = parse_instance_str(r#"{"dim":1}"#).unwrap_err();
        assert_eq!(e.pointer, "/backend");
    }

    #[test]
    fn serialize_then_parse_is_stable() {
        let docs = [
            r#"{"backend":"finite","name":"one_t","elements":["0","1","T"],"table":[["0","1","T"],["1","T","T"],["T","T","T"]]}"#,
            r#"{"backend":"vector","name":"theta","dim":2,"generators":[[1,0],[0,1]],"order_mode":{"linear":[{"a":"1","b":"0"},{"a":"0","b":"1"}]}}"#,
            r#"{"backend":"direct_sum","name":"ex54","left":{"backend":"vector","dim":1,"generators":[[2],[3]],"name":"num2_3"},"right":{"backend":"vector","dim":1,"generators":[[1]],"name":"nat"}}"#,
        ];
        for d in docs {
            let a = parse_instance_str(d).unwrap();
            let s = to_pretty(&instance_json(&a).unwrap());
            let b = parse_instance_str(&s).unwrap();
            assert_eq!(s, to_pretty(&instance_json(&b).unwrap()));
        }
    }

    #[test]
    fn element_literals() {
        let m = Instance::cuz();
        assert_eq!(parse_elem(&m, &json!("soft:1/2"), "").unwrap(), Elem::Cu(CuZ::soft(Q::new(1, 2))));
        assert!(parse_elem(&m, &json!("soft:0"), "/x").is_err());
        let n = Instance::numerical(&[2, 3]);
        let e = parse_elem(&n, &json!([1]), "/x").unwrap_err();
        assert_eq!(e.pointer, "/x");
    }
}
