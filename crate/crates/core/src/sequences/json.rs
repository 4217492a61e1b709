//! Sequence-spec JSON.

use std::path::Path;

use serde_json::{json, Map, Value};

use super::{Explicit, Family, PrefixKind, SequenceDef, Transformed};
use crate::error::{Error, Result};
use crate::numerics::{format_rational, parse_rational, Rational};
use crate::transforms::TransformTag;

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str) -> Result<Obj<'a>> {
        match v.as_object() {
            Some(map) => Ok(Obj {
                map,
                path: path.to_string(),
            }),
            None => Err(Error::parse(path, "expected an object")),
        }
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::parse(
                    self.at(k),
                    format!("unknown key; expected one of {}", allowed.join(", ")),
                ));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Result<&'a Value> {
        self.map
            .get(key)
            .ok_or_else(|| Error::parse(self.at(key), "missing"))
    }

    fn rational(&self, key: &str) -> Result<Rational> {
        rational_value(self.get(key)?, &self.at(key))
    }

    fn uint(&self, key: &str) -> Result<u64> {
        let v = self.get(key)?;
        v.as_u64()
            .or_else(|| v.as_str().and_then(|s| s.trim().parse().ok()))
            .ok_or_else(|| Error::parse(self.at(key), "expected a nonnegative integer"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| Error::parse(self.at(key), "expected a string"))
    }

    fn rational_list(&self, key: &str) -> Result<Vec<Rational>> {
        let path = self.at(key);
        match self.get(key)? {
            Value::Array(items) => items
                .iter()
                .enumerate()
                .map(|(i, v)| rational_value(v, &format!("{path}[{i}]")))
                .collect(),
            v => Ok(vec![rational_value(v, &path)?]),
        }
    }
}

pub(crate) fn rational_value(v: &Value, path: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => {
            return Err(Error::parse(
                path,
                "expected a rational as a string \"p/q\" or an integer",
            ))
        }
    };
    parse_rational(&text).map_err(|e| Error::parse(path, e.to_string()))
}

fn located<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(path, other.to_string()),
    })
}

/// Parse a sequence spec from JSON text.
pub fn parse_sequence_json(text: &str) -> Result<SequenceDef> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    from_value(&v, "$")
}

/// Parse a sequence spec file; errors carry the file name.
pub fn parse_sequence_file(path: &Path) -> Result<SequenceDef> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    parse_sequence_json(&text).map_err(|e| match e {
        Error::Parse { path: p, message } => Error::parse(format!("{}: {p}", path.display()), message),
        other => other,
    })
}

/// Parse from an already decoded value; `path` locates errors.
pub fn from_value(v: &Value, path: &str) -> Result<SequenceDef> {
    let o = Obj::new(v, path)?;
    if o.map.contains_key("family") {
        return family(&o);
    }
    if let Some(e) = o.map.get("explicit") {
        o.only(&["explicit"])?;
        return explicit(e, &o.at("explicit"));
    }
    if let Some(t) = o.map.get("transform") {
        o.only(&["transform"])?;
        return transform(t, &o.at("transform"));
    }
    Err(Error::parse(
        path,
        "expected one of the keys family, explicit, transform",
    ))
}

fn family(o: &Obj) -> Result<SequenceDef> {
    let name = o.str("family")?;
    let here = o.at("family");
    match name {
        "agler" => {
            o.only(&["family", "j"])?;
            located(SequenceDef::agler(o.uint("j")?), &o.at("j"))
        }
        "bergman" => {
            o.only(&["family"])?;
            Ok(SequenceDef::bergman())
        }
        "sabcd" => {
            o.only(&["family", "a", "b", "c", "d"])?;
            located(
                SequenceDef::sabcd(o.rational("a")?, o.rational("b")?, o.rational("c")?, o.rational("d")?),
                &o.path,
            )
        }
        "geometric_gap" => {
            o.only(&["family", "p"])?;
            located(SequenceDef::geometric_gap(o.rational_list("p")?), &o.at("p"))
        }
        "euler" => {
            o.only(&["family"])?;
            Ok(SequenceDef::euler())
        }
        "dirichlet" => {
            o.only(&["family"])?;
            Ok(SequenceDef::dirichlet())
        }
        "unilateral" => {
            o.only(&["family"])?;
            Ok(SequenceDef::unilateral())
        }
        "constant" => {
            o.only(&["family", "c"])?;
            located(SequenceDef::constant(o.rational("c")?), &o.at("c"))
        }
        "power_of" => {
            o.only(&["family", "of", "base", "m"])?;
            let (key, base) = match (o.map.get("of"), o.map.get("base")) {
                (Some(b), None) => ("of", b),
                (None, Some(b)) => ("base", b),
                _ => return Err(Error::parse(o.path.clone(), "power_of needs exactly one of of, base")),
            };
            let base = from_value(base, &o.at(key))?;
            located(SequenceDef::power_of(base, o.rational("m")?), &o.at("m"))
        }
        other => Err(Error::parse(here, format!("unknown family {other:?}"))),
    }
}

fn explicit(v: &Value, path: &str) -> Result<SequenceDef> {
    let o = Obj::new(v, path)?;
    o.only(&["weights", "weights_squared", "moments", "tail"])?;
    let kinds = [
        ("weights", PrefixKind::Weights),
        ("weights_squared", PrefixKind::WeightsSquared),
        ("moments", PrefixKind::Moments),
    ];
    let present: Vec<_> = kinds.iter().filter(|(k, _)| o.map.contains_key(*k)).collect();
    let &&(key, kind) = match present.as_slice() {
        [one] => one,
        _ => {
            return Err(Error::parse(
                path,
                "explicit needs exactly one of weights, weights_squared, moments",
            ))
        }
    };
    let given = o.rational_list(key)?;
    let tail = o
        .map
        .get("tail")
        .map(|t| from_value(t, &o.at("tail")))
        .transpose()?;
    located(SequenceDef::explicit(kind, given, tail), &o.at(key))
}

fn transform(v: &Value, path: &str) -> Result<SequenceDef> {
    let o = Obj::new(v, path)?;
    let tag = transform_tag(&o, &["of"])?;
    let of = from_value(o.get("of")?, &o.at("of"))?;
    located(crate::transforms::apply(tag, of), path)
}

/// The tag part of a transform object; `extra` lists keys allowed besides
/// the transform's own parameters.
fn transform_tag(o: &Obj, extra: &[&str]) -> Result<TransformTag> {
    let only = |keys: &[&str]| {
        let all: Vec<&str> = keys.iter().chain(extra).copied().collect();
        o.only(&all)
    };
    let name = o.str("name")?;
    let tag = match name {
        "schur_power" => {
            only(&["name", "p"])?;
            TransformTag::SchurPower { p: o.rational("p")? }
        }
        "aluthge" => {
            only(&["name"])?;
            TransformTag::Aluthge
        }
        "aluthge_iter" => {
            only(&["name", "m"])?;
            TransformTag::AluthgeIter {
                m: o.uint("m")? as u32,
            }
        }
        "generalized_mean" => {
            only(&["name", "t"])?;
            TransformTag::GeneralizedMean { t: o.rational("t")? }
        }
        "mean" => {
            only(&["name"])?;
            TransformTag::GeneralizedMean { t: Rational::from_integer(0.into()) }
        }
        "cesaro" => {
            only(&["name"])?;
            TransformTag::Cesaro
        }
        "geometric_cesaro" => {
            only(&["name"])?;
            TransformTag::GeometricCesaro
        }
        "cesaro_window" => {
            only(&["name", "k"])?;
            TransformTag::CesaroWindow { k: o.uint("k")? as usize }
        }
        "geometric_cesaro_window" => {
            only(&["name", "k"])?;
            TransformTag::GeometricCesaroWindow { k: o.uint("k")? as usize }
        }
        "reciprocal" => {
            only(&["name"])?;
            TransformTag::Reciprocal
        }
        "restriction" => {
            only(&["name", "r"])?;
            TransformTag::Restriction { r: o.uint("r")? as usize }
        }
        "perturb_zeroth" => {
            only(&["name", "alpha0", "allow_increase"])?;
            let allow_increase = match o.map.get("allow_increase") {
                None => false,
                Some(Value::Bool(b)) => *b,
                Some(_) => return Err(Error::parse(o.at("allow_increase"), "expected a boolean")),
            };
            TransformTag::PerturbZeroth {
                alpha0: o.rational("alpha0")?,
                allow_increase,
            }
        }
        "exp_normalized" => {
            only(&["name"])?;
            TransformTag::ExpNormalized
        }
        "exp_moment" => {
            only(&["name"])?;
            TransformTag::ExpMoment
        }
        other => return Err(Error::parse(o.at("name"), format!("unknown transform {other:?}"))),
    };
    located(tag.validate(), &o.path)?;
    Ok(tag)
}

/// Parse a transform tag from `{"name": ..., params}` without an `of`.
pub fn parse_transform_tag(v: &Value, path: &str) -> Result<TransformTag> {
    transform_tag(&Obj::new(v, path)?, &[])
}

fn r(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

impl SequenceDef {
    /// The sequence-spec JSON that parses back to `self`.
    pub fn to_json(&self) -> Value {
        match self {
            SequenceDef::Family(f) => match f {
                Family::Agler { j } => json!({"family": "agler", "j": j}),
                Family::Sabcd { a, b, c, d } => {
                    json!({"family": "sabcd", "a": r(a), "b": r(b), "c": r(c), "d": r(d)})
                }
                Family::GeometricGap { ps } => {
                    json!({"family": "geometric_gap", "p": ps.iter().map(r).collect::<Vec<_>>()})
                }
                Family::Euler => json!({"family": "euler"}),
                Family::Dirichlet => json!({"family": "dirichlet"}),
                Family::Unilateral => json!({"family": "unilateral"}),
                Family::Constant { c } => json!({"family": "constant", "c": r(c)}),
                Family::PowerOf { base, m } => {
                    json!({"family": "power_of", "of": base.to_json(), "m": r(m)})
                }
            },
            SequenceDef::Explicit(Explicit { kind, given, tail }) => {
                let key = match kind {
                    PrefixKind::Weights => "weights",
                    PrefixKind::WeightsSquared => "weights_squared",
                    PrefixKind::Moments => "moments",
                };
                json!({"explicit": {key: given.iter().map(r).collect::<Vec<_>>(), "tail": tail.to_json()}})
            }
            SequenceDef::Transformed(t) => {
                let Transformed { tag, of } = t.as_ref();
                let mut m = Map::new();
                m.insert("name".into(), Value::String(tag.name().into()));
                match tag {
                    TransformTag::SchurPower { p } => {
                        m.insert("p".into(), r(p));
                    }
                    TransformTag::AluthgeIter { m: it } => {
                        m.insert("m".into(), json!(it));
                    }
                    TransformTag::GeneralizedMean { t } => {
                        m.insert("t".into(), r(t));
                    }
                    TransformTag::CesaroWindow { k } | TransformTag::GeometricCesaroWindow { k } => {
                        m.insert("k".into(), json!(k));
                    }
                    TransformTag::Restriction { r: rr } => {
                        m.insert("r".into(), json!(rr));
                    }
                    TransformTag::PerturbZeroth {
                        alpha0,
                        allow_increase,
                    } => {
                        m.insert("alpha0".into(), r(alpha0));
                        m.insert("allow_increase".into(), json!(allow_increase));
                    }
                    _ => {}
                }
                m.insert("of".into(), of.to_json());
                json!({ "transform": m })
            }
        }
    }
}

impl serde::Serialize for SequenceDef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Sequence;

    #[test]
    fn spec_shapes_parse() {
        let cases = [
            r#"{"family":"agler","j":3}"#,
            r#"{"family":"sabcd","a":"1","b":"1","c":"1","d":"2"}"#,
            r#"{"family":"geometric_gap","p":["1/2","1/3"]}"#,
            r#"{"family":"euler"}"#,
            r#"{"explicit":{"weights":["1/2","2/3"],"tail":{"family":"unilateral"}}}"#,
            r#"{"transform":{"name":"aluthge","of":{"family":"bergman"}}}"#,
            r#"{"transform":{"name":"generalized_mean","t":"1/4","of":{"family":"agler","j":2}}}"#,
            r#"{"family":"power_of","of":{"family":"bergman"},"m":6}"#,
        ];
        for c in cases {
            let s = parse_sequence_json(c).unwrap_or_else(|e| panic!("{c}: {e}"));
            let back = from_value(&s.to_json(), "$").unwrap();
            assert_eq!(s, back, "{c}");
            s.terms(3).unwrap();
        }
    }

    #[test]
    fn errors_are_located() {
        let e = parse_sequence_json(r#"{"transform":{"name":"aluthge","of":{"family":"agler","j":0}}}"#)
            .unwrap_err();
        match e {
            Error::Parse { path, .. } => assert_eq!(path, "$.transform.of.j"),
            other => panic!("{other:?}"),
        }
        let e = parse_sequence_json(r#"{"family":"sabcd","a":"1","b":"x","c":"1","d":"2"}"#)
            .unwrap_err();
        assert!(matches!(e, Error::Parse { ref path, .. } if path == "$.b"), "{e:?}");
        let e = parse_sequence_json(r#"{"family":"agler","j":2,"k":1}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { ref path, .. } if path == "$.k"), "{e:?}");
        let e = parse_sequence_json("{\"family\":").unwrap_err();
        assert!(matches!(e, Error::Parse { ref path, .. } if path.starts_with("line 1")));
    }
}
