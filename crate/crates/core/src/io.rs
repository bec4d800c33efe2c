//! JSON forms of generator words and navigator traces.
//!
//! A word is `{"gens": [g, …]}` with each `g` one of
//! `{"kind":"triangular","f":EXPR}`, `{"kind":"op_triangular","f":EXPR}`,
//! `{"kind":"affine_gl","T":[[s,…],…]}`, `{"kind":"affine_sl2","A":[[s,s],[s,s]],"B":[s,s]}`,
//! `{"kind":"fourier_r"}`, `{"kind":"fourier_zero"}`, `{"kind":"phi"}`.
//! Scalars `s` are exact strings such as `"-3/2"` or `"(1+2i)"`; plain JSON integers are accepted.

use serde_json::{json, Value};

use crate::autom::{Generator, GeneratorWord};
use crate::error::{Error, Result};
use crate::navigator::{NavStep, NavTrace};
use crate::necklace::Alphabet;
use crate::parse::{parse_cycsum, parse_scalar, print_cycsum};
use crate::quiver::QuiverSpec;
use crate::repspace::RepPoint;
use crate::scalar::{GaussScalar, SMat};

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn scalar_json(c: &GaussScalar) -> Value {
    Value::String(c.to_string())
}

fn scalar_from(v: &Value) -> Result<GaussScalar> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => {
            n.as_i64().map(GaussScalar::from_int).ok_or_else(|| bad(format!("non-integer number {n}; use a string")))
        }
        other => Err(bad(format!("expected a scalar, got {other}"))),
    }
}

fn rows_from(v: &Value) -> Result<Vec<Vec<GaussScalar>>> {
    let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
    rows.iter()
        .map(|r| r.as_array().ok_or_else(|| bad("expected a row array"))?.iter().map(scalar_from).collect())
        .collect()
}

pub fn smat_to_json(m: &SMat) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect())
}

pub fn smat_from_json(v: &Value) -> Result<SMat> {
    let rows = rows_from(v)?;
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(bad("ragged matrix"));
    }
    Ok(SMat::from_rows(rows))
}

pub fn generator_to_json(g: &Generator, spec: &QuiverSpec) -> Value {
    match g {
        Generator::Triangular(f) => json!({"kind": g.kind(), "f": print_cycsum(f, &Alphabet::triangular(spec))}),
        Generator::OpTriangular(f) => json!({"kind": g.kind(), "f": print_cycsum(f, &Alphabet::op_triangular(spec))}),
        Generator::AffineGL(t) => json!({"kind": g.kind(), "T": smat_to_json(t)}),
        Generator::AffineSL2 { a, b } => json!({
            "kind": g.kind(),
            "A": a.iter().map(|r| r.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "B": b.iter().map(scalar_json).collect::<Vec<_>>(),
        }),
        Generator::FourierR | Generator::FourierZero | Generator::Phi => json!({"kind": g.kind()}),
    }
}

pub fn generator_from_json(v: &Value, spec: &QuiverSpec) -> Result<Generator> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("generator without a kind"))?;
    let f = || v.get("f").and_then(Value::as_str).ok_or_else(|| bad(format!("{kind} needs an \"f\" expression")));
    Ok(match kind {
        "triangular" => Generator::Triangular(parse_cycsum(f()?, &Alphabet::triangular(spec))?),
        "op_triangular" => Generator::OpTriangular(parse_cycsum(f()?, &Alphabet::op_triangular(spec))?),
        "affine_gl" => {
            let t = smat_from_json(v.get("T").ok_or_else(|| bad("affine_gl needs \"T\""))?)?;
            if t.to_rows().len() != spec.r {
                return Err(Error::RankMismatch { expected: spec.r, got: t.to_rows().len() });
            }
            Generator::AffineGL(t)
        }
        "affine_sl2" => {
            let a = rows_from(v.get("A").ok_or_else(|| bad("affine_sl2 needs \"A\""))?)?;
            let b: Vec<GaussScalar> = match v.get("B") {
                Some(b) => b
                    .as_array()
                    .ok_or_else(|| bad("\"B\" must be an array"))?
                    .iter()
                    .map(scalar_from)
                    .collect::<Result<_>>()?,
                None => vec![GaussScalar::from_int(0), GaussScalar::from_int(0)],
            };
            if a.len() != 2 || a.iter().any(|r| r.len() != 2) || b.len() != 2 {
                return Err(bad("affine_sl2 needs a 2×2 \"A\" and a length-2 \"B\""));
            }
            Generator::AffineSL2 {
                a: [[a[0][0].clone(), a[0][1].clone()], [a[1][0].clone(), a[1][1].clone()]],
                b: [b[0].clone(), b[1].clone()],
            }
        }
        "fourier_r" => Generator::FourierR,
        "fourier_zero" => Generator::FourierZero,
        "phi" => Generator::Phi,
        other => return Err(bad(format!("unknown generator kind {other}"))),
    })
}

pub fn word_to_json(w: &GeneratorWord, spec: &QuiverSpec) -> Value {
    json!({"gens": w.gens.iter().map(|g| generator_to_json(g, spec)).collect::<Vec<_>>()})
}

/// Accepts `{"gens": [...]}` or a bare array of generators.
pub fn word_from_json(v: &Value, spec: &QuiverSpec) -> Result<GeneratorWord> {
    let gens = v.get("gens").unwrap_or(v).as_array().ok_or_else(|| bad("expected {\"gens\": [...]}"))?;
    Ok(GeneratorWord::new(gens.iter().map(|g| generator_from_json(g, spec)).collect::<Result<_>>()?))
}

pub fn trace_to_json(t: &NavTrace) -> Value {
    let spec = t.start.spec();
    json!({
        "start": t.start.to_json(),
        "word": word_to_json(&t.word, &spec),
        "steps": t.steps_json(),
        "final": t.final_point.to_json(),
    })
}

pub fn trace_from_json(v: &Value) -> Result<NavTrace> {
    let field = |k: &str| v.get(k).ok_or_else(|| bad(format!("trace without \"{k}\"")));
    let start = RepPoint::from_json(field("start")?)?;
    let word = word_from_json(field("word")?, &start.spec())?;
    let steps: Vec<NavStep> = match v.get("steps") {
        Some(s) => serde_json::from_value(s.clone()).map_err(|e| bad(e.to_string()))?,
        None => Vec::new(),
    };
    let final_point = RepPoint::from_json(field("final")?)?;
    Ok(NavTrace { start, word, steps, final_point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::CycSum;

    #[test]
    fn word_round_trip() {
        let spec = QuiverSpec::zigzag(4).unwrap();
        let mut f = CycSum::word(&[0, 0, Alphabet::b_index(&spec, 2, 1)], GaussScalar::ratio(-3, 7));
        f.add_word(&[Alphabet::b_index(&spec, 1, 2)], GaussScalar::i());
        let g = CycSum::word(&[0, Alphabet::b_star_index(&spec, 2, 2)], GaussScalar::ratio(1, 1 << 20));
        let mut t = SMat::identity(4);
        t.set(0, 3, GaussScalar::ratio(5, 2));
        let w = GeneratorWord::new(vec![
            Generator::Triangular(f),
            Generator::OpTriangular(g),
            Generator::AffineGL(t),
            Generator::AffineSL2 {
                a: [[1.into(), 2.into()], [0.into(), 1.into()]],
                b: [GaussScalar::ratio(1, 3), 0.into()],
            },
            Generator::FourierR,
            Generator::FourierZero,
            Generator::Phi,
        ]);
        let v = word_to_json(&w, &spec);
        let text = serde_json::to_string(&v).unwrap();
        let back = word_from_json(&serde_json::from_str(&text).unwrap(), &spec).unwrap();
        assert_eq!(back, w);
        assert!(word_from_json(&json!({"gens": [{"kind": "spin"}]}), &spec).is_err());
    }
}
