//! Parsers for the compact textual and JSON forms accepted on the command line.

use crate::CliError;
use pgk_core::modp::{Atom, CharModP, Fp2, GaloisSS, Gl2SS};
use pgk_core::smooth::{Mat2, Rat};
use pgk_core::trianguline::CharacterP;
use pgk_core::{PadicScalar, Q};
use serde_json::{json, Value};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Inline JSON, or `@path` to read a file.
pub fn read_json(text: &str) -> Result<Value, CliError> {
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => text.to_string(),
    };
    Ok(serde_json::from_str(&body)?)
}

pub fn scalar(text: &str, p: u64, prec: u32) -> Result<PadicScalar, CliError> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    Ok(PadicScalar::parse(text, p, prec)?)
}

fn scalar_value(v: &Value, p: u64, prec: u32) -> Result<PadicScalar, CliError> {
    match v {
        Value::String(s) => scalar(s, p, prec),
        Value::Number(n) => scalar(&n.to_string(), p, prec),
        Value::Object(_) => Ok(serde_json::from_value(v.clone())?),
        _ => Err(usage(format!("expected a scalar, got {v}"))),
    }
}

/// `{"c_p": "1", "j": 0, "s": "0"}`.
pub fn character(text: &str, p: u64, prec: u32) -> Result<CharacterP, CliError> {
    let v = read_json(text)?;
    let field = |k: &str| v.get(k).ok_or_else(|| usage(format!("character is missing {k}")));
    let c_p = scalar_value(field("c_p")?, p, prec)?;
    let j = field("j")?.as_i64().ok_or_else(|| usage("j must be an integer"))?;
    let s = scalar_value(field("s")?, p, prec)?;
    Ok(CharacterP::new(c_p, j, s)?)
}

fn fp2_value(v: &Value, p: u64) -> Result<Fp2, CliError> {
    match v {
        Value::Number(n) => Ok(Fp2::from_int(p, n.as_i64().ok_or_else(|| usage("bad field element"))? as i128)),
        Value::Array(a) if a.len() == 2 => {
            let c = |x: &Value| x.as_i64().ok_or_else(|| usage("bad field element"));
            Ok(Fp2::new(p, c(&a[0])? as i128, c(&a[1])? as i128))
        }
        _ => Err(usage(format!("expected a field element, got {v}"))),
    }
}

pub fn fp2_text(text: &str, p: u64) -> Result<Fp2, CliError> {
    let v: Value = if text.contains(',') { serde_json::from_str(&format!("[{text}]"))? } else { serde_json::from_str(text)? };
    fp2_value(&v, p)
}

/// `{"t": 1, "lambda": 2}` or `{"t": 0, "lambda": [0, 1]}`.
pub fn char_modp_value(v: &Value, p: u64) -> Result<CharModP, CliError> {
    let t = v.get("t").and_then(Value::as_i64).ok_or_else(|| usage("character needs integer t"))?;
    let lambda = match v.get("lambda") {
        Some(l) => fp2_value(l, p)?,
        None => Fp2::one(p),
    };
    if lambda.is_zero() {
        return Err(usage("lambda must be nonzero"));
    }
    Ok(CharModP::new(lambda, t))
}

pub fn char_modp_json(c: &CharModP) -> Value {
    json!({ "t": c.t, "lambda": [c.lambda.re, c.lambda.im] })
}

pub const GALOIS_SCHEMA: &str = "pgk.galois_ss/1";
pub const GL2_SCHEMA: &str = "pgk.gl2_ss/1";

/// `{"p": 5, "kind": "irred", "r": 1, "chi": {...}}` or
/// `{"p": 5, "kind": "split", "chars": [{...}, {...}]}`.
pub fn galois(v: &Value) -> Result<GaloisSS, CliError> {
    let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| usage("missing p"))?;
    if !pgk_core::arith::is_prime(p) || p == 2 {
        return Err(usage("p must be an odd prime"));
    }
    match v.get("kind").and_then(Value::as_str) {
        Some("irred") => {
            let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| usage("missing r"))?;
            let chi = match v.get("chi") {
                Some(c) => char_modp_value(c, p)?,
                None => CharModP::trivial(p),
            };
            Ok(GaloisSS::irred(r, chi)?)
        }
        Some("split") => {
            let chars = v.get("chars").and_then(Value::as_array).ok_or_else(|| usage("missing chars"))?;
            if chars.len() != 2 {
                return Err(CliError::Core(pgk_core::Error::NotSemisimpleInput("a split representation has two characters".into())));
            }
            Ok(GaloisSS::split(char_modp_value(&chars[0], p)?, char_modp_value(&chars[1], p)?))
        }
        _ => Err(usage("kind must be irred or split")),
    }
}

pub fn galois_json(w: &GaloisSS) -> Value {
    match w {
        GaloisSS::Irred { r, chi } => {
            json!({ "schema": GALOIS_SCHEMA, "p": w.p(), "kind": "irred", "r": r, "chi": char_modp_json(chi) })
        }
        GaloisSS::Split { chars } => json!({
            "schema": GALOIS_SCHEMA,
            "p": w.p(),
            "kind": "split",
            "chars": [char_modp_json(&chars[0]), char_modp_json(&chars[1])],
        }),
    }
}

pub fn atom_json(a: &Atom) -> Value {
    match a {
        Atom::Pi { r, lambda, chi } => {
            json!({ "kind": "pi", "r": r, "lambda": [lambda.re, lambda.im], "chi": char_modp_json(chi) })
        }
        Atom::Special { eta } => json!({ "kind": "special", "eta": char_modp_json(eta) }),
        Atom::OneDim { eta } => json!({ "kind": "one_dim", "eta": char_modp_json(eta) }),
    }
}

pub fn gl2_json(p: u64, pi: &Gl2SS) -> Value {
    json!({
        "schema": GL2_SCHEMA,
        "p": p,
        "atoms": pi.atoms.iter().map(atom_json).collect::<Vec<_>>(),
        "central_character": pi.central_character().map(|c| char_modp_json(&c)),
        "text": pi.to_string(),
    })
}

/// `a,b,c,d` with rational entries.
pub fn matrix(text: &str) -> Result<Mat2, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(usage("a matrix is given as a,b,c,d"));
    }
    let mut e = [Rat::from_integer(0); 4];
    for (slot, s) in e.iter_mut().zip(&parts) {
        *slot = s.parse().map_err(|_| usage(format!("bad matrix entry {s}")))?;
    }
    let m = Mat2([[e[0], e[1]], [e[2], e[3]]]);
    if m.det() == Rat::from_integer(0) {
        return Err(usage("matrix is singular"));
    }
    Ok(m)
}

/// `2..12` (inclusive), `2..=12`, `3,5,7` or a single integer.
pub fn int_range(text: &str) -> Result<Vec<i64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || usage(format!("bad range {text}"));
    if let Some((a, b)) = text.split_once("..") {
        let b = b.trim_start_matches('=');
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..=b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

pub fn rational_list(text: &str) -> Result<Vec<Q>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse::<Q>().map_err(|_| usage(format!("bad rational {s}"))))
        .collect()
}
