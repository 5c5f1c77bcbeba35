//! Coin selectors and the initial-state mini-language.
//!
//! Coins: `grover`, `a1`, `a2`, `a4:<p>` (with `p` a decimal or `a/b`), or
//! `file:<path>` pointing at a JSON 4×4 array of `[re, im]` pairs.
//!
//! Initial states: `R`, `L`, `U`, `D` for a pure chirality at the origin, or
//! `custom:a,b,c,d` with four complex literals such as `0.5`, `-0.3i`,
//! `1-2i`, `0.5e^{i/3}` or `e^{i0.25pi}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use qwalk::{Chirality, Coin, InitialSpec, Spinor};

/// Deviation of the supplied `Σ|w|²` from one above which a warning is shown.
pub const NORM_WARN_TOL: f64 = 1e-6;

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

/// A number, or a ratio `a/b` of two numbers.
pub fn parse_real(s: &str) -> Result<f64, ParseError> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| ParseError(format!("'{t}' is not a number")));
    match s.split_once('/') {
        Some((a, b)) => {
            let d = num(b)?;
            if d == 0.0 {
                return err(format!("zero denominator in '{s}'"));
            }
            Ok(num(a)? / d)
        }
        None => num(s),
    }
}

pub fn parse_coin(s: &str) -> Result<Coin, qwalk::WalkError> {
    let bad = |msg: String| qwalk::WalkError::Domain(msg);
    match s.trim() {
        "grover" => Ok(Coin::grover()),
        "a1" => Ok(Coin::a1()),
        "a2" => Ok(Coin::a2()),
        other => {
            if let Some(p) = other.strip_prefix("a4:") {
                let p = parse_real(p).map_err(|e| bad(e.0))?;
                Coin::symmetric_family(p)
            } else if let Some(path) = other.strip_prefix("file:") {
                Coin::from_json_file(path)
            } else {
                Err(bad(format!("unknown coin '{other}' (expected grover|a1|a2|a4:p|file:path)")))
            }
        }
    }
}

// θ in `e^{iθ}`: empty (θ = 1), `/b`, a number or ratio, optionally scaled by `pi`.
fn parse_phase(body: &str) -> Result<f64, ParseError> {
    let body = body.trim().trim_start_matches('*');
    let (body, scale) = match body.find("pi").or_else(|| body.find('π')) {
        Some(pos) => {
            let tail_start = pos + if body[pos..].starts_with("pi") { 2 } else { 'π'.len_utf8() };
            (format!("{}{}", &body[..pos], &body[tail_start..]), PI)
        }
        None => (body.to_owned(), 1.0),
    };
    let body = body.trim().trim_start_matches('*').trim_end_matches('*');
    let value = if body.is_empty() {
        1.0
    } else if let Some(d) = body.strip_prefix('/') {
        1.0 / parse_real(d)?
    } else {
        parse_real(body)?
    };
    Ok(value * scale)
}

/// One complex literal.
pub fn parse_complex(s: &str) -> Result<Complex64, ParseError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return err("empty complex literal");
    }
    if let Some(pos) = t.find("e^{") {
        if !t.ends_with('}') {
            return err(format!("unterminated phase in '{s}'"));
        }
        let r = match &t[..pos] {
            "" | "+" => 1.0,
            "-" => -1.0,
            r => parse_real(r.trim_end_matches('*'))?,
        };
        let inner = &t[pos + 3..t.len() - 1];
        let (sign, rest) = match inner.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, inner),
        };
        let Some(theta) = rest.strip_prefix('i') else {
            return err(format!("phase '{inner}' must start with i"));
        };
        return Ok(Complex64::from_polar(r, sign * parse_phase(theta)?));
    }
    // split `x+yi` / `x-yi` at the last sign that is not part of an exponent
    let bytes = t.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag_part = |p: &str| -> Result<f64, ParseError> {
        let coeff = &p[..p.len() - 1];
        match coeff {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            c => parse_real(c.trim_end_matches('*')),
        }
    };
    if t.ends_with('i') {
        match split {
            Some(k) => Ok(Complex64::new(parse_real(&t[..k])?, imag_part(&t[k..])?)),
            None => Ok(Complex64::new(0.0, imag_part(&t)?)),
        }
    } else {
        Ok(Complex64::new(parse_real(&t)?, 0.0))
    }
}

/// Parsed initial state with the norm² that was written.
#[derive(Debug, Clone)]
pub struct ParsedInitial {
    pub spec: InitialSpec,
    pub supplied_norm_sqr: f64,
}

impl ParsedInitial {
    pub fn needs_warning(&self) -> bool {
        (self.supplied_norm_sqr.sqrt() - 1.0).abs() > NORM_WARN_TOL
    }
}

pub fn parse_initial(s: &str) -> Result<ParsedInitial, ParseError> {
    let s = s.trim();
    if let Ok(c) = s.parse::<Chirality>() {
        return Ok(ParsedInitial { spec: InitialSpec::pure(c), supplied_norm_sqr: 1.0 });
    }
    let Some(list) = s.strip_prefix("custom:") else {
        return err(format!("unknown initial state '{s}' (expected R|L|U|D or custom:a,b,c,d)"));
    };
    let parts: Vec<&str> = list.split(',').collect();
    if parts.len() != 4 {
        return err(format!("custom initial state needs 4 weights, got {}", parts.len()));
    }
    let mut w: Spinor = [Complex64::new(0.0, 0.0); 4];
    for (slot, p) in w.iter_mut().zip(&parts) {
        *slot = parse_complex(p)?;
    }
    let (spec, norm) = InitialSpec::normalized(w).map_err(|e| ParseError(e.to_string()))?;
    Ok(ParsedInitial { spec, supplied_norm_sqr: norm })
}
