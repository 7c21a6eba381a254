use std::path::Path;

use jordanscope::algebra::{parse_entry, GaussRat, Ring, C64};
use jordanscope::scanner::{builtin, builtin_names, FamilySpec, MatrixFamily};

use crate::Failure;

/// Loads a family from a JSON file, or a shipped one via `builtin:NAME`.
pub fn load_family(arg: &str) -> Result<MatrixFamily, Failure> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| {
            let known: Vec<&str> = builtin_names().collect();
            Failure::Input(format!("unknown built-in family '{name}' (known: {})", known.join(", ")))
        });
    }
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    let spec: FamilySpec = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    MatrixFamily::from_spec(&spec).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

/// One exact scalar. Real parts are decimals (`0.3`, `-1.5e-3`) or
/// fractions (`1/3`); complex values are `x+y*i`, `y*i` or any integer
/// Gaussian expression such as `(1+2*i)^2`.
pub fn parse_scalar(text: &str) -> Result<GaussRat, Failure> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(v) = parse_complex(&t) {
        return Ok(v);
    }
    let p = parse_entry(&t, &[]).map_err(|e| Failure::Input(format!("'{text}': {e}")))?;
    p.as_constant()
        .ok_or_else(|| Failure::Input(format!("'{text}' is not a number")))
}

fn parse_complex(t: &str) -> Option<GaussRat> {
    if let Some(v) = parse_real(t) {
        return Some(v);
    }
    let imag = |s: &str| -> Option<GaussRat> {
        let body = s.strip_suffix("*i").or_else(|| s.strip_suffix('i'))?;
        let y = match body {
            "" | "+" => GaussRat::from_i64(1),
            "-" => GaussRat::from_i64(-1),
            _ => parse_real(body)?,
        };
        Some(y * GaussRat::i())
    };
    if let Some(v) = imag(t) {
        return Some(v);
    }
    // split x ± y*i at the last sign that is not leading or part of an exponent
    let bytes = t.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    Some(parse_real(&t[..cut])? + imag(&t[cut..])?)
}

/// Decimal literal or fraction of two decimal literals, converted exactly.
fn parse_real(t: &str) -> Option<GaussRat> {
    if let Some((a, b)) = t.split_once('/') {
        let (a, b) = (parse_decimal(a)?, parse_decimal(b)?);
        return if b == GaussRat::zero() { None } else { Some(a / b) };
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Option<GaussRat> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(k) => (&body[..k], body[k + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || exp.abs() > 300 {
        return None;
    }
    let mut v = parse_entry(digits.trim_start_matches('0').max("0"), &[]).ok()?.as_constant()?;
    let shift = exp - frac.len() as i32;
    let ten = GaussRat::from_i64(10);
    for _ in 0..shift.unsigned_abs() {
        v = if shift > 0 { v * ten.clone() } else { v / ten.clone() };
    }
    Some(if neg { -v } else { v })
}

/// Comma-separated coordinates.
pub fn parse_point(text: &str, nparams: usize) -> Result<Vec<GaussRat>, Failure> {
    let pt: Vec<GaussRat> = text.split(',').map(parse_scalar).collect::<Result<_, _>>()?;
    if pt.len() != nparams {
        return Err(Failure::Input(format!(
            "point '{text}' has {} coordinates, family has {nparams} parameters",
            pt.len()
        )));
    }
    Ok(pt)
}

/// Semicolon-separated vertices, each a comma-separated point.
pub fn parse_path(text: &str, nparams: usize) -> Result<Vec<Vec<C64>>, Failure> {
    text.split(';')
        .map(|v| Ok(parse_point(v, nparams)?.iter().map(GaussRat::to_c64).collect()))
        .collect()
}

/// `lo:hi` per parameter, comma-separated.
pub fn parse_box(text: &str, nparams: usize) -> Result<Vec<(f64, f64)>, Failure> {
    let out: Vec<(f64, f64)> = text
        .split(',')
        .map(|iv| {
            let (a, b) = iv
                .split_once(':')
                .ok_or_else(|| Failure::Input(format!("interval '{iv}' must be lo:hi")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Failure::Input(format!("'{s}': {e}")))
            };
            Ok((num(a)?, num(b)?))
        })
        .collect::<Result<_, Failure>>()?;
    if out.len() != nparams {
        return Err(Failure::Input(format!("box has {} intervals, family has {nparams} parameters", out.len())));
    }
    Ok(out)
}

/// One resolution for all axes, or one per axis.
pub fn parse_res(text: &str, nparams: usize) -> Result<Vec<usize>, Failure> {
    let v: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| Failure::Input(format!("'{s}': {e}"))))
        .collect::<Result<_, _>>()?;
    match v.len() {
        1 => Ok(vec![v[0]; nparams]),
        k if k == nparams => Ok(v),
        k => Err(Failure::Input(format!("{k} resolutions given, family has {nparams} parameters"))),
    }
}
