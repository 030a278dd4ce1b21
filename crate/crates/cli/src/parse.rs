//! Textual literals: field presets and spec files, element and ideal
//! literals, replete ideals, archimedean shapes, and schedules.

use std::path::Path;

use num_rational::BigRational;
use replete_core::adelic::{ArchRegion, PlaceShape};
use replete_core::field::{FieldSpec, NumberField};
use replete_core::ideal::{FracIdeal, RepleteIdeal};
use replete_core::rat::parse_rational;
use replete_core::{Error, FieldElement, Result};

pub fn parse_field(preset: &str, spec_path: Option<&Path>) -> Result<NumberField> {
    if let Some(path) = spec_path {
        return field_from_spec_file(path);
    }
    match preset {
        "Q" => Ok(NumberField::rationals()),
        "Qi" => Ok(NumberField::gaussian()),
        _ => {
            if let Some(d) = preset.strip_prefix("Qsqrt:") {
                let d: i64 = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad quadratic preset `{preset}`")))?;
                NumberField::quadratic(d)
            } else {
                Err(Error::Parse(format!(
                    "unknown field preset `{preset}` (use Q, Qi, Qsqrt:<d> or --spec FILE)"
                )))
            }
        }
    }
}

/// Field spec file: TOML with `poly` (integer coefficients, constant term
/// first) and optional `basis` (n rows of n rationals as strings).
pub fn field_from_spec_file(path: &Path) -> Result<NumberField> {
    let text = std::fs::read_to_string(path)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::Parse(format!("field spec file: {e}")))?;
    let poly = table
        .get("poly")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("field spec needs `poly = [c0, c1, ...]`".into()))?;
    let coeffs: Vec<num_bigint::BigInt> = poly
        .iter()
        .map(|v| {
            v.as_integer()
                .map(num_bigint::BigInt::from)
                .ok_or_else(|| Error::Parse("poly coefficients must be integers".into()))
        })
        .collect::<Result<_>>()?;
    let basis = match table.get("basis") {
        None => None,
        Some(v) => {
            let rows = v
                .as_array()
                .ok_or_else(|| Error::Parse("basis must be an array of rows".into()))?;
            let mut out = vec![];
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::Parse("basis rows must be arrays".into()))?;
                let mut r = vec![];
                for x in row {
                    let s = x
                        .as_str()
                        .ok_or_else(|| Error::Parse("basis entries are strings like \"1/2\"".into()))?;
                    r.push(parse_rational(s)?);
                }
                out.push(r);
            }
            Some(out)
        }
    };
    NumberField::make(FieldSpec { poly: coeffs, basis })
}

pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(|p| parse_rational(p.trim())).collect()
}

/// Element literal: comma-separated rational coordinates over the integral
/// basis.
pub fn parse_element(field: &NumberField, s: &str) -> Result<FieldElement> {
    field.element(parse_rational_list(s)?)
}

/// Ideal literal `gen:[el;el;...]` with elements as coordinate lists.
pub fn parse_ideal(field: &NumberField, s: &str) -> Result<FracIdeal> {
    let s = s.trim();
    let body = s
        .strip_prefix("gen:[")
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("ideal literal must look like gen:[...], got `{s}`")))?;
    let gens: Vec<FieldElement> = body
        .split(';')
        .map(|el| parse_element(field, el))
        .collect::<Result<_>>()?;
    FracIdeal::from_generators(field, &gens)
}

/// Replete ideal literal `gen:[...] | n_1, n_2, ...`; the archimedean part
/// defaults to all ones when omitted.
pub fn parse_replete(field: &NumberField, s: &str) -> Result<RepleteIdeal> {
    let (ideal_part, arch_part) = match s.split_once('|') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let finite = parse_ideal(field, ideal_part)?;
    let arch = match arch_part {
        Some(b) => parse_rational_list(b)?,
        None => vec![BigRational::from_integer(1.into()); field.num_places()],
    };
    RepleteIdeal::new(field, finite, arch)
}

/// Finite idele edits `gen:[...]^e;gen:[...]^e`.
pub fn parse_idele_edits(field: &NumberField, s: &str) -> Result<Vec<(FracIdeal, i64)>> {
    let mut out = vec![];
    for part in s.split(';') {
        let (ideal_str, exp_str) = part
            .rsplit_once('^')
            .ok_or_else(|| Error::Parse(format!("idele edit must look like gen:[...]^e, got `{part}`")))?;
        let e: i64 = exp_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent `{exp_str}`")))?;
        out.push((parse_ideal(field, ideal_str)?, e));
    }
    Ok(out)
}

/// Shape list: semicolon-separated per-place shapes
/// `int:lo,hi` | `disc:r` | `rect:x0,x1,y0,y1`.
pub fn parse_region(s: &str) -> Result<ArchRegion> {
    let shapes: Vec<PlaceShape> = s
        .split(';')
        .map(|part| {
            let part = part.trim();
            if let Some(args) = part.strip_prefix("int:") {
                let v = parse_rational_list(args)?;
                if v.len() != 2 {
                    return Err(Error::Parse("int: needs lo,hi".into()));
                }
                Ok(PlaceShape::Interval {
                    lo: v[0].clone(),
                    hi: v[1].clone(),
                })
            } else if let Some(args) = part.strip_prefix("disc:") {
                Ok(PlaceShape::Disc {
                    radius: parse_rational(args)?,
                })
            } else if let Some(args) = part.strip_prefix("rect:") {
                let v = parse_rational_list(args)?;
                if v.len() != 4 {
                    return Err(Error::Parse("rect: needs x0,x1,y0,y1".into()));
                }
                Ok(PlaceShape::Rect {
                    x_lo: v[0].clone(),
                    x_hi: v[1].clone(),
                    y_lo: v[2].clone(),
                    y_hi: v[3].clone(),
                })
            } else {
                Err(Error::Parse(format!(
                    "unknown shape `{part}` (use int:/disc:/rect:)"
                )))
            }
        })
        .collect::<Result<_>>()?;
    ArchRegion::new(shapes)
}

/// Schedule literal `geometric:t0,ratio,k`.
pub fn parse_schedule(s: &str) -> Result<(BigRational, BigRational, usize)> {
    let args = s
        .strip_prefix("geometric:")
        .ok_or_else(|| Error::Parse(format!("schedule must look like geometric:t0,ratio,k, got `{s}`")))?;
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse("geometric schedule needs t0,ratio,k".into()));
    }
    let t0 = parse_rational(parts[0])?;
    let ratio = parse_rational(parts[1])?;
    let k: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad step count `{}`", parts[2])))?;
    Ok((t0, ratio, k))
}
