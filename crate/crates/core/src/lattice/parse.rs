//! Config grammar for [`TorusSpec`].
//!
//! ```text
//! # comments start with '#'
//! name = hesse            # optional label
//! n = 1                   # optional; must agree with the matrices
//! M = 1                   # required; rows separated by ';'
//! B = 0                   # optional, defaults to zero
//! N = 3                   # required, integer entries
//! shift = 3/10            # optional, defaults to zero
//! involution = false      # optional
//! ```
//!
//! Entries within a row are separated by whitespace or commas. Real entries
//! may be integers, `p/q` rationals, or decimals with an optional exponent;
//! all of them are read exactly. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::spec::TorusSpec;
use crate::error::{Error, Result};

const KEYS: [&str; 7] = ["name", "n", "M", "B", "N", "shift", "involution"];

/// Parses `p/q`, integers and decimals (`-1.25`, `3e-2`) exactly.
pub fn parse_rational(token: &str) -> Result<BigRational> {
    let t = token.trim();
    let bad = || Error::Input(format!("not a rational number: '{token}'"));
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Input(format!("zero denominator in '{token}'")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = num_traits::pow::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if negative { -value } else { value })
}

fn parse_rows<T>(value: &str, cell: impl Fn(&str) -> Result<T>) -> Result<Vec<Vec<T>>> {
    value
        .split(';')
        .map(|row| {
            let cells: Vec<&str> = row.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            if cells.is_empty() {
                return Err(Error::Input(format!("empty matrix row in '{value}'")));
            }
            cells.into_iter().map(&cell).collect()
        })
        .collect()
}

fn parse_bool(value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::Input(format!("not a boolean: '{other}'"))),
    }
}

impl FromStr for TorusSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Input(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
            if entries.insert(key, value.trim()).is_some() {
                return Err(Error::Input(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        let n_rows = parse_rows(entries.get("N").ok_or_else(|| Error::Input("missing key 'N'".into()))?, |s| {
            s.parse::<i64>().map_err(|_| Error::Input(format!("N entries must be integers, got '{s}'")))
        })?;
        let dim = n_rows.len();
        if let Some(n) = entries.get("n") {
            let declared: usize = n.parse().map_err(|_| Error::Input(format!("n must be a positive integer, got '{n}'")))?;
            if declared != dim {
                return Err(Error::Input(format!("n = {declared} but N has {dim} rows")));
            }
        }
        let m = parse_rows(entries.get("M").ok_or_else(|| Error::Input("missing key 'M'".into()))?, parse_rational)?;
        let b = match entries.get("B") {
            Some(v) => parse_rows(v, parse_rational)?,
            None => vec![vec![BigRational::zero(); dim]; dim],
        };
        let mut spec = TorusSpec::from_rationals(m, b, n_rows)?;
        if let Some(v) = entries.get("shift") {
            let shift = parse_rows(v, parse_rational)?;
            if shift.len() != 1 {
                return Err(Error::Input("shift is a single row".into()));
            }
            let shift = shift[0].iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
            spec = spec.with_shift(shift)?;
        }
        if let Some(v) = entries.get("involution") {
            spec = spec.with_involution(parse_bool(v)?);
        }
        if let Some(name) = entries.get("name") {
            spec = spec.with_name(*name);
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn rational_tokens() {
        assert_eq!(parse_rational("3/10").unwrap(), q(3, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), q(-5, 4));
        assert_eq!(parse_rational("0.3").unwrap(), q(3, 10));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn parses_kummer_config() {
        let text = "# Kummer\nn = 2\nM = 1 0; 0 1\nB = 1/4 0; 0 1/4\nN = 2 0; 0 2\ninvolution = true\n";
        let spec: TorusSpec = text.parse().unwrap();
        assert_eq!(spec.dim(), 2);
        assert!(spec.involution());
        assert_eq!(spec.b_field()[(0, 0)], 0.25);
        assert!(spec.exact().is_some());
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!("M = 1\nN = 3\ncolor = red\n".parse::<TorusSpec>().is_err());
        assert!("M = 1\n".parse::<TorusSpec>().is_err());
        assert!("M = 1 2\nN = 3\n".parse::<TorusSpec>().is_err());
        assert!("n = 2\nM = 1\nN = 3\n".parse::<TorusSpec>().is_err());
        assert!("M = 1\nN = 1.5\n".parse::<TorusSpec>().is_err());
        assert!("M = 1\nM = 2\nN = 1\n".parse::<TorusSpec>().is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = "name = sk\nM = 1\nB = 1/3\nN = 3\nshift = 3/10\n";
        let spec: TorusSpec = text.parse().unwrap();
        let again: TorusSpec = spec.to_config_string().parse().unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec.fingerprint(), again.fingerprint());
    }
}
