//! Input grammar and configuration handling for the command line front
//! end, kept in library form so the fuzz targets can drive the parsers
//! directly.

use num_bigint::BigInt;
use num_traits::Zero;

pub type Rational = num_rational::BigRational;

/// A numeric argument: an exact fraction `p/q` (or integer) or a float.
#[derive(Clone, Debug, PartialEq)]
pub enum NumberArg {
    Exact(Rational),
    Real(f64),
}

/// Parse `x` or `p/q`. Integers and fractions stay exact; anything with a
/// decimal point or exponent becomes a float. Whitespace is not trimmed —
/// the shell already did that.
pub fn parse_number_or_fraction(s: &str) -> Result<NumberArg, String> {
    if s.is_empty() || s.len() > 128 {
        return Err("empty or oversized numeric argument".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num
            .parse()
            .map_err(|_| format!("bad numerator {num:?}"))?;
        let q: BigInt = den
            .parse()
            .map_err(|_| format!("bad denominator {den:?}"))?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(NumberArg::Exact(Rational::new(p, q)));
    }
    if !s.contains(['.', 'e', 'E']) {
        if let Ok(p) = s.parse::<BigInt>() {
            return Ok(NumberArg::Exact(Rational::from(p)));
        }
    }
    let v: f64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
    if !v.is_finite() {
        return Err("non-finite number".into());
    }
    Ok(NumberArg::Real(v))
}

/// Parse a scan range `start:stop:step` with positive step and start < stop.
pub fn parse_range(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("range must be start:stop:step".into());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| format!("bad range part {p:?}")))
        .collect::<Result<_, _>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !a.is_finite() || !b.is_finite() || !step.is_finite() {
        return Err("non-finite range".into());
    }
    if !(a < b) || step <= 0.0 || (b - a) / step > 5e6 {
        return Err("range must satisfy start < stop, step > 0, and a sane point count".into());
    }
    Ok((a, b, step))
}

/// Key=value configuration file: one pair per line, `#` comments, blank
/// lines ignored. Unknown keys are rejected so typos fail loudly.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub digits: Option<u32>,
    pub depth: Option<u8>,
    pub dim: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<FileConfig, String> {
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value", lineno + 1));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "digits" => {
                cfg.digits = Some(
                    value
                        .parse()
                        .map_err(|_| format!("line {}: bad digits", lineno + 1))?,
                )
            }
            "depth" => {
                cfg.depth = Some(
                    value
                        .parse()
                        .map_err(|_| format!("line {}: bad depth", lineno + 1))?,
                )
            }
            "dim" => {
                cfg.dim = Some(
                    value
                        .parse()
                        .map_err(|_| format!("line {}: bad dim", lineno + 1))?,
                )
            }
            other => return Err(format!("line {}: unknown key {other:?}", lineno + 1)),
        }
    }
    Ok(cfg)
}

/// 17 significant digits, the fixed CSV float format.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_fractions() {
        assert_eq!(
            parse_number_or_fraction("2/5").unwrap(),
            NumberArg::Exact(Rational::new(BigInt::from(2), BigInt::from(5)))
        );
        assert_eq!(
            parse_number_or_fraction("3").unwrap(),
            NumberArg::Exact(Rational::from(BigInt::from(3)))
        );
        assert_eq!(parse_number_or_fraction("1.0").unwrap(), NumberArg::Real(1.0));
        assert!(parse_number_or_fraction("-x").is_err());
        assert!(parse_number_or_fraction("1/0").is_err());
        assert!(parse_number_or_fraction("nan").is_err());
        assert!(parse_number_or_fraction("").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1.5:90:0.05").unwrap(), (1.5, 90.0, 0.05));
        assert!(parse_range("5:1:0.1").is_err());
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("1:2:-1").is_err());
    }

    #[test]
    fn config_files() {
        let cfg = parse_config("# comment\n digits = 120 \ndepth=20\n\ndim = 64\n").unwrap();
        assert_eq!(
            cfg,
            FileConfig {
                digits: Some(120),
                depth: Some(20),
                dim: Some(64)
            }
        );
        assert!(parse_config("unknown = 1").is_err());
        assert!(parse_config("digits").is_err());
    }

    #[test]
    fn float_format_is_17_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(1.0 / 3.0), "3.3333333333333331e-1");
    }
}
