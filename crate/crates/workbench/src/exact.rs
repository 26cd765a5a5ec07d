//! Rationals as text: exact `p/q` strings in files, decimals accepted on the
//! wire and snapped to a bounded denominator.

use artgallery_core::geometry::{rational_from_f64, Point, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

/// Largest denominator a decimal input is snapped to.
pub const SNAP_DENOMINATOR: u64 = 1_000_000_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("{0:?} is not an exact rational (expected p or p/q)")]
    NotExact(String),
    #[error("{0:?} has a zero denominator")]
    ZeroDenominator(String),
    #[error("{0:?} is not a number")]
    NotANumber(String),
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

fn is_int(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// `p` or `p/q` with integer `p`, `q`; anything else (decimals, exponents,
/// spaces) is rejected so that files stay exact.
pub fn parse_exact(s: &str) -> Result<Rational, ParseRationalError> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    if !is_int(n) || !is_int(d) {
        return Err(ParseRationalError::NotExact(s.into()));
    }
    let n: BigInt = n.parse().map_err(|_| ParseRationalError::NotExact(s.into()))?;
    let d: BigInt = d.parse().map_err(|_| ParseRationalError::NotExact(s.into()))?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.into()));
    }
    Ok(Rational::new(n, d))
}

/// Exact text when given, otherwise a decimal snapped to the nearest
/// rational with denominator at most [`SNAP_DENOMINATOR`].
pub fn parse_lenient(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    match parse_exact(s) {
        Ok(r) => Ok(r),
        Err(ParseRationalError::ZeroDenominator(e)) => Err(ParseRationalError::ZeroDenominator(e)),
        Err(_) => {
            let v: f64 = s.parse().map_err(|_| ParseRationalError::NotANumber(s.into()))?;
            snap(v).ok_or_else(|| ParseRationalError::NotANumber(s.into()))
        }
    }
}

pub fn snap(v: f64) -> Option<Rational> {
    rational_from_f64(v, SNAP_DENOMINATOR)
}

pub fn format_point(p: &Point) -> [String; 2] {
    [format_rational(p.x()), format_rational(p.y())]
}

pub fn parse_point(xy: &[String; 2]) -> Result<Point, ParseRationalError> {
    Ok(Point::new(parse_exact(&xy[0])?, parse_exact(&xy[1])?))
}

/// `x,y` with each coordinate exact or decimal.
pub fn parse_point_text(s: &str) -> Result<Point, ParseRationalError> {
    let (x, y) = s.split_once(',').ok_or_else(|| ParseRationalError::NotANumber(s.into()))?;
    Ok(Point::new(parse_lenient(x)?, parse_lenient(y)?))
}

/// Decimal approximation with 12 significant digits.
pub fn approx(r: &Rational) -> f64 {
    let v = num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN);
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}
