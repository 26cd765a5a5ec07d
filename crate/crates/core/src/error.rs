use alloc::string::String;
use core::fmt;

use crate::geometry::{Point, ValidationReport};

/// Failures reported by the library. Every fallible operation returns this.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A point required to lie in the closed polygon lies outside it.
    ExteriorPoint(Point),
    /// Guard `index` of a placement lies outside the polygon.
    GuardOutside { index: usize, point: Point },
    /// Segment endpoints coincide.
    DegenerateSegment(Point),
    InvalidPolygon(alloc::boxed::Box<ValidationReport>),
    /// A point set passed to a metric is empty.
    EmptySet,
    /// A generator or operation parameter is out of range.
    InvalidParameter(String),
    /// A cube point does not belong to the face union.
    NotInUnion(String),
    /// The face union handed to the compiler is empty.
    EmptyFaceUnion,
    /// A construction self-check failed even after shrinking.
    Certificate(String),
    /// A pocket or segment extension runs into existing geometry.
    Blocked(String),
    /// Enumeration exceeded its configured budget.
    BudgetExceeded { limit: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ExteriorPoint(p) => write!(f, "point {p} lies outside the polygon"),
            Error::GuardOutside { index, point } => {
                write!(f, "guard {index} at {point} lies outside the polygon")
            }
            Error::DegenerateSegment(p) => write!(f, "degenerate segment: both endpoints at {p}"),
            Error::InvalidPolygon(r) => write!(f, "invalid polygon: {r}"),
            Error::EmptySet => write!(f, "empty point set"),
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::NotInUnion(m) => write!(f, "point {m} is not in the face union"),
            Error::EmptyFaceUnion => write!(f, "face union is empty"),
            Error::Certificate(m) => write!(f, "construction self-check failed: {m}"),
            Error::Blocked(m) => write!(f, "blocked: {m}"),
            Error::BudgetExceeded { limit } => write!(f, "enumeration budget of {limit} exceeded"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
