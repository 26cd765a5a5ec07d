use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational used for every geometric coordinate.
pub type Rational = num_rational::BigRational;

/// `n / d` as a [`Rational`]. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with denominator at most `max_den` (continued fractions).
///
/// Used where floating input (rendering, decimal wire input) has to be snapped
/// back into exact arithmetic.
pub fn rational_from_f64(value: f64, max_den: u64) -> Option<Rational> {
    if !value.is_finite() {
        return None;
    }
    let neg = value < 0.0;
    let v = libm::fabs(value);
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let mut x = v;
    let max_den = max_den as u128;
    for _ in 0..64 {
        let a = libm::floor(x);
        if a > 1e30 {
            break;
        }
        let a_int = a as u128;
        let p2 = a_int.checked_mul(p1).and_then(|t| t.checked_add(p0));
        let q2 = a_int.checked_mul(q1).and_then(|t| t.checked_add(q0));
        let (Some(p2), Some(q2)) = (p2, q2) else { break };
        if q2 > max_den {
            // best semiconvergent within the bound
            let k = (max_den - q0) / q1.max(1);
            let ps = p0 + k * p1;
            let qs = q0 + k * q1;
            if qs > 0 && q1 > 0 {
                let e1 = libm::fabs(p1 as f64 / q1 as f64 - v);
                let es = libm::fabs(ps as f64 / qs as f64 - v);
                if es < e1 {
                    p1 = ps;
                    q1 = qs;
                }
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - a;
        if frac < 1e-18 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let mut r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        r = -r;
    }
    Some(r)
}

/// An exact point (or vector) of the plane.
///
/// Coordinates are canonical reduced fractions; a double approximation is
/// cached alongside for the floating-point filters in the predicates.
#[derive(Clone)]
pub struct Point {
    x: Rational,
    y: Rational,
    pub(crate) fx: f64,
    pub(crate) fy: f64,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        let fx = to_f64(&x);
        let fy = to_f64(&y);
        Point { x, y, fx, fy }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    /// `(xn/xd, yn/yd)`.
    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(rat(xn, xd), rat(yn, yd))
    }

    pub fn origin() -> Self {
        Point::new(Rational::zero(), Rational::zero())
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    /// Counter-clockwise quarter turn of the vector.
    pub fn perp(&self) -> Point {
        Point::new(-self.y.clone(), self.x.clone())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Point) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point::new(
            &self.x + (&other.x - &self.x) * t,
            &self.y + (&other.y - &self.y) * t,
        )
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.lerp(other, &rat(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn distance_f64(&self, other: &Point) -> f64 {
        libm::hypot(self.fx - other.fx, self.fy - other.fy)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic `(x, y)`.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of a rational as -1, 0 or 1.
pub(crate) fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[allow(dead_code)]
pub(crate) fn half() -> Rational {
    Rational::one() / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = Point::from_ratios(2, 4, -3, -6);
        let b = Point::from_ratios(1, 2, 1, 2);
        assert_eq!(a, b);
        assert_eq!(a.x().denom(), &BigInt::from(2));
    }

    #[test]
    fn snapping_decimals() {
        assert_eq!(rational_from_f64(0.5, 1000).unwrap(), rat(1, 2));
        assert_eq!(rational_from_f64(-0.125, 1000).unwrap(), rat(-1, 8));
        let third = rational_from_f64(1.0 / 3.0, 1_000_000_000_000).unwrap();
        assert_eq!(third, rat(1, 3));
        assert_eq!(rational_from_f64(3.0, 10).unwrap(), int(3));
        assert!(rational_from_f64(f64::NAN, 10).is_none());
    }
}
