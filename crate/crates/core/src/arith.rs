//! Exact rationals and the quadratic field Q(sqrt 2).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Rational numbers. Magnitudes stay far below the i128 range at the
/// budgets this crate searches.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: i128 = num.parse().map_err(|_| format!("bad rational numerator `{num}`"))?;
    let d: i128 = den.parse().map_err(|_| format!("bad rational denominator `{den}`"))?;
    if d == 0 {
        return Err("zero denominator".into());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Smallest integer `>= x`.
pub fn ceil_q(x: &Q) -> i128 {
    x.ceil().to_integer()
}

/// Largest integer `<= x`.
pub fn floor_q(x: &Q) -> i128 {
    x.floor().to_integer()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// The number `a + b*sqrt(2)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticValue {
    pub a: Q,
    pub b: Q,
}

impl QuadraticValue {
    pub fn new(a: Q, b: Q) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Q) -> Self {
        Self { a, b: Q::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign in the real embedding. `a + b*sqrt(2) = 0` forces
    /// `a = b = 0` because sqrt(2) is irrational.
    pub fn signum(&self) -> i8 {
        let sa = sign_q(&self.a);
        let sb = sign_q(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with 2 b^2.
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * q(2);
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("a^2 = 2 b^2 has no nonzero rational solution"),
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        Self { a: self.a * q(k), b: self.b * q(k) }
    }
}

fn sign_q(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &QuadraticValue {
    type Output = QuadraticValue;
    fn add(self, o: &QuadraticValue) -> QuadraticValue {
        QuadraticValue { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for &QuadraticValue {
    type Output = QuadraticValue;
    fn sub(self, o: &QuadraticValue) -> QuadraticValue {
        QuadraticValue { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for &QuadraticValue {
    type Output = QuadraticValue;
    fn neg(self) -> QuadraticValue {
        QuadraticValue { a: -self.a, b: -self.b }
    }
}

impl Mul for &QuadraticValue {
    type Output = QuadraticValue;
    fn mul(self, o: &QuadraticValue) -> QuadraticValue {
        QuadraticValue {
            a: self.a * o.a + q(2) * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_q(&self.a))
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt2", fmt_q(&self.b))
        } else {
            write!(f, "{}+{}*sqrt2", fmt_q(&self.a), fmt_q(&self.b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(a: i128, b: i128) -> QuadraticValue {
        QuadraticValue::new(q(a), q(b))
    }

    #[test]
    fn sign_of_two_minus_root_two_is_positive() {
        assert_eq!(qv(2, -1).signum(), 1);
        assert_eq!(qv(1, -1).signum(), -1);
        assert_eq!(qv(-3, 2).signum(), -1);
        assert_eq!(qv(-2, 2).signum(), 1);
        assert_eq!(qv(0, 0).signum(), 0);
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(fmt_q(&parse_q("-4/2").unwrap()), "-2");
        assert!(parse_q("1/0").is_err());
    }
}
