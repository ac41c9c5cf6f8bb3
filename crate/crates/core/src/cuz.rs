//! The Cuntz semigroup of the Jiang-Su algebra, `N0 ⊔ (0, ∞]`.
//!
//! Compact elements are the naturals, soft elements the positive
//! extended reals (restricted here to rationals and ∞).

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{fmt_q, parse_q, q, Q};

/// A positive extended rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    Fin(Q),
    Inf,
}

impl Ext {
    pub fn add(&self, o: &Ext) -> Ext {
        match (self, o) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }

    pub fn scale(&self, n: u64) -> Ext {
        match self {
            Ext::Fin(a) => Ext::Fin(a * q(n as i128)),
            Ext::Inf => Ext::Inf,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CuZ {
    Compact(u64),
    /// Invariant: the value is strictly positive.
    Soft(Ext),
}

impl CuZ {
    pub const ZERO: CuZ = CuZ::Compact(0);

    pub fn soft(r: Q) -> CuZ {
        assert!(r.is_positive(), "soft values are positive");
        CuZ::Soft(Ext::Fin(r))
    }

    pub fn soft_int(n: i128) -> CuZ {
        CuZ::soft(q(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CuZ::Compact(0))
    }

    pub fn is_soft(&self) -> bool {
        matches!(self, CuZ::Soft(_))
    }

    pub fn value(&self) -> Ext {
        match self {
            CuZ::Compact(n) => Ext::Fin(q(*n as i128)),
            CuZ::Soft(v) => v.clone(),
        }
    }

    pub fn add(&self, o: &CuZ) -> CuZ {
        match (self, o) {
            (CuZ::Compact(a), CuZ::Compact(b)) => CuZ::Compact(a + b),
            _ => CuZ::Soft(self.value().add(&o.value())),
        }
    }

    pub fn scale(&self, n: u64) -> CuZ {
        if n == 0 {
            return CuZ::ZERO;
        }
        match self {
            CuZ::Compact(a) => CuZ::Compact(a * n),
            CuZ::Soft(v) => CuZ::Soft(v.scale(n)),
        }
    }

    /// Compact-below-soft is strict; every other case compares values.
    pub fn leq(&self, o: &CuZ) -> bool {
        let c = self.value().cmp(&o.value());
        match (self, o) {
            (CuZ::Compact(_), CuZ::Soft(_)) => c == Ordering::Less,
            _ => c != Ordering::Greater,
        }
    }

    /// `self ≪ o`.
    pub fn way_below(&self, o: &CuZ) -> bool {
        match o {
            CuZ::Compact(_) => self.leq(o),
            CuZ::Soft(s) => self.value() < *s,
        }
    }

    /// The unique `z` with `self + z = o`, if any.
    pub fn difference(&self, o: &CuZ) -> Option<CuZ> {
        match (self, o) {
            (CuZ::Compact(a), CuZ::Compact(b)) => b.checked_sub(*a).map(CuZ::Compact),
            (CuZ::Soft(_), CuZ::Compact(_)) => None,
            (_, CuZ::Soft(Ext::Inf)) => Some(CuZ::Soft(Ext::Inf)),
            (_, CuZ::Soft(Ext::Fin(b))) => match self.value() {
                Ext::Fin(a) if a < *b => Some(CuZ::soft(b - a)),
                Ext::Fin(a) if a == *b && self.is_soft() => Some(CuZ::ZERO),
                _ => None,
            },
        }
    }

    /// Parses `compact:n`, `soft:p/q` or `soft:inf`.
    pub fn parse(s: &str) -> Result<CuZ, String> {
        if let Some(rest) = s.strip_prefix("compact:") {
            let n: u64 = rest.trim().parse().map_err(|_| format!("bad compact value `{rest}`"))?;
            return Ok(CuZ::Compact(n));
        }
        if let Some(rest) = s.strip_prefix("soft:") {
            if rest.trim() == "inf" {
                return Ok(CuZ::Soft(Ext::Inf));
            }
            let r = parse_q(rest)?;
            if !r.is_positive() {
                return Err(format!("soft value must be positive, got `{rest}`"));
            }
            return Ok(CuZ::soft(r));
        }
        Err(format!("expected `compact:n`, `soft:p/q` or `soft:inf`, got `{s}`"))
    }

    pub fn to_literal(&self) -> String {
        match self {
            CuZ::Compact(n) => format!("compact:{n}"),
            CuZ::Soft(Ext::Inf) => "soft:inf".into(),
            CuZ::Soft(Ext::Fin(r)) => format!("soft:{}", fmt_q(r)),
        }
    }

    pub fn soft_value(&self) -> Option<&Q> {
        match self {
            CuZ::Soft(Ext::Fin(r)) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for CuZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CuZ::Compact(n) => write!(f, "{n}"),
            CuZ::Soft(Ext::Inf) => write!(f, "inf'"),
            CuZ::Soft(Ext::Fin(r)) => write!(f, "{}'", fmt_q(r)),
        }
    }
}

pub fn is_positive_q(r: &Q) -> bool {
    !r.is_zero() && r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_sum_is_soft() {
        assert_eq!(CuZ::Compact(1).add(&CuZ::soft_int(1)), CuZ::soft_int(2));
        assert_eq!(CuZ::Compact(1).add(&CuZ::Compact(2)), CuZ::Compact(3));
    }

    #[test]
    fn order_cases() {
        assert!(CuZ::soft_int(1).leq(&CuZ::Compact(1)));
        assert!(!CuZ::Compact(2).leq(&CuZ::soft_int(2)));
        assert!(CuZ::Compact(1).leq(&CuZ::soft_int(2)));
        assert!(!CuZ::Compact(1).leq(&CuZ::soft_int(1)));
    }

    #[test]
    fn way_below_cases() {
        assert!(CuZ::Compact(1).way_below(&CuZ::Compact(1)));
        assert!(!CuZ::soft_int(1).way_below(&CuZ::soft_int(1)));
        assert!(CuZ::Compact(1).way_below(&CuZ::soft(Q::new(3, 2))));
        assert!(!CuZ::Compact(1).way_below(&CuZ::soft_int(1)));
    }

    #[test]
    fn literal_round_trip() {
        for s in ["compact:0", "compact:7", "soft:1/2", "soft:inf", "soft:3"] {
            assert_eq!(CuZ::parse(s).unwrap().to_literal(), s);
        }
        assert!(CuZ::parse("soft:0").is_err());
    }
}
