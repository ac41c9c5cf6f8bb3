use std::fmt;

use crate::arith::{fmt_q, Q};
use crate::cuz::CuZ;

/// Backend-specific payload. The instance decides which variants are
/// valid; see `Instance::validate`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Idx(usize),
    Vec(Vec<i64>),
    Cu(CuZ),
    Rat(Q),
    Pair(Box<Elem>, Box<Elem>),
}

impl Elem {
    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_vec(&self) -> Option<&[i64]> {
        match self {
            Elem::Vec(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Idx(i) => write!(f, "#{i}"),
            Elem::Vec(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Elem::Cu(c) => write!(f, "{c}"),
            Elem::Rat(r) => write!(f, "{}", fmt_q(r)),
            Elem::Pair(a, b) => write!(f, "<{a};{b}>"),
        }
    }
}
