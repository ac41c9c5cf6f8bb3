//! Three-valued answers with replayable evidence.

use std::borrow::Cow;
use std::fmt;

use crate::elem::Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn is_no(self) -> bool {
        self == Tri::No
    }

    pub fn is_decided(self) -> bool {
        self != Tri::Unknown
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Unknown => Tri::Unknown,
        }
    }

    /// Kleene conjunction.
    pub fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::No, Tri::No) => Tri::No,
            _ => Tri::Unknown,
        }
    }

    pub fn implies(self, o: Tri) -> Tri {
        self.not().or(o)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "Yes",
            Tri::No => "No",
            Tri::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which budget component ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    CoeffBound,
    NMax,
    ChainDepth,
    SampleBox,
}

impl Bound {
    pub fn as_str(self) -> &'static str {
        match self {
            Bound::CoeffBound => "coeff_bound",
            Bound::NMax => "n_max",
            Bound::ChainDepth => "chain_depth",
            Bound::SampleBox => "sample_box",
        }
    }
}

/// An atomic claim about the instance a verdict was computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact {
    Leq(Elem, Elem),
    NotLeq(Elem, Elem),
    Eq(Elem, Elem),
    Ne(Elem, Elem),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub summary: Cow<'static, str>,
    pub witness: Vec<(Cow<'static, str>, Elem)>,
    pub n: Option<u64>,
    pub facts: Vec<Fact>,
    /// Nonnegative generator multiplicities for vector membership.
    pub combination: Option<Vec<u64>>,
    pub bound: Option<Bound>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BudgetUsed {
    pub steps: u64,
    pub n_reached: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: Tri,
    pub certificate: Certificate,
    pub budget_used: BudgetUsed,
}

impl Verdict {
    fn with_value(value: Tri, summary: impl Into<Cow<'static, str>>) -> Self {
        Verdict {
            value,
            certificate: Certificate { summary: summary.into(), ..Default::default() },
            budget_used: BudgetUsed::default(),
        }
    }

    pub fn yes(summary: impl Into<Cow<'static, str>>) -> Self {
        Self::with_value(Tri::Yes, summary)
    }

    pub fn no(summary: impl Into<Cow<'static, str>>) -> Self {
        Self::with_value(Tri::No, summary)
    }

    pub fn unknown(bound: Bound, summary: impl Into<Cow<'static, str>>) -> Self {
        let mut v = Self::with_value(Tri::Unknown, summary);
        v.certificate.bound = Some(bound);
        v
    }

    pub fn from_tri(t: Tri, summary: impl Into<Cow<'static, str>>, bound: Bound) -> Self {
        match t {
            Tri::Unknown => Self::unknown(bound, summary),
            _ => Self::with_value(t, summary),
        }
    }

    pub fn witness(mut self, name: impl Into<Cow<'static, str>>, e: Elem) -> Self {
        self.certificate.witness.push((name.into(), e));
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.certificate.n = Some(n);
        self.budget_used.n_reached = self.budget_used.n_reached.max(n);
        self
    }

    pub fn fact(mut self, f: Fact) -> Self {
        self.certificate.facts.push(f);
        self
    }

    pub fn facts(mut self, fs: impl IntoIterator<Item = Fact>) -> Self {
        self.certificate.facts.extend(fs);
        self
    }

    pub fn combination(mut self, c: Vec<u64>) -> Self {
        self.certificate.combination = Some(c);
        self
    }

    pub fn steps(mut self, s: u64) -> Self {
        self.budget_used.steps += s;
        self
    }

    pub fn reached(mut self, n: u64) -> Self {
        self.budget_used.n_reached = self.budget_used.n_reached.max(n);
        self
    }

    pub fn is_yes(&self) -> bool {
        self.value == Tri::Yes
    }

    pub fn is_no(&self) -> bool {
        self.value == Tri::No
    }

    pub fn get(&self, name: &str) -> Option<&Elem> {
        self.certificate.witness.iter().find(|(k, _)| k == name).map(|(_, e)| e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kleene_tables() {
        use Tri::*;
        assert_eq!(Yes.and(Unknown), Unknown);
        assert_eq!(No.and(Unknown), No);
        assert_eq!(Yes.or(Unknown), Yes);
        assert_eq!(No.or(Unknown), Unknown);
        assert_eq!(No.implies(Unknown), Yes);
        assert_eq!(Yes.implies(No), No);
        assert_eq!(Unknown.implies(Yes), Yes);
    }
}
