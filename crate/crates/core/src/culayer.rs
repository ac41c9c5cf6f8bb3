//! Algebraic Cu-semigroups `S = γ(S_c)` given by their compact layer.
//!
//! An element of `S` is the supremum of an increasing sequence of
//! compacts, described by a finite prefix and a tail rule. For compacts
//! `c` and an increasing compact sequence `(v_j)`, `c <= sup v_j` holds
//! iff `c <= v_j` for some `j`; every comparison reduces to that test.

use crate::budget::SearchBudget;
use crate::elem::Elem;
use crate::error::{CoreError, CoreResult};
use crate::instance::Instance;
use crate::relations::{check_property, rel_p, rel_s, PropertyId, Status};
use crate::tensorz::{m_tensor_one, tensor_one_report, unit_leq};
use crate::verdict::{Bound, Tri, Verdict};

#[derive(Clone, Debug)]
pub struct AlgebraicCu {
    pub compacts: Instance,
}

impl AlgebraicCu {
    pub fn new(compacts: Instance) -> AlgebraicCu {
        AlgebraicCu { compacts }
    }

    pub fn name(&self) -> String {
        format!("γ({})", self.compacts.name)
    }

    pub fn constant(&self, x: Elem) -> CuElem {
        CuElem { prefix: vec![x], tail: Tail::Constant }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The last prefix term repeats.
    Constant,
    /// Term `k` past the prefix is `last + (k+1)·d`.
    RepeatLastPlusDelta(Elem),
    /// Unspecified later terms; when `below` is set every one of them is
    /// `<= below` and different from it.
    FormalSupLabel { label: String, below: Option<Elem> },
}

/// Supremum of `prefix` continued by `tail`; the prefix is nonempty and
/// increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuElem {
    pub prefix: Vec<Elem>,
    pub tail: Tail,
}

impl CuElem {
    pub fn validate(&self, s: &AlgebraicCu, b: &SearchBudget) -> CoreResult<()> {
        let m = &s.compacts;
        if self.prefix.is_empty() {
            return Err(CoreError::Invalid("a Cu element needs at least one prefix term".into()));
        }
        for x in &self.prefix {
            m.validate(x)?;
        }
        for w in self.prefix.windows(2) {
            if m.leq_tri(&w[0], &w[1], b).is_no() {
                return Err(CoreError::Invalid(format!("prefix is not increasing at {} then {}", w[0], w[1])));
            }
        }
        match &self.tail {
            Tail::RepeatLastPlusDelta(d) => m.validate(d),
            Tail::FormalSupLabel { below: Some(c), .. } => {
                m.validate(c)?;
                if m.leq_tri(self.last(), c, b).is_no() {
                    return Err(CoreError::Invalid("the tail bound lies below the prefix".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn last(&self) -> &Elem {
        self.prefix.last().expect("nonempty prefix")
    }

    /// Term `k`, when the description determines it.
    pub fn term(&self, m: &Instance, k: usize) -> Option<Elem> {
        if k < self.prefix.len() {
            return Some(self.prefix[k].clone());
        }
        let past = (k + 1 - self.prefix.len()) as u64;
        match &self.tail {
            Tail::Constant => Some(self.last().clone()),
            Tail::RepeatLastPlusDelta(d) => Some(m.plus(self.last(), &m.mul(past, d))),
            Tail::FormalSupLabel { .. } => None,
        }
    }

    /// Whether the sequence is eventually constant.
    fn stops(&self, m: &Instance) -> bool {
        match &self.tail {
            Tail::Constant => true,
            Tail::RepeatLastPlusDelta(d) => m.is_zero(d).is_yes(),
            Tail::FormalSupLabel { .. } => false,
        }
    }

    pub fn fmt_with(&self, m: &Instance) -> String {
        let p: Vec<String> = self.prefix.iter().map(|x| m.fmt_elem(x)).collect();
        let t = match &self.tail {
            Tail::Constant => "constant".to_string(),
            Tail::RepeatLastPlusDelta(d) => format!("+{} each step", m.fmt_elem(d)),
            Tail::FormalSupLabel { label, below: Some(c) } => format!("sup {label} below {}", m.fmt_elem(c)),
            Tail::FormalSupLabel { label, below: None } => format!("sup {label}"),
        };
        format!("sup({}; {t})", p.join(", "))
    }
}

/// `c <= sup v` for a compact `c`, with `rel` the compact comparison.
/// `plain` says `rel` is the order itself, which licenses refuting a
/// capped tail by antisymmetry.
fn below_sup(m: &Instance, c: &Elem, v: &CuElem, depth: usize, rel: &dyn Fn(&Elem, &Elem) -> Tri, plain: bool) -> Tri {
    let mut undecided = false;
    let known = if v.stops(m) { v.prefix.len() } else { v.prefix.len() + depth };
    for k in 0..known {
        let Some(t) = v.term(m, k) else { break };
        match rel(c, &t) {
            Tri::Yes => return Tri::Yes,
            Tri::Unknown => undecided = true,
            Tri::No => {}
        }
    }
    if undecided {
        return Tri::Unknown;
    }
    match &v.tail {
        _ if v.stops(m) => Tri::No,
        // Tail terms sit strictly below `bound`; `bound <= c` refutes them.
        Tail::FormalSupLabel { below: Some(bound), .. } if plain && m.leq_tri(bound, c, &m.budget).is_yes() => Tri::No,
        _ => Tri::Unknown,
    }
}

/// `sup u <= sup v` with compacts compared by `rel`.
fn sup_leq(m: &Instance, u: &CuElem, v: &CuElem, depth: usize, rel: &dyn Fn(&Elem, &Elem) -> Tri, plain: bool) -> Verdict {
    let mut acc = Tri::Yes;
    for (k, c) in u.prefix.iter().enumerate() {
        match below_sup(m, c, v, depth, rel, plain) {
            Tri::No => {
                return Verdict::no(format!("term {k} of u is below no term of v")).witness("u_k", c.clone()).with_n(k as u64)
            }
            t => acc = acc.and(t),
        }
    }
    if u.stops(m) {
        return Verdict::from_tri(acc, "every term of u is below a term of v", Bound::ChainDepth);
    }
    match &u.tail {
        Tail::FormalSupLabel { below: Some(bound), .. } => {
            // Every tail term is below `bound`.
            let t = below_sup(m, bound, v, depth, rel, plain);
            if t.is_yes() {
                return Verdict::from_tri(acc, "u's tail is capped by an element below v", Bound::ChainDepth);
            }
            Verdict::unknown(Bound::ChainDepth, "u's tail is not controlled within depth")
        }
        Tail::RepeatLastPlusDelta(d) => {
            for k in u.prefix.len()..u.prefix.len() + depth {
                let c = u.term(m, k).expect("determined");
                match below_sup(m, &c, v, depth, rel, plain) {
                    Tri::No => {
                        return Verdict::no(format!("term {k} of u is below no term of v"))
                            .witness("u_k", c)
                            .with_n(k as u64)
                    }
                    t => acc = acc.and(t),
                }
            }
            // Equal or larger steps in v keep every later term of u below.
            if let Tail::RepeatLastPlusDelta(e) = &v.tail {
                let last = u.term(m, u.prefix.len()).expect("determined");
                let vl = v.term(m, v.prefix.len()).expect("determined");
                if rel(&last, &vl).is_yes() && m.leq_tri(d, e, &m.budget).is_yes() {
                    return Verdict::from_tri(acc, "tails advance by comparable steps", Bound::ChainDepth);
                }
            }
            Verdict::unknown(Bound::ChainDepth, format!("u grows past depth {depth}"))
        }
        _ => Verdict::unknown(Bound::ChainDepth, "u's tail is unspecified"),
    }
}

pub fn cu_leq(s: &AlgebraicCu, u: &CuElem, v: &CuElem, depth: u32) -> Verdict {
    let m = &s.compacts;
    let b = m.budget;
    sup_leq(m, u, v, depth as usize, &|a, c| m.leq_tri(a, c, &b), true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    O5,
    O6,
    WeakCancellation,
    AlmostDivisible,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::O5, Axiom::O6, Axiom::WeakCancellation, Axiom::AlmostDivisible];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::O5 => "O5",
            Axiom::O6 => "O6",
            Axiom::WeakCancellation => "WeakCancellation",
            Axiom::AlmostDivisible => "AlmostDivisible",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        let k: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Axiom::ALL.into_iter().find(|a| a.name().to_ascii_lowercase() == k)
    }

    /// The compact-layer property the axiom reduces to.
    pub fn compact_property(self) -> PropertyId {
        match self {
            Axiom::O5 => PropertyId::AlgebraicallyOrdered,
            Axiom::O6 => PropertyId::Refinement,
            Axiom::WeakCancellation => PropertyId::Cancellative,
            Axiom::AlmostDivisible => PropertyId::AlmostDivisible,
        }
    }
}

pub fn satisfies_axiom(s: &AlgebraicCu, which: Axiom, b: &SearchBudget) -> Verdict {
    let p = which.compact_property();
    let v = check_property(&s.compacts, p, b);
    if which == Axiom::O6 {
        // Refinement of S_c is sufficient for O6, not necessary.
        return match v.value {
            Tri::Yes => Verdict::yes(format!("S_c has {}; sufficient for O6", p.name())),
            _ => Verdict::unknown(
                Bound::SampleBox,
                format!("S_c {} is {}; only the sufficient direction is available", p.name(), v.value),
            ),
        };
    }
    let mut out = v.clone();
    out.certificate.summary = format!("S_c {}: {}", p.name(), v.certificate.summary).into();
    out
}

/// Hypotheses of the unit-order characterization, in the order checked.
pub const UNIT_HYPOTHESES: [Axiom; 4] = [Axiom::O5, Axiom::WeakCancellation, Axiom::O6, Axiom::AlmostDivisible];

/// `u⊗1 <= v⊗1` in `S ⊗_Cu Z`: every compact below `u` is `<=_p v`.
pub fn cu_unit_leq(s: &AlgebraicCu, u: &CuElem, v: &CuElem, b: &SearchBudget) -> CoreResult<Verdict> {
    for a in UNIT_HYPOTHESES {
        let h = satisfies_axiom(s, a, b);
        if !h.is_yes() {
            return Err(CoreError::HypothesisFailure(format!("{} is {} on {}", a.name(), h.value, s.name())));
        }
    }
    let m = &s.compacts;
    let mut out = sup_leq(m, u, v, b.chain_depth as usize, &|x, y| rel_p(m, x, y, b).value, false);
    out.certificate.summary = format!("compacts of u against v by <=_p: {}", out.certificate.summary).into();
    Ok(out)
}

/// The compact layer of `S ⊗_Cu Z`, which is `S_c ⊗ 1`.
pub fn tensor_compacts(s: &AlgebraicCu, b: &SearchBudget) -> CoreResult<Instance> {
    if check_property(&s.compacts, PropertyId::AlmostDivisible, b).is_no() {
        return Err(CoreError::HypothesisFailure(format!("AlmostDivisible is No on {}", s.compacts.name)));
    }
    Ok(m_tensor_one(&s.compacts))
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    /// Labelled statuses of the four conditions, strongest first.
    pub statuses: Vec<(&'static str, Tri)>,
    pub status: Status,
    pub notes: Vec<String>,
}

pub const CHAIN_LABELS: [&str; 4] = [
    "tensor compacts algebraically ordered",
    "S_c almost unperforated",
    "S almost unperforated",
    "S isomorphic to S ⊗ Z",
];

/// Evaluates the four conditions and checks `(i) ⟹ (ii) ⟹ (iii) ⟹ (iv)`.
pub fn thm65_chain(s: &AlgebraicCu, b: &SearchBudget) -> ChainReport {
    let m = &s.compacts;
    for p in [PropertyId::Separative, PropertyId::AlmostDivisible] {
        if check_property(m, p, b).is_no() {
            return ChainReport { statuses: Vec::new(), status: Status::Vacuous(p.name().into()), notes: Vec::new() };
        }
    }
    let mut notes = Vec::new();
    let t = m_tensor_one(m);
    let i = check_property(&t, PropertyId::AlgebraicallyOrdered, b).value;
    let ii = check_property(m, PropertyId::AlmostUnperforated, b).value;

    // Cu level: constant and two-step sequences from the sample.
    let sample = m.sample(&b.with_box(b.sample_box.min(4))).elems;
    let mut elems: Vec<CuElem> = sample.iter().map(|x| s.constant(x.clone())).collect();
    for x in sample.iter().take(6) {
        for y in sample.iter().take(6) {
            let xy = m.plus(x, y);
            if x != &xy {
                elems.push(CuElem { prefix: vec![x.clone(), xy], tail: Tail::Constant });
            }
        }
    }
    let mut violation = false;
    'outer: for u in &elems {
        for v in &elems {
            let (uu, vv) = (u.prefix.last().unwrap(), v.prefix.last().unwrap());
            if rel_s(m, uu, vv, b).is_yes() && cu_leq(s, u, v, b.chain_depth).is_no() {
                notes.push(format!("{} <_s {} but not below", u.fmt_with(m), v.fmt_with(m)));
                violation = true;
                break 'outer;
            }
        }
    }
    // An algebraic S is almost unperforated exactly when S_c is.
    let iii = if violation { Tri::No } else { ii };
    notes.push(format!("{} Cu elements sampled for the Cu-level check", elems.len()));

    let r = tensor_one_report(m, b);
    let iv = match r.embedding {
        Tri::No => Tri::No,
        Tri::Yes => Tri::Yes,
        Tri::Unknown => {
            let nu = check_property(m, PropertyId::NearlyUnperforated, b).value;
            let sep = check_property(m, PropertyId::Separative, b).value;
            if nu.is_yes() && sep.is_yes() {
                notes.push("x ↦ x⊗1 is an isomorphism: S_c is nearly unperforated and separative".into());
                Tri::Yes
            } else {
                Tri::Unknown
            }
        }
    };
    let vals = [i, ii, iii, iv];
    let broken = vals.windows(2).any(|w| w[0].is_yes() && w[1].is_no());
    let status = if broken {
        Status::Fail
    } else if vals.iter().all(|v| v.is_decided()) {
        Status::Pass
    } else {
        Status::Undecided
    };
    ChainReport { statuses: CHAIN_LABELS.iter().copied().zip(vals).collect(), status, notes }
}

/// Whether `cu_unit_leq` on constant sequences agrees with `unit_leq`.
pub fn unit_consistency(s: &AlgebraicCu, x: &Elem, y: &Elem, b: &SearchBudget) -> CoreResult<Tri> {
    let c = cu_unit_leq(s, &s.constant(x.clone()), &s.constant(y.clone()), b)?.value;
    let u = unit_leq(&s.compacts, x, y, b).value;
    Ok(match (c, u) {
        (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
        _ => Tri::from_bool(c == u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Q;
    use crate::finite::{FiniteMonoid, OrderSpec};

    fn rat(n: i128, d: i128) -> Elem {
        Elem::Rat(Q::new(n, d))
    }

    fn approach_one() -> CuElem {
        CuElem {
            prefix: vec![rat(0, 1), rat(1, 2), rat(2, 3), rat(3, 4)],
            tail: Tail::FormalSupLabel { label: "1 - 1/n".into(), below: Some(rat(1, 1)) },
        }
    }

    fn zero_top() -> Instance {
        let names = vec!["0".into(), "T".into()];
        Instance::finite("zero_top", FiniteMonoid::new(names, vec![vec![0, 1], vec![1, 1]], OrderSpec::Algebraic).unwrap())
    }

    #[test]
    fn increasing_sequence_below_its_cap() {
        let s = AlgebraicCu::new(Instance::qplus());
        let one = s.constant(rat(1, 1));
        assert!(cu_leq(&s, &approach_one(), &one, 8).is_yes());
        assert!(cu_leq(&s, &one, &approach_one(), 8).is_no());
    }

    #[test]
    fn rationals_pass_the_unit_order() {
        let s = AlgebraicCu::new(Instance::qplus());
        let b = SearchBudget::default();
        assert!(cu_unit_leq(&s, &approach_one(), &s.constant(rat(1, 1)), &b).unwrap().is_yes());
    }

    #[test]
    fn free_square_fails_almost_divisibility() {
        let s = AlgebraicCu::new(Instance::free(2));
        let b = SearchBudget::default();
        let one = s.constant(Elem::Vec(vec![1, 0]));
        match cu_unit_leq(&s, &one, &one, &b) {
            Err(CoreError::HypothesisFailure(msg)) => assert!(msg.starts_with("AlmostDivisible")),
            other => panic!("expected a hypothesis failure, got {other:?}"),
        }
        assert!(tensor_compacts(&AlgebraicCu::new(Instance::free(1)), &b).is_err());
    }

    #[test]
    fn chain_on_rationals_and_two_point_semilattice() {
        let b = SearchBudget::default();
        for m in [Instance::qplus(), zero_top()] {
            let r = thm65_chain(&AlgebraicCu::new(m), &b);
            assert_eq!(r.status, Status::Pass, "{r:?}");
            assert!(r.statuses.iter().all(|(_, t)| t.is_yes()), "{r:?}");
        }
    }

    #[test]
    fn numerical_semigroup_chain_is_vacuous() {
        let r = thm65_chain(&AlgebraicCu::new(Instance::numerical(&[2, 3])), &SearchBudget::default());
        assert_eq!(r.status, Status::Vacuous("AlmostDivisible".into()));
    }

    #[test]
    fn growing_tails_compare_by_step() {
        let s = AlgebraicCu::new(Instance::free(1));
        let u = CuElem { prefix: vec![Elem::Vec(vec![0])], tail: Tail::RepeatLastPlusDelta(Elem::Vec(vec![1])) };
        let v = CuElem { prefix: vec![Elem::Vec(vec![1])], tail: Tail::RepeatLastPlusDelta(Elem::Vec(vec![2])) };
        assert!(cu_leq(&s, &u, &v, 8).is_yes());
        assert!(cu_leq(&s, &u, &s.constant(Elem::Vec(vec![3])), 8).is_no());
    }
}
