//! The ordered tensor product `M ⊗ Z` at the level of formal sums.
//!
//! `a⊙b` denotes a basis term of the free semigroup on nonzero pairs.
//! The order is the transitive closure of `≤′` (termwise comparison that
//! may add target terms) and `≅` (bilinear splitting and merging). A
//! chain certificate records every state, and [`replay_chain`] re-checks
//! each step against the instance order and `Z` arithmetic.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::arith::{ceil_q, floor_q, fmt_q, q, Q};
use crate::budget::SearchBudget;
use crate::cuz::{CuZ, Ext};
use crate::elem::Elem;
use crate::error::{CoreError, CoreResult};
use crate::grothendieck::{cone_member, gr_sample, Cone};
use crate::instance::{Backend, Instance};
use crate::relations::{check_property, downset, rel_d, rel_p, rel_s, PropertyId};
use crate::verdict::{Bound, Tri, Verdict};

/// A finite multiset of basis terms, kept sorted; no term has a zero
/// component.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSum {
    terms: Vec<(Elem, CuZ)>,
}

impl FormalSum {
    pub fn zero() -> FormalSum {
        FormalSum::default()
    }

    pub fn term(m: &Instance, x: Elem, t: CuZ) -> FormalSum {
        FormalSum::from_terms(m, vec![(x, t)])
    }

    /// `x⊙1`.
    pub fn unit(m: &Instance, x: Elem) -> FormalSum {
        FormalSum::term(m, x, CuZ::Compact(1))
    }

    pub fn from_terms(m: &Instance, terms: Vec<(Elem, CuZ)>) -> FormalSum {
        let mut terms: Vec<_> = terms.into_iter().filter(|(x, t)| !t.is_zero() && !m.is_zero(x).is_yes()).collect();
        terms.sort();
        FormalSum { terms }
    }

    pub fn terms(&self) -> &[(Elem, CuZ)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, m: &Instance, o: &FormalSum) -> FormalSum {
        FormalSum::from_terms(m, self.terms.iter().chain(&o.terms).cloned().collect())
    }

    /// Removes one occurrence of each listed term; `None` if one is missing.
    fn remove(&self, gone: &[(Elem, CuZ)]) -> Option<Vec<(Elem, CuZ)>> {
        let mut rest = self.terms.clone();
        for t in gone {
            let i = rest.iter().position(|r| r == t)?;
            rest.remove(i);
        }
        Some(rest)
    }

    pub fn fmt_with(&self, m: &Instance) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(x, t)| format!("{}⊙{}", m.fmt_elem(x), t)).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(x, t)| format!("{x}⊙{t}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Termwise `≤` into the next state, unmatched target terms allowed.
    LeqPrime,
    /// `(Σa_i)⊙(Σt_j) → Σ a_i⊙t_j`.
    SplitRight { a: Elem, t: CuZ, parts_a: Vec<Elem>, parts_t: Vec<CuZ> },
    /// `Σ a_i⊙t_j → (Σa_i)⊙(Σt_j)`.
    MergeLeft { a: Elem, t: CuZ, parts_a: Vec<Elem>, parts_t: Vec<CuZ> },
}

impl Step {
    pub fn tag(&self) -> &'static str {
        match self {
            Step::LeqPrime => "LeqPrime",
            Step::SplitRight { .. } => "SplitRight",
            Step::MergeLeft { .. } => "MergeLeft",
        }
    }
}

/// `states[0] = source`; `steps[i]` takes `states[i]` to `states[i+1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainCertificate {
    pub states: Vec<FormalSum>,
    pub steps: Vec<Step>,
}

impl ChainCertificate {
    fn start(f: &FormalSum) -> ChainCertificate {
        ChainCertificate { states: vec![f.clone()], steps: Vec::new() }
    }

    fn last(&self) -> &FormalSum {
        self.states.last().expect("a chain has a source")
    }

    fn push(&mut self, step: Step, next: FormalSum) {
        self.steps.push(step);
        self.states.push(next);
    }

    /// Number of `≤′` links.
    pub fn depth(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::LeqPrime).count()
    }

    pub fn render(&self, m: &Instance) -> Vec<String> {
        let mut out = vec![self.states[0].fmt_with(m)];
        for (s, st) in self.steps.iter().zip(self.states.iter().skip(1)) {
            let rel = match s {
                Step::LeqPrime => "≤′",
                Step::SplitRight { .. } => "→",
                Step::MergeLeft { .. } => "←",
            };
            out.push(format!("{rel} {}", st.fmt_with(m)));
        }
        out
    }
}

fn cu_sum(ts: &[CuZ]) -> CuZ {
    ts.iter().fold(CuZ::ZERO, |a, t| a.add(t))
}

fn products(m: &Instance, parts_a: &[Elem], parts_t: &[CuZ]) -> Vec<(Elem, CuZ)> {
    let mut out = Vec::new();
    for a in parts_a {
        for t in parts_t {
            if !t.is_zero() && !m.is_zero(a).is_yes() {
                out.push((a.clone(), t.clone()));
            }
        }
    }
    out
}

fn sum_elems(m: &Instance, xs: &[Elem]) -> Elem {
    xs.iter().fold(m.zero(), |a, x| m.plus(&a, x))
}

/// `f ≤′ g`: an injective matching of `f`'s terms into `g`'s with both
/// components below.
fn leq_prime(m: &Instance, f: &FormalSum, g: &FormalSum, b: &SearchBudget) -> Tri {
    fn go(m: &Instance, f: &[(Elem, CuZ)], g: &[(Elem, CuZ)], used: &mut Vec<bool>, b: &SearchBudget) -> Tri {
        let Some(((x, t), rest)) = f.split_first() else { return Tri::Yes };
        let mut undecided = false;
        for (j, (y, u)) in g.iter().enumerate() {
            if used[j] || !t.leq(u) {
                continue;
            }
            match m.leq_tri(x, y, b) {
                Tri::No => continue,
                Tri::Unknown => undecided = true,
                Tri::Yes => {
                    used[j] = true;
                    let r = go(m, rest, g, used, b);
                    used[j] = false;
                    match r {
                        Tri::Yes => return Tri::Yes,
                        Tri::Unknown => undecided = true,
                        Tri::No => {}
                    }
                }
            }
        }
        if undecided {
            Tri::Unknown
        } else {
            Tri::No
        }
    }
    if f.len() > g.len() {
        return Tri::No;
    }
    go(m, &f.terms, &g.terms, &mut vec![false; g.len()], b)
}

/// Re-checks every step of `c` and that it ends at `g`.
pub fn replay_chain(m: &Instance, c: &ChainCertificate, f: &FormalSum, g: &FormalSum, b: &SearchBudget) -> Tri {
    if c.states.first() != Some(f) || c.states.last() != Some(g) || c.states.len() != c.steps.len() + 1 {
        return Tri::No;
    }
    let mut acc = Tri::Yes;
    for (i, s) in c.steps.iter().enumerate() {
        let (from, to) = (&c.states[i], &c.states[i + 1]);
        let ok = match s {
            Step::LeqPrime => leq_prime(m, from, to, b),
            Step::SplitRight { a, t, parts_a, parts_t } | Step::MergeLeft { a, t, parts_a, parts_t } => {
                let whole = FormalSum::from_terms(m, vec![(a.clone(), t.clone())]);
                let pieces = FormalSum::from_terms(m, products(m, parts_a, parts_t));
                let (src, dst) = if matches!(s, Step::SplitRight { .. }) { (&whole, &pieces) } else { (&pieces, &whole) };
                let sums = m.eq_tri(&sum_elems(m, parts_a), a).and(Tri::from_bool(cu_sum(parts_t) == *t));
                match from.remove(&src.terms) {
                    Some(rest) => {
                        let expect = FormalSum::from_terms(m, rest).plus(m, dst);
                        sums.and(Tri::from_bool(&expect == to))
                    }
                    None => Tri::No,
                }
            }
        };
        acc = acc.and(ok);
        if acc.is_no() {
            return Tri::No;
        }
    }
    acc
}

// ---- chain templates --------------------------------------------------------

/// Rewrites the term `(a, t)` of the current state by a split.
fn split(m: &Instance, c: &mut ChainCertificate, a: &Elem, t: &CuZ, parts_a: Vec<Elem>, parts_t: Vec<CuZ>) {
    let rest = c.last().remove(&[(a.clone(), t.clone())]).expect("term present");
    let next = FormalSum::from_terms(m, rest).plus(m, &FormalSum::from_terms(m, products(m, &parts_a, &parts_t)));
    c.push(Step::SplitRight { a: a.clone(), t: t.clone(), parts_a, parts_t }, next);
}

fn merge(m: &Instance, c: &mut ChainCertificate, parts_a: Vec<Elem>, parts_t: Vec<CuZ>) {
    let a = sum_elems(m, &parts_a);
    let t = cu_sum(&parts_t);
    let rest = c.last().remove(&products(m, &parts_a, &parts_t)).expect("terms present");
    let next = FormalSum::from_terms(m, rest).plus(m, &FormalSum::term(m, a.clone(), t.clone()));
    c.push(Step::MergeLeft { a, t, parts_a, parts_t }, next);
}

/// Replaces the term `(a, t)` by `(a2, t2)` through one `≤′` link.
fn raise(m: &Instance, c: &mut ChainCertificate, from: (&Elem, &CuZ), to: (Elem, CuZ)) {
    let rest = c.last().remove(&[(from.0.clone(), from.1.clone())]).expect("term present");
    let next = FormalSum::from_terms(m, rest).plus(m, &FormalSum::term(m, to.0, to.1));
    c.push(Step::LeqPrime, next);
}

/// The chain `x⊙t ≤′ x⊙((n+1)r/n)′ ≅ (n+1)x⊙(r/n)′ ≤′ ny⊙(r/n)′ ≅ y⊙r′`,
/// where `r` is the value of `t` and `(n+1)x <= ny`; it ends at `y⊙r′`
/// inside `c`, or at `y⊙t` when `t` is soft.
fn s_chain(m: &Instance, c: &mut ChainCertificate, x: &Elem, t: &CuZ, y: &Elem, n: u64) -> Option<CuZ> {
    let Ext::Fin(r) = t.value() else { return None };
    let n1 = n + 1;
    let piece = CuZ::soft(r / q(n as i128));
    let big = CuZ::soft(piece.soft_value()?.clone() * q(n1 as i128));
    raise(m, c, (x, t), (x.clone(), big.clone()));
    split(m, c, x, &big, vec![x.clone()], vec![piece.clone(); n1 as usize]);
    merge(m, c, vec![x.clone(); n1 as usize], vec![piece.clone()]);
    let (xn, yn) = (m.mul(n1, x), m.mul(n, y));
    raise(m, c, (&xn, &piece), (yn.clone(), piece.clone()));
    split(m, c, &yn, &piece, vec![y.clone(); n as usize], vec![piece.clone()]);
    merge(m, c, vec![y.clone()], vec![piece.clone(); n as usize]);
    Some(CuZ::soft(r))
}

/// A chain from `x⊙t` to a single term `y⊙u` with `u` componentwise
/// below `u`, using a `<_s` or `<=_d` witness.
fn term_chain(m: &Instance, x: &Elem, t: &CuZ, y: &Elem, u: &CuZ, b: &SearchBudget) -> Option<ChainCertificate> {
    let src = FormalSum::term(m, x.clone(), t.clone());
    let dst = FormalSum::term(m, y.clone(), u.clone());
    let mut c = ChainCertificate::start(&src);
    if src == dst {
        return Some(c);
    }
    if leq_prime(m, &src, &dst, b).is_yes() {
        c.push(Step::LeqPrime, dst);
        return Some(c);
    }
    let close = |mut c: ChainCertificate, end: CuZ| -> Option<ChainCertificate> {
        if c.last() != &dst {
            if !end.leq(u) {
                return None;
            }
            c.push(Step::LeqPrime, dst.clone());
        }
        Some(c)
    };
    let s = rel_s(m, x, y, b);
    if let (Tri::Yes, Some(n)) = (s.value, s.certificate.n) {
        let mut c = ChainCertificate::start(&src);
        if let Some(end) = s_chain(m, &mut c, x, t, y, n) {
            if let Some(done) = close(c, end) {
                return Some(done);
            }
        }
    }
    let d = rel_d(m, x, y, b);
    if d.is_yes() {
        let (x1, x2, y1, y2) = (d.get("x1")?, d.get("x2")?, d.get("y1")?, d.get("y2")?);
        let n = d.certificate.n?;
        if m.is_zero(x2).is_yes() || m.is_zero(x1).is_yes() {
            return None;
        }
        let mut c = ChainCertificate::start(&src);
        split(m, &mut c, x, t, vec![x1.clone(), x2.clone()], vec![t.clone()]);
        let end = s_chain(m, &mut c, x2, t, y2, n)?;
        if m.is_zero(y1).is_yes() || m.is_zero(y2).is_yes() {
            return None;
        }
        if &end != t {
            raise(m, &mut c, (y2, &end), (y2.clone(), t.clone()));
        }
        raise(m, &mut c, (x1, t), (y1.clone(), t.clone()));
        merge(m, &mut c, vec![y1.clone(), y2.clone()], vec![t.clone()]);
        return close(c, t.clone());
    }
    None
}

/// Bounded search for a chain from `f` to `g` with at most
/// `b.chain_depth` `≤′` links. Only ever `Yes` or `Unknown`.
pub fn oracle_leq(m: &Instance, f: &FormalSum, g: &FormalSum, b: &SearchBudget) -> (Verdict, Option<ChainCertificate>) {
    let found = |c: ChainCertificate, how: &str| {
        debug_assert!(replay_chain(m, &c, f, g, b).is_yes());
        let v = Verdict::yes(format!("chain of {} ≤′ links ({how})", c.depth())).steps(c.steps.len() as u64);
        (v, Some(c))
    };
    if f == g {
        return found(ChainCertificate::start(f), "empty");
    }
    let depth = b.chain_depth as usize;
    if leq_prime(m, f, g, b).is_yes() && depth >= 1 {
        let mut c = ChainCertificate::start(f);
        c.push(Step::LeqPrime, g.clone());
        return found(c, "direct");
    }
    if let Some(c) = matched_templates(m, f, g, b) {
        if c.depth() <= depth && replay_chain(m, &c, f, g, b).is_yes() {
            return found(c, "template");
        }
    }
    if let Some(c) = congruence_search(m, f, g, b) {
        if c.depth() <= depth && replay_chain(m, &c, f, g, b).is_yes() {
            return found(c, "congruence search");
        }
    }
    (Verdict::unknown(Bound::ChainDepth, format!("no chain found within depth {depth}")), None)
}

/// Matches source terms to target terms one-to-one and chains each pair;
/// target terms left over are absorbed by a final `≤′`.
fn matched_templates(m: &Instance, f: &FormalSum, g: &FormalSum, b: &SearchBudget) -> Option<ChainCertificate> {
    if f.len() > g.len() || f.len() > 4 {
        return None;
    }
    let mut order: Vec<usize> = Vec::new();
    let mut used = vec![false; g.len()];
    fn assign(
        m: &Instance,
        f: &FormalSum,
        g: &FormalSum,
        b: &SearchBudget,
        i: usize,
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
    ) -> bool {
        if i == f.len() {
            return true;
        }
        let (x, t) = &f.terms[i];
        for j in 0..g.len() {
            if used[j] {
                continue;
            }
            let (y, u) = &g.terms[j];
            if term_chain(m, x, t, y, u, b).is_some() {
                used[j] = true;
                order.push(j);
                if assign(m, f, g, b, i + 1, used, order) {
                    return true;
                }
                order.pop();
                used[j] = false;
            }
        }
        false
    }
    if !assign(m, f, g, b, 0, &mut used, &mut order) {
        return None;
    }
    let mut c = ChainCertificate::start(f);
    for (i, &j) in order.iter().enumerate() {
        let (x, t) = &f.terms[i];
        let (y, u) = &g.terms[j];
        let piece = term_chain(m, x, t, y, u, b)?;
        // Run the single-term chain with the other terms carried along.
        for (s, st) in piece.steps.into_iter().zip(piece.states.windows(2)) {
            let rest = c.last().remove(&st[0].terms)?;
            let next = FormalSum::from_terms(m, rest).plus(m, &st[1]);
            c.push(s, next);
        }
    }
    if c.last() != g {
        c.push(Step::LeqPrime, g.clone());
    }
    Some(c)
}

/// Breadth-first closure of `f` under binary splits and merges, then
/// one `≤′` into `g`.
fn congruence_search(m: &Instance, f: &FormalSum, g: &FormalSum, b: &SearchBudget) -> Option<ChainCertificate> {
    let cap = b.node_cap().min(4000) as usize;
    let max_terms = (f.len() + g.len()).max(2) + 2;
    let mut seen: BTreeSet<FormalSum> = BTreeSet::new();
    let mut queue: VecDeque<ChainCertificate> = VecDeque::new();
    seen.insert(f.clone());
    queue.push_back(ChainCertificate::start(f));
    while let Some(c) = queue.pop_front() {
        let cur = c.last().clone();
        if leq_prime(m, &cur, g, b).is_yes() {
            let mut done = c;
            if done.last() != g {
                done.push(Step::LeqPrime, g.clone());
            }
            return Some(done);
        }
        if seen.len() >= cap {
            continue;
        }
        for (step, next) in moves(m, &cur, max_terms) {
            if seen.insert(next.clone()) {
                let mut c2 = c.clone();
                c2.push(step, next);
                queue.push_back(c2);
            }
        }
    }
    None
}

fn moves(m: &Instance, f: &FormalSum, max_terms: usize) -> Vec<(Step, FormalSum)> {
    let mut out = Vec::new();
    let rebuild = |rest: Vec<(Elem, CuZ)>, add: Vec<(Elem, CuZ)>| FormalSum::from_terms(m, rest.into_iter().chain(add).collect());
    for (i, (a, t)) in f.terms.iter().enumerate() {
        if i > 0 && f.terms[i - 1] == f.terms[i] {
            continue;
        }
        let rest = f.remove(&[(a.clone(), t.clone())]).unwrap();
        if f.len() < max_terms {
            if let Some(ds) = m.decompositions(a) {
                for (p, r) in ds {
                    if m.is_zero(&p).is_yes() || m.is_zero(&r).is_yes() || p > r {
                        continue;
                    }
                    let parts_a = vec![p, r];
                    let next = rebuild(rest.clone(), products(m, &parts_a, std::slice::from_ref(t)));
                    out.push((Step::SplitRight { a: a.clone(), t: t.clone(), parts_a, parts_t: vec![t.clone()] }, next));
                }
            }
            if let CuZ::Compact(k) = t {
                for i in 1..=k / 2 {
                    let parts_t = vec![CuZ::Compact(i), CuZ::Compact(k - i)];
                    let next = rebuild(rest.clone(), products(m, std::slice::from_ref(a), &parts_t));
                    out.push((Step::SplitRight { a: a.clone(), t: t.clone(), parts_a: vec![a.clone()], parts_t }, next));
                }
            }
        }
        for (j, (a2, t2)) in f.terms.iter().enumerate().skip(i + 1) {
            let both = [(a.clone(), t.clone()), (a2.clone(), t2.clone())];
            let rest2 = f.remove(&both).unwrap();
            if t == t2 {
                let parts_a = vec![a.clone(), a2.clone()];
                let merged = (m.plus(a, a2), t.clone());
                out.push((
                    Step::MergeLeft { a: merged.0.clone(), t: t.clone(), parts_a, parts_t: vec![t.clone()] },
                    rebuild(rest2.clone(), vec![merged]),
                ));
            }
            if a == a2 && j != i {
                let parts_t = vec![t.clone(), t2.clone()];
                let merged = (a.clone(), t.add(t2));
                out.push((
                    Step::MergeLeft { a: a.clone(), t: merged.1.clone(), parts_a: vec![a.clone()], parts_t },
                    rebuild(rest2, vec![merged]),
                ));
            }
        }
    }
    out
}

// ---- the order of M ⊗ 1 -----------------------------------------------------

/// The hypotheses under which `x⊗1 <= y⊗1` is exactly `x <=_p y`.
pub fn p56_hypotheses(m: &Instance, b: &SearchBudget) -> Vec<(PropertyId, Tri)> {
    [PropertyId::AlgebraicallyOrdered, PropertyId::Cancellative, PropertyId::Simple, PropertyId::Refinement]
        .into_iter()
        .map(|p| (p, check_property(m, p, b).value))
        .collect()
}

fn p56_holds(m: &Instance, b: &SearchBudget) -> bool {
    let h = p56_hypotheses(m, b);
    h[0].1.is_yes() && h[1].1.is_yes() && (h[2].1.is_yes() || h[3].1.is_yes())
}

/// `x⊗1 <= y⊗1`, by a ladder of sufficient and necessary conditions;
/// the summary names the rung that decided.
pub fn unit_leq(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    m.memo(&format!("unit_leq:{x}:{y}"), b, || unit_leq_uncached(m, x, y, b))
}

fn unit_leq_uncached(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    if m.leq_tri(x, y, b).is_yes() {
        return Verdict::yes("rung 1: x <= y").with_n(1);
    }
    let s = rel_s(m, x, y, b);
    if s.is_yes() {
        let mut v = Verdict::yes("rung 1: x <_s y").facts(s.certificate.facts.iter().cloned());
        if let Some(n) = s.certificate.n {
            v = v.with_n(n);
        }
        return v;
    }
    let p = rel_p(m, x, y, b);
    if p.is_no() {
        return Verdict::no(format!("rung 2: x <=_p y fails ({})", p.certificate.summary));
    }
    if p.is_yes() && p56_holds(m, b) {
        let mut v = Verdict::yes("rung 3: x <=_p y under algebraic order, cancellation and simplicity or refinement")
            .facts(p.certificate.facts.iter().cloned());
        if let Some(n) = p.certificate.n {
            v = v.with_n(n);
        }
        return v;
    }
    let (f, g) = (FormalSum::unit(m, x.clone()), FormalSum::unit(m, y.clone()));
    let (o, _) = oracle_leq(m, &f, &g, b);
    if o.is_yes() {
        return Verdict::yes(format!("rung 4: {}", o.certificate.summary));
    }
    Verdict::unknown(Bound::ChainDepth, "rung 5: no rung decided")
}

/// `M ⊗ 1` as an instance on the carrier of `M`.
pub fn m_tensor_one(m: &Instance) -> Instance {
    Instance::tensor_one(m)
}

/// The conditions compared by the order-cancellation equivalence for
/// `M ⊗ 1`, evaluated on the sample of `M`.
#[derive(Clone, Debug)]
pub struct TensorOneReport {
    /// `x <= y ⟺ x⊗1 <= y⊗1` on sampled pairs.
    pub embedding: Tri,
    pub order_cancellative: Tri,
    pub nearly_unperforated: Tri,
    /// `x <=_p y ⟹ x⊗1 <= y⊗1` on sampled pairs.
    pub p_implies_unit: Tri,
    pub pairs: usize,
}

pub fn tensor_one_report(m: &Instance, b: &SearchBudget) -> TensorOneReport {
    let t = m_tensor_one(m);
    let sample = m.sample(b);
    let mut embedding = Tri::Yes;
    let mut p_implies = Tri::Yes;
    let mut pairs = 0;
    for x in &sample.elems {
        for y in &sample.elems {
            pairs += 1;
            let (l, u) = (m.leq_tri(x, y, b), unit_leq(m, x, y, b).value);
            embedding = embedding.and(match (l, u) {
                (Tri::Yes, Tri::Yes) | (Tri::No, Tri::No) => Tri::Yes,
                (Tri::No, Tri::Yes) => Tri::No,
                _ => Tri::Unknown,
            });
            p_implies = p_implies.and(rel_p(m, x, y, b).value.implies(u));
        }
    }
    if !sample.exhaustive {
        if embedding.is_yes() {
            embedding = Tri::Unknown;
        }
        if p_implies.is_yes() {
            p_implies = Tri::Unknown;
        }
    }
    TensorOneReport {
        embedding,
        order_cancellative: check_property(&t, PropertyId::OrderCancellative, b).value,
        nearly_unperforated: check_property(m, PropertyId::NearlyUnperforated, b).value,
        p_implies_unit: p_implies,
        pairs,
    }
}

// ---- Grothendieck comparison ------------------------------------------------

#[derive(Clone, Debug)]
pub struct IsoReport {
    pub checked: usize,
    pub agree: usize,
    pub undecided: usize,
    /// Elements in exactly one of the two cones.
    pub mismatches: Vec<Elem>,
}

/// Compares `Au(GrPlus)` of `M` with `GrPlusPlus` of `M ⊗ 1` on sampled
/// group elements; the two groups coincide and the map is the identity.
pub fn gr_plusplus_iso(m: &Instance, b: &SearchBudget) -> CoreResult<IsoReport> {
    for p in [PropertyId::AlgebraicallyOrdered, PropertyId::Cancellative] {
        if !check_property(m, p, b).is_yes() {
            return Err(CoreError::HypothesisFailure(format!("{} is not Yes on {}", p.name(), m.name)));
        }
    }
    let t = m_tensor_one(m);
    if check_property(&t, PropertyId::OrderCancellative, b).is_no() {
        return Err(CoreError::HypothesisFailure(format!("{} is not order-cancellative", t.name)));
    }
    let small = b.with_box(b.sample_box.min(4));
    let mut r = IsoReport { checked: 0, agree: 0, undecided: 0, mismatches: Vec::new() };
    for g in gr_sample(m, &small)? {
        r.checked += 1;
        let a = cone_member(m, Cone::AuGrPlus, &g, b)?.value;
        let c = cone_member(&t, Cone::GrPlusPlus, &g, b)?.value;
        match (a, c) {
            (Tri::Yes, Tri::Yes) | (Tri::No, Tri::No) => r.agree += 1,
            (Tri::Yes, Tri::No) | (Tri::No, Tri::Yes) => r.mismatches.push(g),
            _ => r.undecided += 1,
        }
    }
    Ok(r)
}

// ---- compact interpolation --------------------------------------------------

#[derive(Clone, Debug)]
pub struct Interpolation {
    pub n: u64,
    pub y: Elem,
    /// The auxiliary multiplier when `t - s < 1`.
    pub l: Option<u64>,
    pub trace: Vec<String>,
    /// Each inequality of the sandwich `x⊙s <= ny⊙1 <= x⊙t`, re-verified.
    pub checks: Vec<(String, Tri)>,
}

impl Interpolation {
    pub fn verified(&self) -> Tri {
        self.checks.iter().fold(Tri::Yes, |a, (_, t)| a.and(*t))
    }
}

/// Finds `(n, y)` with `x⊙s <= ny⊙1 <= x⊙t` for soft values `0 < s < t`.
pub fn interpolate_compact(m: &Instance, x: &Elem, s: &Q, t: &Q, b: &SearchBudget) -> CoreResult<Interpolation> {
    if !(Q::zero() < *s && s < t) {
        return Err(CoreError::Invalid(format!("need 0 < s < t, got s = {}, t = {}", fmt_q(s), fmt_q(t))));
    }
    let soft = |r: &Q| CuZ::soft(r.clone());
    let gap = t - s;
    if gap >= q(1) {
        let n = ceil_q(s).max(1) as u64;
        let checks = vec![
            (format!("{}′ <= {n}", fmt_q(s)), Tri::from_bool(soft(s).leq(&CuZ::Compact(n)))),
            (format!("{n} <= {}′", fmt_q(t)), Tri::from_bool(CuZ::Compact(n).leq(&soft(t)))),
        ];
        let trace = vec![format!("t - s = {} >= 1, take n = {n} in [s, t] and y = x", fmt_q(&gap))];
        return Ok(Interpolation { n, y: x.clone(), l: None, trace, checks });
    }
    if check_property(m, PropertyId::AlmostDivisible, b).is_no() {
        return Err(CoreError::HypothesisFailure(format!("{} is not almost divisible", m.name)));
    }
    let bound = (q(1) + t) / &gap;
    let l = (floor_q(&bound) + 1) as u64;
    let (ls, lt) = (s * q(l as i128), t * q(l as i128 - 1));
    let n = (floor_q(&ls) + 1) as u64;
    let mut trace = vec![
        format!("L = {l} > (1 + t)/(t - s) = {}", fmt_q(&bound)),
        format!("Ls = {} < n = {n} < (L-1)t = {}", fmt_q(&ls), fmt_q(&lt)),
    ];
    if q(n as i128) >= lt {
        return Err(CoreError::HypothesisFailure("no integer strictly between Ls and (L-1)t".into()));
    }
    let y = divide(m, x, l, b).ok_or_else(|| {
        CoreError::HypothesisFailure(format!("no y with (L-1)y <= x <= Ly found for L = {l}"))
    })?;
    trace.push(format!("y = {} with {}y <= x <= {l}y", m.fmt_elem(&y), l - 1));
    let checks = vec![
        ("x <= Ly".to_string(), m.leq_tri(x, &m.mul(l, &y), b)),
        ("(L-1)y <= x".to_string(), m.leq_tri(&m.mul(l - 1, &y), x, b)),
        (format!("Ls′ = {}′ <= {n}", fmt_q(&ls)), Tri::from_bool(soft(&ls).leq(&CuZ::Compact(n)))),
        (format!("{n} <= (L-1)t′ = {}′", fmt_q(&lt)), Tri::from_bool(CuZ::Compact(n).leq(&soft(&lt)))),
    ];
    Ok(Interpolation { n, y, l: Some(l), trace, checks })
}

/// Some `y` with `(l-1)y <= x <= ly`.
fn divide(m: &Instance, x: &Elem, l: u64, b: &SearchBudget) -> Option<Elem> {
    let ok = |y: &Elem| m.leq_tri(&m.mul(l - 1, y), x, b).is_yes() && m.leq_tri(x, &m.mul(l, y), b).is_yes();
    let direct = match (&m.backend, x) {
        (Backend::QPlus, Elem::Rat(r)) => Some(Elem::Rat(r / q(l as i128))),
        (Backend::CuZ, Elem::Cu(CuZ::Soft(Ext::Fin(r)))) => Some(Elem::Cu(CuZ::soft(r / q(l as i128)))),
        _ => None,
    };
    if let Some(y) = direct.filter(|y| ok(y)) {
        return Some(y);
    }
    let pool = downset(m, x).unwrap_or_else(|| m.sample(b).elems);
    pool.into_iter().find(|y| ok(y))
}

/// Whether `f` is compact in `M ⊗ Z`, that is, equal to some `x⊙1`.
pub fn compact_test(m: &Instance, f: &FormalSum, b: &SearchBudget) -> CoreResult<(Verdict, Option<ChainCertificate>)> {
    if check_property(m, PropertyId::AlmostDivisible, b).is_no() {
        return Err(CoreError::HypothesisFailure(format!("{} is not almost divisible", m.name)));
    }
    if f.is_empty() {
        return Ok((Verdict::yes("the empty sum is 0⊙1"), Some(ChainCertificate::start(f))));
    }
    if f.terms.iter().all(|(_, t)| matches!(t, CuZ::Compact(_))) {
        // x⊙k ≅ kx⊙1 term by term, then all terms merge into one.
        let mut c = ChainCertificate::start(f);
        for (x, t) in f.terms.clone() {
            let CuZ::Compact(k) = t else { unreachable!() };
            if k > 1 {
                split(m, &mut c, &x, &t, vec![x.clone()], vec![CuZ::Compact(1); k as usize]);
                merge(m, &mut c, vec![x.clone(); k as usize], vec![CuZ::Compact(1)]);
            }
        }
        let parts: Vec<Elem> = c.last().terms.iter().map(|(x, _)| x.clone()).collect();
        if parts.len() > 1 {
            merge(m, &mut c, parts.clone(), vec![CuZ::Compact(1)]);
        }
        let x = sum_elems(m, &parts);
        let v = Verdict::yes(format!("equals {}⊙1", m.fmt_elem(&x))).witness("x", x);
        return Ok((v, Some(c)));
    }
    if matches!(m.backend, Backend::QPlus) {
        // In Q+ ⊗ Z every element has a value; a soft term keeps the
        // element below its own value, which no x⊙1 with x > 0 is.
        return Ok((Verdict::no("a soft term survives: the element is not way below itself"), None));
    }
    Ok((Verdict::unknown(Bound::ChainDepth, "a soft term is present and no value argument applies"), None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Elem {
        Elem::Vec(xs.to_vec())
    }

    #[test]
    fn identical_sums_need_no_steps() {
        let m = Instance::free(1);
        let f = FormalSum::unit(&m, v(&[1]));
        let (r, c) = oracle_leq(&m, &f, &f, &SearchBudget::default());
        assert!(r.is_yes());
        assert!(c.unwrap().steps.is_empty());
    }

    #[test]
    fn numerical_semigroup_three_below_four_at_unit_level() {
        let m = Instance::numerical(&[2, 3]);
        let b = SearchBudget::default();
        let r = unit_leq(&m, &v(&[3]), &v(&[4]), &b);
        assert!(r.is_yes());
        assert!(r.certificate.summary.starts_with("rung 1"));
        let (f, g) = (FormalSum::unit(&m, v(&[3])), FormalSum::unit(&m, v(&[4])));
        let (o, c) = oracle_leq(&m, &f, &g, &b);
        assert!(o.is_yes());
        let c = c.unwrap();
        assert_eq!(replay_chain(&m, &c, &f, &g, &b), Tri::Yes);
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn nat_squared_incomparable_pair_is_rejected_by_rung_two() {
        let m = Instance::free(2);
        let r = unit_leq(&m, &v(&[1, 2]), &v(&[2, 1]), &SearchBudget::default());
        assert!(r.is_no());
        assert!(r.certificate.summary.starts_with("rung 2"));
    }

    #[test]
    fn tampered_chain_fails_replay() {
        let m = Instance::numerical(&[2, 3]);
        let b = SearchBudget::default();
        let (f, g) = (FormalSum::unit(&m, v(&[3])), FormalSum::unit(&m, v(&[4])));
        let (_, c) = oracle_leq(&m, &f, &g, &b);
        let mut c = c.unwrap();
        let i = c.steps.iter().position(|s| *s == Step::LeqPrime).unwrap();
        c.states[i + 1] = FormalSum::unit(&m, v(&[9]));
        assert_eq!(replay_chain(&m, &c, &f, &g, &b), Tri::No);
    }

    #[test]
    fn interpolation_on_rationals_follows_the_recipe() {
        let m = Instance::qplus();
        let b = SearchBudget::default();
        let r = interpolate_compact(&m, &Elem::Rat(q(1)), &Q::new(1, 2), &Q::new(3, 4), &b).unwrap();
        assert_eq!(r.l, Some(8));
        assert_eq!(r.n, 5);
        assert_eq!(r.y, Elem::Rat(Q::new(1, 8)));
        assert_eq!(r.verified(), Tri::Yes);
    }

    #[test]
    fn interpolation_with_wide_gap_keeps_x() {
        let m = Instance::free(1);
        let r = interpolate_compact(&m, &v(&[1]), &q(1), &q(2), &SearchBudget::default()).unwrap();
        assert_eq!((r.n, r.y.clone(), r.l), (1, v(&[1]), None));
        assert_eq!(r.verified(), Tri::Yes);
    }

    #[test]
    fn compact_sums_merge_to_a_unit_term() {
        let m = Instance::qplus();
        let b = SearchBudget::default();
        let f = FormalSum::from_terms(&m, vec![(Elem::Rat(q(1)), CuZ::Compact(2)), (Elem::Rat(Q::new(1, 2)), CuZ::Compact(1))]);
        let (r, c) = compact_test(&m, &f, &b).unwrap();
        assert!(r.is_yes());
        assert_eq!(r.get("x"), Some(&Elem::Rat(Q::new(5, 2))));
        let g = FormalSum::unit(&m, Elem::Rat(Q::new(5, 2)));
        assert_eq!(replay_chain(&m, &c.unwrap(), &f, &g, &b), Tri::Yes);
        let soft = FormalSum::term(&m, Elem::Rat(q(1)), CuZ::soft_int(1));
        assert!(compact_test(&m, &soft, &b).unwrap().0.is_no());
    }
}
