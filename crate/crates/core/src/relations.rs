//! Comparison relations `<_s`, `<=_p`, `<=_d` and the structural
//! properties of positively ordered semigroups, decided three-valued.
//!
//! A property verdict is `No` only with a concrete counterexample whose
//! facts replay on the instance. `Yes` comes either from an exhaustive
//! scan of a finite carrier or from a registered analytic shortcut; a
//! scan of a sample that does not exhaust the carrier ends in `Unknown`.

use std::fmt;

use crate::arith::{ceil_q, lcm_u64, q, Q};
use crate::budget::SearchBudget;
use crate::cuz::{CuZ, Ext};
use crate::elem::Elem;
use crate::error::{CoreError, CoreResult};
use crate::instance::{Backend, Instance};
use crate::lattice::{dot, rank};
use crate::verdict::{Bound, Fact, Tri, Verdict};
use crate::vector::OrderMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyId {
    Finiteness,
    StrongFiniteness,
    Preminimal,
    Separative,
    OrderSeparative,
    NearlySeparative,
    Cancellative,
    OrderCancellative,
    CancellationIntoIdeals,
    OrderCancellationIntoIdeals,
    StrongOrderCancellationIntoIdeals,
    Refinement,
    AlmostDivisible,
    WeaklyDivisible,
    AlmostUnperforated,
    NearlyUnperforated,
    AlgebraicallyOrdered,
    Simple,
}

impl PropertyId {
    pub const ALL: [PropertyId; 18] = [
        PropertyId::Finiteness,
        PropertyId::StrongFiniteness,
        PropertyId::Preminimal,
        PropertyId::Separative,
        PropertyId::OrderSeparative,
        PropertyId::NearlySeparative,
        PropertyId::Cancellative,
        PropertyId::OrderCancellative,
        PropertyId::CancellationIntoIdeals,
        PropertyId::OrderCancellationIntoIdeals,
        PropertyId::StrongOrderCancellationIntoIdeals,
        PropertyId::Refinement,
        PropertyId::AlmostDivisible,
        PropertyId::WeaklyDivisible,
        PropertyId::AlmostUnperforated,
        PropertyId::NearlyUnperforated,
        PropertyId::AlgebraicallyOrdered,
        PropertyId::Simple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::Finiteness => "Finiteness",
            PropertyId::StrongFiniteness => "StrongFiniteness",
            PropertyId::Preminimal => "Preminimal",
            PropertyId::Separative => "Separative",
            PropertyId::OrderSeparative => "OrderSeparative",
            PropertyId::NearlySeparative => "NearlySeparative",
            PropertyId::Cancellative => "Cancellative",
            PropertyId::OrderCancellative => "OrderCancellative",
            PropertyId::CancellationIntoIdeals => "CancellationIntoIdeals",
            PropertyId::OrderCancellationIntoIdeals => "OrderCancellationIntoIdeals",
            PropertyId::StrongOrderCancellationIntoIdeals => "StrongOrderCancellationIntoIdeals",
            PropertyId::Refinement => "Refinement",
            PropertyId::AlmostDivisible => "AlmostDivisible",
            PropertyId::WeaklyDivisible => "WeaklyDivisible",
            PropertyId::AlmostUnperforated => "AlmostUnperforated",
            PropertyId::NearlyUnperforated => "NearlyUnperforated",
            PropertyId::AlgebraicallyOrdered => "AlgebraicallyOrdered",
            PropertyId::Simple => "Simple",
        }
    }

    /// `AlmostUnperforated` becomes `almost-unperforated`.
    pub fn kebab(self) -> String {
        let mut out = String::new();
        for (i, c) in self.name().chars().enumerate() {
            if c.is_ascii_uppercase() {
                if i > 0 {
                    out.push('-');
                }
                out.push(c.to_ascii_lowercase());
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Accepts the CamelCase name or the kebab/snake form, case-insensitively.
    pub fn parse(s: &str) -> Option<PropertyId> {
        let norm = |t: &str| t.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        let k = norm(s);
        PropertyId::ALL.into_iter().find(|p| norm(p.name()) == k)
    }

    /// The quantified formula the property stands for. Free variables
    /// range over the carrier, `n` over positive integers.
    pub fn formula(self) -> &'static str {
        match self {
            PropertyId::Finiteness => "x + y = x ⟹ y = 0",
            PropertyId::StrongFiniteness => "x + z ≤ z + v ⟹ x ∈ I(v)",
            PropertyId::Preminimal => "x + v ≤ y + v ∧ v ≤ w ⟹ x + w ≤ y + w",
            PropertyId::Separative => "2x = x + y = 2y ⟹ x = y",
            PropertyId::OrderSeparative => "Preminimal ∧ Separative ∧ (x + y ≤ 2y ⟹ x ≤ y)",
            PropertyId::NearlySeparative => "Preminimal ∧ (2x ≤ x + y ≤ 2y ⟹ x ≤ y)",
            PropertyId::Cancellative => "x + z = y + z ⟹ x = y",
            PropertyId::OrderCancellative => "x + z ≤ y + z ⟹ x ≤ y",
            PropertyId::CancellationIntoIdeals => "x + z = y + z ⟹ ∃ v ∈ I(x + y): x + v = y + v",
            PropertyId::OrderCancellationIntoIdeals => {
                "CancellationIntoIdeals ∧ (x + z ≤ y + z ⟹ ∃ v ∈ I(x + y): x + v ≤ y + v)"
            }
            PropertyId::StrongOrderCancellationIntoIdeals => {
                "x + z ≤ y + z ∧ x ∈ I(y) ⟹ ∃ v ∈ I(x): x + v ≤ y + v"
            }
            PropertyId::Refinement => {
                "x1 + x2 = y1 + y2 ⟹ ∃ z11, z12, z21, z22: xi = zi1 + zi2, yj = z1j + z2j"
            }
            PropertyId::AlmostDivisible => "∀ n ∃ z: n·z ≤ x ≤ (n+1)·z",
            PropertyId::WeaklyDivisible => "∀ n ∃ y, z: x = n·y + (n+1)·z",
            PropertyId::AlmostUnperforated => "(n+1)·x ≤ n·y for some n ⟹ x ≤ y",
            PropertyId::NearlyUnperforated => "n·x ≤ n·y ∧ (n+1)·x ≤ (n+1)·y for some n ⟹ x ≤ y",
            PropertyId::AlgebraicallyOrdered => "x ≤ y ⟹ ∃ z: x + z = y",
            PropertyId::Simple => "x ≠ 0 ⟹ ∀ y ∃ n: y ≤ n·x",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Auxiliary formulas that appear only inside implications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aux {
    /// `x + z ≤ y + z ∧ z ∈ I(x) ∧ z ∈ I(y) ⟹ x ≤ y`
    IdealSeparation,
    /// `x + 2z ≤ y + 2z ⟹ x + z ≤ y + z`
    HalvingCancellation,
    /// `x + z ≤ y + z ⟹ x ∈ I(y)`
    IdealMonotone,
}

impl Aux {
    pub fn name(self) -> &'static str {
        match self {
            Aux::IdealSeparation => "IdealSeparation",
            Aux::HalvingCancellation => "HalvingCancellation",
            Aux::IdealMonotone => "IdealMonotone",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Aux::IdealSeparation => "x + z ≤ y + z ∧ z ∈ I(x) ∧ z ∈ I(y) ⟹ x ≤ y",
            Aux::HalvingCancellation => "x + 2z ≤ y + 2z ⟹ x + z ≤ y + z",
            Aux::IdealMonotone => "x + z ≤ y + z ⟹ x ∈ I(y)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(PropertyId),
    Aux(Aux),
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::Prop(p) => p.name(),
            Formula::Aux(a) => a.name(),
        }
    }
}

// ---- relations --------------------------------------------------------------

fn found_s(m: &Instance, x: &Elem, y: &Elem, n: u64) -> Verdict {
    Verdict::yes("(n+1)x <= ny").with_n(n).fact(Fact::Leq(m.mul(n + 1, x), m.mul(n, y)))
}

fn found_p(m: &Instance, x: &Elem, y: &Elem, n: u64) -> Verdict {
    Verdict::yes("nx <= ny and (n+1)x <= (n+1)y")
        .with_n(n)
        .fact(Fact::Leq(m.mul(n, x), m.mul(n, y)))
        .fact(Fact::Leq(m.mul(n + 1, x), m.mul(n + 1, y)))
}

fn s_holds(m: &Instance, x: &Elem, y: &Elem, n: u64, b: &SearchBudget) -> Tri {
    m.leq_tri(&m.mul(n + 1, x), &m.mul(n, y), b)
}

fn p_holds(m: &Instance, x: &Elem, y: &Elem, n: u64, b: &SearchBudget) -> Tri {
    let first = m.leq_tri(&m.mul(n, x), &m.mul(n, y), b);
    if first.is_no() {
        return Tri::No;
    }
    first.and(m.leq_tri(&m.mul(n + 1, x), &m.mul(n + 1, y), b))
}

/// Scan range covering every residue of the pair of multiple sequences.
fn cycle_range(m: &Instance, x: &Elem, y: &Elem) -> Option<u64> {
    let (ix, px) = m.cycle(x)?;
    let (iy, py) = m.cycle(y)?;
    Some(ix.max(iy) + lcm_u64(px, py) + 1)
}

/// Tries `n` in `range` with `test`; `exhaustive` says whether the range
/// provably covers every `n`.
fn scan_n(
    range: impl Iterator<Item = u64>,
    exhaustive: bool,
    mut test: impl FnMut(u64) -> Tri,
    hit: impl Fn(u64) -> Verdict,
    what: &str,
    last: u64,
) -> Verdict {
    let mut undecided = false;
    for n in range {
        match test(n) {
            Tri::Yes => return hit(n),
            Tri::Unknown => undecided = true,
            Tri::No => {}
        }
    }
    if exhaustive && !undecided {
        Verdict::no(format!("{what}: multiples cycle, every residue checked")).reached(last)
    } else {
        Verdict::unknown(Bound::NMax, format!("{what}: no witness up to n = {last}")).reached(last)
    }
}

/// `x <_s y`: `(n+1)x <= ny` for some `n >= 1`.
pub fn rel_s(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    m.memo(&format!("rel_s:{x}:{y}"), b, || rel_s_uncached(m, x, y, b))
}

fn rel_s_uncached(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    if m.is_zero(x).is_yes() {
        return found_s(m, x, y, 1);
    }
    match (&m.backend, x, y) {
        (Backend::Vector(v), Elem::Vec(xv), Elem::Vec(yv)) => match &v.order_mode {
            OrderMode::Algebraic => {
                for d in &v.functionals {
                    let (dx, dy) = (dot(d, xv), dot(d, yv));
                    if dy < dx || (dy == dx && dx > 0) {
                        return Verdict::no(format!(
                            "functional {d:?} takes {dx} on x and {dy} on y, so n*y - (n+1)*x leaves the cone"
                        ));
                    }
                }
                scan_n(1..=b.n_max, false, |n| s_holds(m, x, y, n, b), |n| found_s(m, x, y, n), "<_s", b.n_max)
            }
            OrderMode::Coordinatewise => {
                let mut n = 1i64;
                for (i, (&a, &c)) in xv.iter().zip(yv).enumerate() {
                    if c < a || (a == c && a > 0) {
                        return Verdict::no(format!("coordinate {i}: (n+1)*{a} > n*{c} for every n"));
                    }
                    if a > 0 {
                        n = n.max((a + (c - a) - 1) / (c - a));
                    }
                }
                found_s(m, x, y, n as u64)
            }
            OrderMode::Linear(_) => {
                let (vx, vy) = (v.value(xv).unwrap(), v.value(yv).unwrap());
                if vx >= vy {
                    return Verdict::no(format!("value {vx} of x is not below value {vy} of y"));
                }
                // (n+1) v(x) < n v(y) for every n past v(x) / (v(y) - v(x)).
                let mut n = 1u64;
                loop {
                    if s_holds(m, x, y, n, b).is_yes() {
                        return found_s(m, x, y, n);
                    }
                    n += 1;
                }
            }
        },
        (Backend::CuZ, Elem::Cu(xc), Elem::Cu(yc)) => {
            if *yc == CuZ::Soft(Ext::Inf) {
                return found_s(m, x, y, 1);
            }
            if *xc == CuZ::Soft(Ext::Inf) {
                return Verdict::no("inf' is below no finite multiple");
            }
            if xc.value() < yc.value() {
                let mut n = 1u64;
                loop {
                    if s_holds(m, x, y, n, b).is_yes() {
                        return found_s(m, x, y, n);
                    }
                    n += 1;
                }
            }
            Verdict::no("the value of x is not below the value of y")
        }
        (Backend::QPlus, Elem::Rat(a), Elem::Rat(c)) => {
            if a >= c {
                return Verdict::no("x >= y > 0 rules out (n+1)x <= ny");
            }
            let n = ceil_q(&(a / (c - a))).max(1);
            found_s(m, x, y, n as u64)
        }
        (Backend::DirectSum(l, r), Elem::Pair(x1, x2), Elem::Pair(y1, y2)) => {
            let (a, c) = (rel_s(l, x1, y1, b), rel_s(r, x2, y2, b));
            if a.is_no() {
                return Verdict::no(format!("first component: {}", a.certificate.summary));
            }
            if c.is_no() {
                return Verdict::no(format!("second component: {}", c.certificate.summary));
            }
            if !(a.is_yes() && c.is_yes()) {
                return Verdict::unknown(Bound::NMax, "a component is undecided");
            }
            // {n+1 : (n+1)x <= ny} is additive, so (n1+1)(n2+1)-1 works.
            let (n1, n2) = (a.certificate.n.unwrap_or(1), c.certificate.n.unwrap_or(1));
            let hi = (n1 + 1) * (n2 + 1) - 1;
            scan_n(1..=hi, true, |n| s_holds(m, x, y, n, b), |n| found_s(m, x, y, n), "<_s", hi)
        }
        (Backend::PrincipalIdeal { parent, .. }, _, _) => rel_s(parent, x, y, b),
        _ => match cycle_range(m, x, y) {
            Some(hi) => scan_n(1..=hi, true, |n| s_holds(m, x, y, n, b), |n| found_s(m, x, y, n), "<_s", hi),
            None => scan_n(1..=b.n_max, false, |n| s_holds(m, x, y, n, b), |n| found_s(m, x, y, n), "<_s", b.n_max),
        },
    }
}

/// `x <=_p y`: `nx <= ny` and `(n+1)x <= (n+1)y` for some `n >= 1`.
pub fn rel_p(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    m.memo(&format!("rel_p:{x}:{y}"), b, || rel_p_uncached(m, x, y, b))
}

fn rel_p_uncached(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    if m.leq_tri(x, y, b).is_yes() {
        return found_p(m, x, y, 1);
    }
    let unperforated = |what: &str| {
        Verdict::no(format!("{what}: n*x <= n*y already forces x <= y")).fact(Fact::NotLeq(x.clone(), y.clone()))
    };
    match (&m.backend, x, y) {
        (Backend::Vector(v), Elem::Vec(xv), Elem::Vec(yv)) => match &v.order_mode {
            OrderMode::Algebraic => {
                let g: Vec<i64> = yv.iter().zip(xv).map(|(p, q)| p - q).collect();
                let a = v.au_member(&g, b);
                match (a.value, a.certificate.n) {
                    (Tri::Yes, Some(n)) => found_p(m, x, y, n),
                    (Tri::No, _) => Verdict::no(format!("y - x: {}", a.certificate.summary)),
                    _ => Verdict::unknown(Bound::NMax, format!("y - x: {}", a.certificate.summary)).reached(b.n_max),
                }
            }
            OrderMode::Coordinatewise => unperforated("coordinatewise order"),
            OrderMode::Linear(_) => unperforated("order by a positive linear value"),
        },
        (Backend::CuZ, _, _) => unperforated("Z"),
        (Backend::QPlus, _, _) => unperforated("Q+"),
        (Backend::DirectSum(l, r), Elem::Pair(x1, x2), Elem::Pair(y1, y2)) => {
            let (a, c) = (rel_p(l, x1, y1, b), rel_p(r, x2, y2, b));
            if a.is_no() {
                return Verdict::no(format!("first component: {}", a.certificate.summary));
            }
            if c.is_no() {
                return Verdict::no(format!("second component: {}", c.certificate.summary));
            }
            if !(a.is_yes() && c.is_yes()) {
                return Verdict::unknown(Bound::NMax, "a component is undecided");
            }
            // Good multiples of each component form an additive set with
            // n_i and n_i + 1, so every k >= n_i^2 - n_i is good.
            let (n1, n2) = (a.certificate.n.unwrap_or(1), c.certificate.n.unwrap_or(1));
            let hi = [n1, n2, n1 * n1 - n1, n2 * n2 - n2].into_iter().max().unwrap();
            scan_n(1..=hi, true, |n| p_holds(m, x, y, n, b), |n| found_p(m, x, y, n), "<=_p", hi)
        }
        (Backend::PrincipalIdeal { parent, .. }, _, _) => rel_p(parent, x, y, b),
        _ => match cycle_range(m, x, y) {
            Some(hi) => scan_n(1..=hi, true, |n| p_holds(m, x, y, n, b), |n| found_p(m, x, y, n), "<=_p", hi),
            None => {
                scan_n(1..=b.n_max, false, |n| p_holds(m, x, y, n, b), |n| found_p(m, x, y, n), "<=_p", b.n_max)
            }
        },
    }
}

/// `x <=_d y`: `x = x1 + x2`, `y = y1 + y2` with `x1 <= y1` and `x2 <_s y2`.
pub fn rel_d(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    m.memo(&format!("rel_d:{x}:{y}"), b, || rel_d_uncached(m, x, y, b))
}

fn rel_d_uncached(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    let z = m.zero();
    let hit = |x1: &Elem, x2: &Elem, y1: &Elem, y2: &Elem, s: &Verdict| {
        let mut v = Verdict::yes("x1 <= y1 and x2 <_s y2")
            .witness("x1", x1.clone())
            .witness("x2", x2.clone())
            .witness("y1", y1.clone())
            .witness("y2", y2.clone())
            .fact(Fact::Eq(m.plus(x1, x2), x.clone()))
            .fact(Fact::Eq(m.plus(y1, y2), y.clone()))
            .fact(Fact::Leq(x1.clone(), y1.clone()))
            .facts(s.certificate.facts.iter().cloned());
        if let Some(n) = s.certificate.n {
            v = v.with_n(n);
        }
        v
    };
    if m.leq_tri(x, y, b).is_yes() {
        let s = rel_s(m, &z, &z, b);
        return hit(x, &z, y, &z, &s);
    }
    let (dx, dy, exact) = match (m.decompositions(x), m.decompositions(y)) {
        (Some(a), Some(c)) => (a, c, true),
        _ => {
            let s = m.sample(b).elems;
            let split = |t: &Elem| -> Vec<(Elem, Elem)> {
                let mut out = Vec::new();
                for p in &s {
                    for r in &s {
                        if m.eq_tri(&m.plus(p, r), t).is_yes() {
                            out.push((p.clone(), r.clone()));
                        }
                    }
                }
                out
            };
            (split(x), split(y), false)
        }
    };
    let mut undecided = !exact;
    for (x1, x2) in &dx {
        for (y1, y2) in &dy {
            match m.leq_tri(x1, y1, b) {
                Tri::No => continue,
                Tri::Unknown => {
                    undecided = true;
                    continue;
                }
                Tri::Yes => {}
            }
            let s = rel_s(m, x2, y2, b);
            match s.value {
                Tri::Yes => return hit(x1, x2, y1, y2, &s),
                Tri::Unknown => undecided = true,
                Tri::No => {}
            }
        }
    }
    if undecided {
        Verdict::unknown(Bound::SampleBox, "no decomposition witness found")
    } else {
        Verdict::no(format!("all {} x {} decompositions checked", dx.len(), dy.len()))
    }
}

// ---- property engine --------------------------------------------------------

pub fn check_property(m: &Instance, p: PropertyId, b: &SearchBudget) -> Verdict {
    check_property_with(m, p, b, true)
}

/// As [`check_property`], optionally without analytic shortcuts, so that
/// shortcut answers can be cross-checked against the search.
pub fn check_property_with(m: &Instance, p: PropertyId, b: &SearchBudget, use_shortcuts: bool) -> Verdict {
    m.memo(&format!("prop:{}:{}", p.name(), use_shortcuts), b, || evaluate(m, Formula::Prop(p), b, use_shortcuts))
}

/// Like [`check_property`], but reports pairs with no decision route.
pub fn try_check_property(m: &Instance, p: PropertyId, b: &SearchBudget) -> CoreResult<Verdict> {
    if shortcut(m, p, b).is_none() && m.sample(b).elems.is_empty() {
        return Err(CoreError::UnsupportedProperty { property: p.name().into(), backend: m.kind().into() });
    }
    Ok(check_property(m, p, b))
}

pub fn check_aux(m: &Instance, a: Aux, b: &SearchBudget) -> Verdict {
    m.memo(&format!("aux:{}", a.name()), b, || evaluate(m, Formula::Aux(a), b, true))
}

pub fn check_formula(m: &Instance, f: Formula, b: &SearchBudget) -> Verdict {
    match f {
        Formula::Prop(p) => check_property(m, p, b),
        Formula::Aux(a) => check_aux(m, a, b),
    }
}

fn evaluate(m: &Instance, f: Formula, b: &SearchBudget, use_shortcuts: bool) -> Verdict {
    if let Formula::Prop(p) = f {
        if use_shortcuts {
            if let Some(v) = shortcut(m, p, b) {
                return v;
            }
        }
        match p {
            PropertyId::OrderSeparative => {
                return conjoin(
                    m,
                    b,
                    use_shortcuts,
                    &[PropertyId::Preminimal, PropertyId::Separative],
                    |s| s.order_separative_core(),
                )
            }
            PropertyId::NearlySeparative => {
                return conjoin(m, b, use_shortcuts, &[PropertyId::Preminimal], |s| s.nearly_separative_core())
            }
            PropertyId::OrderCancellationIntoIdeals => {
                return conjoin(m, b, use_shortcuts, &[PropertyId::CancellationIntoIdeals], |s| s.oci_core())
            }
            _ => {}
        }
    }
    let sample = m.sample(b);
    let s = Scan::new(m, b, sample.elems, sample.exhaustive);
    match f {
        Formula::Prop(p) => s.run(p),
        Formula::Aux(Aux::IdealSeparation) => s.ideal_separation(),
        Formula::Aux(Aux::HalvingCancellation) => s.halving(),
        Formula::Aux(Aux::IdealMonotone) => s.ideal_monotone(),
    }
}

/// Conjunction of sub-properties with a formula of its own.
fn conjoin(
    m: &Instance,
    b: &SearchBudget,
    use_shortcuts: bool,
    parts: &[PropertyId],
    core: impl FnOnce(&Scan) -> Verdict,
) -> Verdict {
    let mut all_yes = true;
    for &p in parts {
        let v = check_property_with(m, p, b, use_shortcuts);
        match v.value {
            Tri::No => {
                let mut out = v.clone();
                out.certificate.summary = format!("{} fails: {}", p.name(), v.certificate.summary).into();
                return out;
            }
            Tri::Unknown => all_yes = false,
            Tri::Yes => {}
        }
    }
    let sample = m.sample(b);
    let s = Scan::new(m, b, sample.elems, sample.exhaustive);
    let v = core(&s);
    if v.is_no() || (all_yes && v.is_yes()) {
        return v;
    }
    Verdict::unknown(v.certificate.bound.unwrap_or(Bound::SampleBox), "a conjunct is undecided")
}

// ---- analytic shortcuts -----------------------------------------------------

/// Properties that hold for every cancellative monoid whose order is
/// cancellative in the sense `x + z <= y + z ⟹ x <= y`.
const ORDER_CANCELLATIVE_FAMILY: [PropertyId; 11] = [
    PropertyId::Finiteness,
    PropertyId::StrongFiniteness,
    PropertyId::Preminimal,
    PropertyId::Separative,
    PropertyId::OrderSeparative,
    PropertyId::NearlySeparative,
    PropertyId::Cancellative,
    PropertyId::OrderCancellative,
    PropertyId::CancellationIntoIdeals,
    PropertyId::OrderCancellationIntoIdeals,
    PropertyId::StrongOrderCancellationIntoIdeals,
];

/// Registered per-backend arguments. Each returns only `Yes`; failures
/// always come from the counterexample search.
pub fn shortcut(m: &Instance, p: PropertyId, b: &SearchBudget) -> Option<Verdict> {
    use PropertyId::*;
    let yes = |why: &str| Some(Verdict::yes(format!("analytic: {why}")));
    let family = ORDER_CANCELLATIVE_FAMILY.contains(&p);
    match &m.backend {
        Backend::QPlus => yes("Q+ is a divisible, totally ordered cancellative cone"),
        Backend::CuZ => match p {
            AlmostUnperforated => yes("(n+1)x <= ny in Z forces the value of x below that of y"),
            AlmostDivisible => yes("z = x/n as a soft element, or z = 0 for x = 0"),
            _ => None,
        },
        Backend::Vector(v) => {
            let free = v.is_free();
            match &v.order_mode {
                OrderMode::Algebraic => {
                    if family || p == AlgebraicallyOrdered {
                        return yes("algebraic order on a pointed submonoid of Z^d");
                    }
                    if free && matches!(p, Refinement | AlmostUnperforated | NearlyUnperforated) {
                        return yes("N^d is a lattice-ordered free monoid");
                    }
                    if p == Simple && rank(&v.generators, v.dim) == 1 {
                        return yes("generators on one ray: every nonzero element is an order unit");
                    }
                    None
                }
                OrderMode::Coordinatewise => {
                    if family || matches!(p, AlmostUnperforated | NearlyUnperforated) {
                        return yes("coordinatewise order on a submonoid of N^d");
                    }
                    None
                }
                OrderMode::Linear(_) => {
                    if family || matches!(p, AlmostUnperforated | NearlyUnperforated | Simple) {
                        return yes("order by a strictly positive linear value");
                    }
                    None
                }
            }
        }
        Backend::DirectSum(l, r) if p != Simple => {
            if check_property(l, p, b).is_yes() && check_property(r, p, b).is_yes() {
                return yes("holds in both summands and transfers componentwise");
            }
            None
        }
        Backend::AuHull(_) => {
            if family || p == AlgebraicallyOrdered {
                return yes("a strict cone in a group, ordered by the cone");
            }
            None
        }
        Backend::TensorOne(par) => {
            let hyp = [AlgebraicallyOrdered, Cancellative].iter().all(|&h| check_property(par, h, b).is_yes())
                && (check_property(par, Simple, b).is_yes() || check_property(par, Refinement, b).is_yes());
            if hyp && check_property(par, NearlyUnperforated, b).is_yes() {
                let v = check_property(par, p, b);
                if v.is_yes() {
                    return yes("x ↦ x⊗1 is an order isomorphism here, and the parent has the property");
                }
            }
            if hyp && matches!(p, OrderCancellative | NearlyUnperforated) {
                return yes("algebraic, cancellative, simple or refinement parent");
            }
            None
        }
        _ => None,
    }
}

// ---- counterexample search --------------------------------------------------

/// Exact list containing every `z <= x`, when one is available.
pub fn downset(m: &Instance, x: &Elem) -> Option<Vec<Elem>> {
    if let Some(c) = m.carrier() {
        return Some(c);
    }
    match (&m.backend, x) {
        (Backend::Vector(v), Elem::Vec(xv)) => match &v.order_mode {
            OrderMode::Algebraic => Some(v.elements_upto(v.ell(xv)?)?.into_iter().map(Elem::Vec).collect()),
            OrderMode::Coordinatewise => {
                let ell = v.positive.as_ref()?;
                let bound: i128 = ell.iter().zip(xv).map(|(&l, &c)| (l.max(0) as i128) * c as i128).sum();
                let all = v.elements_upto(bound)?;
                Some(all.into_iter().filter(|z| z.iter().zip(xv).all(|(a, c)| a <= c)).map(Elem::Vec).collect())
            }
            OrderMode::Linear(_) => {
                Some(v.elements_value_upto(&v.value(xv)?)?.into_iter().map(Elem::Vec).collect())
            }
        },
        (Backend::CuZ, Elem::Cu(CuZ::Compact(n))) => Some((0..=*n).map(|k| Elem::Cu(CuZ::Compact(k))).collect()),
        (Backend::DirectSum(l, r), Elem::Pair(a, c)) => {
            let (da, dc) = (downset(l, a)?, downset(r, c)?);
            Some(da.iter().flat_map(|p| dc.iter().map(move |s| Elem::pair(p.clone(), s.clone()))).collect())
        }
        (Backend::PrincipalIdeal { parent, .. }, _) => downset(parent, x),
        _ => None,
    }
}

struct Scan<'a> {
    m: &'a Instance,
    b: SearchBudget,
    s: Vec<Elem>,
    exhaustive: bool,
}

/// Outcome of one quantified scan.
struct Tally {
    undecided: bool,
    exhaustive: bool,
    steps: u64,
}

impl Tally {
    fn finish(self, what: &str) -> Verdict {
        if self.exhaustive && !self.undecided {
            Verdict::yes(format!("{what}: every tuple of the carrier checked")).steps(self.steps)
        } else if self.undecided {
            Verdict::unknown(Bound::NMax, format!("{what}: no counterexample, some tuples undecided")).steps(self.steps)
        } else {
            Verdict::unknown(Bound::SampleBox, format!("{what}: no counterexample in the sample")).steps(self.steps)
        }
    }
}

impl<'a> Scan<'a> {
    fn new(m: &'a Instance, b: &SearchBudget, s: Vec<Elem>, exhaustive: bool) -> Scan<'a> {
        Scan { m, b: *b, s, exhaustive }
    }

    /// The sample cut for a quantifier prefix of the given arity.
    fn slice(&self, arity: usize) -> (&[Elem], Tally) {
        let cap = match (arity, self.exhaustive) {
            (0..=2, _) => usize::MAX,
            (3, true) => 120,
            (3, false) => 60,
            (_, true) => 24,
            (_, false) => 16,
        };
        let k = self.s.len().min(cap);
        (&self.s[..k], Tally { undecided: false, exhaustive: self.exhaustive && k == self.s.len(), steps: 0 })
    }

    fn le(&self, x: &Elem, y: &Elem) -> Tri {
        self.m.leq_tri(x, y, &self.b)
    }

    fn eq(&self, x: &Elem, y: &Elem) -> Tri {
        self.m.eq_tri(x, y)
    }

    fn add(&self, x: &Elem, y: &Elem) -> Elem {
        self.m.plus(x, y)
    }

    fn mul(&self, n: u64, x: &Elem) -> Elem {
        self.m.mul(n, x)
    }

    fn in_ideal(&self, g: &Elem, y: &Elem) -> Tri {
        self.m.in_ideal(g, y, &self.b).value
    }

    /// `∃ v ∈ I(g)` with `rel(v)`, trying `0` first and then the sample.
    fn exists_in_ideal(&self, g: &Elem, rel: impl Fn(&Elem) -> Tri) -> Tri {
        let zero = self.m.zero();
        let mut undecided = false;
        for v in std::iter::once(&zero).chain(self.s.iter()) {
            let r = rel(v);
            if r.is_no() {
                continue;
            }
            let i = self.in_ideal(g, v);
            match r.and(i) {
                Tri::Yes => return Tri::Yes,
                Tri::Unknown => undecided = true,
                Tri::No => {}
            }
        }
        if self.exhaustive && !undecided {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    fn run(&self, p: PropertyId) -> Verdict {
        use PropertyId::*;
        match p {
            Finiteness => self.finiteness(),
            StrongFiniteness => self.strong_finiteness(),
            Preminimal => self.preminimal(),
            Separative => self.separative(),
            OrderSeparative => self.order_separative_core(),
            NearlySeparative => self.nearly_separative_core(),
            Cancellative => self.cancellative(),
            OrderCancellative => self.order_cancellative(),
            CancellationIntoIdeals => self.ci(),
            OrderCancellationIntoIdeals => self.oci_core(),
            StrongOrderCancellationIntoIdeals => self.soci(),
            Refinement => self.refinement(),
            AlmostDivisible => self.almost_divisible(),
            WeaklyDivisible => self.weakly_divisible(),
            AlmostUnperforated => self.almost_unperforated(),
            NearlyUnperforated => self.nearly_unperforated(),
            AlgebraicallyOrdered => self.algebraically_ordered(),
            Simple => self.simple(),
        }
    }

    /// Classifies one tuple: conclusion first, then hypothesis.
    fn judge(t: &mut Tally, concl: impl FnOnce() -> Tri, hyp: impl FnOnce() -> Tri) -> bool {
        t.steps += 1;
        let c = concl();
        if c.is_yes() {
            return false;
        }
        let h = hyp();
        if h.is_no() {
            return false;
        }
        if h.is_yes() && c.is_no() {
            return true;
        }
        t.undecided = true;
        false
    }

    fn finiteness(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                if Self::judge(&mut t, || self.m.is_zero(y), || self.eq(&self.add(x, y), x)) {
                    return Verdict::no("x + y = x with y nonzero")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .fact(Fact::Eq(self.add(x, y), x.clone()))
                        .fact(Fact::Ne(y.clone(), self.m.zero()));
                }
            }
        }
        t.finish("Finiteness")
    }

    fn strong_finiteness(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for z in s {
                for v in s {
                    let (l, r) = (self.add(x, z), self.add(z, v));
                    if Self::judge(&mut t, || self.in_ideal(v, x), || self.le(&l, &r)) {
                        return Verdict::no("x + z <= z + v but x is outside I(v)")
                            .witness("x", x.clone())
                            .witness("z", z.clone())
                            .witness("v", v.clone())
                            .fact(Fact::Leq(l, r));
                    }
                }
            }
        }
        t.finish("StrongFiniteness")
    }

    fn preminimal(&self) -> Verdict {
        let (s, mut t) = self.slice(4);
        for x in s {
            for y in s {
                for v in s {
                    let (xv, yv) = (self.add(x, v), self.add(y, v));
                    if self.le(&xv, &yv).is_no() {
                        continue;
                    }
                    for w in s {
                        let (xw, yw) = (self.add(x, w), self.add(y, w));
                        let hyp = || self.le(&xv, &yv).and(self.le(v, w));
                        if Self::judge(&mut t, || self.le(&xw, &yw), hyp) {
                            return Verdict::no("x + v <= y + v and v <= w, but x + w is not below y + w")
                                .witness("x", x.clone())
                                .witness("y", y.clone())
                                .witness("v", v.clone())
                                .witness("w", w.clone())
                                .fact(Fact::Leq(xv.clone(), yv.clone()))
                                .fact(Fact::Leq(v.clone(), w.clone()))
                                .fact(Fact::NotLeq(xw, yw));
                        }
                    }
                }
            }
        }
        t.finish("Preminimal")
    }

    fn separative(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                let (xx, xy, yy) = (self.mul(2, x), self.add(x, y), self.mul(2, y));
                if Self::judge(&mut t, || self.eq(x, y), || self.eq(&xx, &xy).and(self.eq(&xy, &yy))) {
                    return Verdict::no("2x = x + y = 2y with x != y")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .fact(Fact::Eq(xx, xy.clone()))
                        .fact(Fact::Eq(xy, yy))
                        .fact(Fact::Ne(x.clone(), y.clone()));
                }
            }
        }
        t.finish("Separative")
    }

    fn order_separative_core(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                let (xy, yy) = (self.add(x, y), self.mul(2, y));
                if Self::judge(&mut t, || self.le(x, y), || self.le(&xy, &yy)) {
                    return Verdict::no("x + y <= 2y but x is not below y")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .fact(Fact::Leq(xy, yy))
                        .fact(Fact::NotLeq(x.clone(), y.clone()));
                }
            }
        }
        t.finish("x + y <= 2y ⟹ x <= y")
    }

    fn nearly_separative_core(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                let (xx, xy, yy) = (self.mul(2, x), self.add(x, y), self.mul(2, y));
                if Self::judge(&mut t, || self.le(x, y), || self.le(&xx, &xy).and(self.le(&xy, &yy))) {
                    return Verdict::no("2x <= x + y <= 2y but x is not below y")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .fact(Fact::Leq(xx, xy.clone()))
                        .fact(Fact::Leq(xy, yy))
                        .fact(Fact::NotLeq(x.clone(), y.clone()));
                }
            }
        }
        t.finish("2x <= x + y <= 2y ⟹ x <= y")
    }

    fn cancellative(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if x == y {
                    continue;
                }
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    if Self::judge(&mut t, || self.eq(x, y), || self.eq(&xz, &yz)) {
                        return Verdict::no("x + z = y + z with x != y")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Eq(xz, yz))
                            .fact(Fact::Ne(x.clone(), y.clone()));
                    }
                }
            }
        }
        t.finish("Cancellative")
    }

    fn order_cancellative(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if self.le(x, y).is_yes() {
                    continue;
                }
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    if Self::judge(&mut t, || self.le(x, y), || self.le(&xz, &yz)) {
                        return Verdict::no("x + z <= y + z but x is not below y")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Leq(xz, yz))
                            .fact(Fact::NotLeq(x.clone(), y.clone()));
                    }
                }
            }
        }
        t.finish("OrderCancellative")
    }

    fn ci(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if x == y {
                    continue;
                }
                let g = self.add(x, y);
                let mut cached: Option<Tri> = None;
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    let concl = || {
                        *cached.get_or_insert_with(|| {
                            self.exists_in_ideal(&g, |v| self.eq(&self.add(x, v), &self.add(y, v)))
                        })
                    };
                    if Self::judge(&mut t, concl, || self.eq(&xz, &yz)) {
                        return Verdict::no("x + z = y + z, but no v in I(x + y) has x + v = y + v")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Eq(xz, yz))
                            .fact(Fact::Ne(x.clone(), y.clone()));
                    }
                }
            }
        }
        t.finish("CancellationIntoIdeals")
    }

    fn oci_core(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if self.le(x, y).is_yes() {
                    continue;
                }
                let g = self.add(x, y);
                let mut cached: Option<Tri> = None;
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    let concl = || {
                        *cached.get_or_insert_with(|| {
                            self.exists_in_ideal(&g, |v| self.le(&self.add(x, v), &self.add(y, v)))
                        })
                    };
                    if Self::judge(&mut t, concl, || self.le(&xz, &yz)) {
                        return Verdict::no("x + z <= y + z, but no v in I(x + y) has x + v <= y + v")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Leq(xz, yz))
                            .fact(Fact::NotLeq(x.clone(), y.clone()));
                    }
                }
            }
        }
        t.finish("x + z <= y + z ⟹ ∃ v ∈ I(x + y): x + v <= y + v")
    }

    fn soci(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if self.le(x, y).is_yes() {
                    continue;
                }
                let mut cached: Option<Tri> = None;
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    let concl = || {
                        *cached.get_or_insert_with(|| {
                            self.exists_in_ideal(x, |v| self.le(&self.add(x, v), &self.add(y, v)))
                        })
                    };
                    let hyp = || self.le(&xz, &yz).and(self.in_ideal(y, x));
                    if Self::judge(&mut t, concl, hyp) {
                        return Verdict::no("x + z <= y + z with x in I(y), but no v in I(x) has x + v <= y + v")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Leq(xz, yz))
                            .fact(Fact::NotLeq(x.clone(), y.clone()));
                    }
                }
            }
        }
        t.finish("StrongOrderCancellationIntoIdeals")
    }

    fn refinement(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x1 in s {
            for x2 in s {
                let sum = self.add(x1, x2);
                let ys: Vec<(Elem, Elem)> = match self.m.decompositions(&sum) {
                    Some(d) => d,
                    None => {
                        t.exhaustive = false;
                        s.iter()
                            .flat_map(|a| s.iter().map(move |c| (a.clone(), c.clone())))
                            .filter(|(a, c)| self.eq(&self.add(a, c), &sum).is_yes())
                            .collect()
                    }
                };
                let (d1, d2) = (self.m.decompositions(x1), self.m.decompositions(x2));
                for (y1, y2) in &ys {
                    let concl = || -> Tri {
                        let (Some(d1), Some(d2)) = (&d1, &d2) else { return Tri::Unknown };
                        let mut und = false;
                        for (z11, z12) in d1 {
                            for (z21, z22) in d2 {
                                let r = self.eq(&self.add(z11, z21), y1).and(self.eq(&self.add(z12, z22), y2));
                                match r {
                                    Tri::Yes => return Tri::Yes,
                                    Tri::Unknown => und = true,
                                    Tri::No => {}
                                }
                            }
                        }
                        if und {
                            Tri::Unknown
                        } else {
                            Tri::No
                        }
                    };
                    if Self::judge(&mut t, concl, || Tri::Yes) {
                        return Verdict::no("x1 + x2 = y1 + y2 admits no refinement matrix")
                            .witness("x1", x1.clone())
                            .witness("x2", x2.clone())
                            .witness("y1", y1.clone())
                            .witness("y2", y2.clone())
                            .fact(Fact::Eq(sum.clone(), self.add(y1, y2)));
                    }
                }
            }
        }
        t.finish("Refinement")
    }

    /// Multipliers to try for divisibility: every residue on finite
    /// carriers, `1..=sample_box` otherwise.
    fn n_range(&self) -> (u64, bool) {
        if let Some(c) = self.m.carrier() {
            let mut idx = 1;
            let mut per = 1;
            for x in &c {
                if let Some((i, p)) = self.m.cycle(x) {
                    idx = idx.max(i);
                    per = lcm_u64(per, p);
                } else {
                    return (self.b.sample_box as u64, false);
                }
            }
            return (idx + per + 1, true);
        }
        (self.b.sample_box as u64, false)
    }

    fn almost_divisible(&self) -> Verdict {
        let (s, mut t) = self.slice(1);
        let (nmax, full) = self.n_range();
        t.exhaustive &= full;
        for x in s {
            let cands = downset(self.m, x);
            for n in 1..=nmax {
                let test = |z: &Elem| self.le(&self.mul(n, z), x).and(self.le(x, &self.mul(n + 1, z)));
                let concl = || match (&self.m.backend, x, &cands) {
                    (Backend::CuZ, Elem::Cu(c), _) if !c.is_zero() => {
                        let z = match c {
                            CuZ::Compact(k) => CuZ::soft(Q::new(*k as i128, n as i128)),
                            CuZ::Soft(e) => match e {
                                Ext::Fin(r) => CuZ::soft(r / q(n as i128 + 1)),
                                Ext::Inf => CuZ::Soft(Ext::Inf),
                            },
                        };
                        test(&Elem::Cu(z))
                    }
                    (Backend::QPlus, Elem::Rat(r), _) => test(&Elem::Rat(r / q(n as i128 + 1))),
                    (_, _, Some(c)) => exists(c.iter(), true, test),
                    _ => exists(std::iter::once(&self.m.zero()).chain(self.s.iter()), false, test),
                };
                if Self::judge(&mut t, concl, || Tri::Yes) {
                    return Verdict::no("no z with n z <= x <= (n+1) z")
                        .witness("x", x.clone())
                        .with_n(n);
                }
            }
        }
        t.finish("AlmostDivisible")
    }

    fn weakly_divisible(&self) -> Verdict {
        let (s, mut t) = self.slice(1);
        let (nmax, full) = self.n_range();
        t.exhaustive &= full;
        for x in s {
            let cands = downset(self.m, x);
            for n in 1..=nmax {
                let test = |y: &Elem, z: &Elem| self.eq(&self.add(&self.mul(n, y), &self.mul(n + 1, z)), x);
                let concl = || {
                    let soft = match (&self.m.backend, x) {
                        (Backend::QPlus, Elem::Rat(r)) => Some(Elem::Rat(r / q(2 * n as i128 + 1))),
                        (Backend::CuZ, Elem::Cu(CuZ::Soft(Ext::Fin(r)))) => {
                            Some(Elem::Cu(CuZ::soft(r / q(2 * n as i128 + 1))))
                        }
                        (Backend::CuZ, Elem::Cu(CuZ::Soft(Ext::Inf))) => Some(x.clone()),
                        _ => None,
                    };
                    if let Some(w) = soft {
                        return test(&w, &w);
                    }
                    let (pool, exact): (Vec<Elem>, bool) = match &cands {
                        Some(c) => (c.clone(), true),
                        None => (std::iter::once(self.m.zero()).chain(self.s.iter().cloned()).collect(), false),
                    };
                    let mut und = !exact;
                    for y in &pool {
                        for z in &pool {
                            match test(y, z) {
                                Tri::Yes => return Tri::Yes,
                                Tri::Unknown => und = true,
                                Tri::No => {}
                            }
                        }
                    }
                    if und {
                        Tri::Unknown
                    } else {
                        Tri::No
                    }
                };
                if Self::judge(&mut t, concl, || Tri::Yes) {
                    return Verdict::no("x is not n y + (n+1) z for any y, z").witness("x", x.clone()).with_n(n);
                }
            }
        }
        t.finish("WeaklyDivisible")
    }

    fn almost_unperforated(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                let mut rs: Option<Verdict> = None;
                let hyp = || rel_s(self.m, x, y, &self.b).value;
                if Self::judge(&mut t, || self.le(x, y), hyp) {
                    let w = rs.get_or_insert_with(|| rel_s(self.m, x, y, &self.b));
                    let mut v = Verdict::no("(n+1)x <= ny but x is not below y")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .facts(w.certificate.facts.iter().cloned())
                        .fact(Fact::NotLeq(x.clone(), y.clone()));
                    if let Some(n) = w.certificate.n {
                        v = v.with_n(n);
                    }
                    return v;
                }
            }
        }
        t.finish("AlmostUnperforated")
    }

    fn nearly_unperforated(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                let hyp = || rel_p(self.m, x, y, &self.b).value;
                if Self::judge(&mut t, || self.le(x, y), hyp) {
                    let w = rel_p(self.m, x, y, &self.b);
                    let mut v = Verdict::no("nx <= ny and (n+1)x <= (n+1)y but x is not below y")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .facts(w.certificate.facts.iter().cloned())
                        .fact(Fact::NotLeq(x.clone(), y.clone()));
                    if let Some(n) = w.certificate.n {
                        v = v.with_n(n);
                    }
                    return v;
                }
            }
        }
        t.finish("NearlyUnperforated")
    }

    fn algebraically_ordered(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            for y in s {
                let concl = || match (&self.m.backend, x, y) {
                    (Backend::Vector(v), Elem::Vec(a), Elem::Vec(c)) => {
                        let d: Vec<i64> = c.iter().zip(a).map(|(p, q)| p - q).collect();
                        v.contains(&d, &self.b).value
                    }
                    _ => match downset(self.m, y) {
                        Some(c) => exists(c.iter(), true, |z| self.eq(&self.add(x, z), y)),
                        None => exists(self.s.iter(), false, |z| self.eq(&self.add(x, z), y)),
                    },
                };
                if Self::judge(&mut t, concl, || self.le(x, y)) {
                    return Verdict::no("x <= y but no z has x + z = y")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .fact(Fact::Leq(x.clone(), y.clone()));
                }
            }
        }
        t.finish("AlgebraicallyOrdered")
    }

    fn simple(&self) -> Verdict {
        let (s, mut t) = self.slice(2);
        for x in s {
            if self.m.is_zero(x).is_yes() {
                continue;
            }
            for y in s {
                if Self::judge(&mut t, || self.in_ideal(x, y), || self.m.is_zero(x).not()) {
                    return Verdict::no("y is outside the ideal generated by the nonzero x")
                        .witness("x", x.clone())
                        .witness("y", y.clone())
                        .fact(Fact::Ne(x.clone(), self.m.zero()));
                }
            }
        }
        t.finish("Simple")
    }

    fn ideal_separation(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if self.le(x, y).is_yes() {
                    continue;
                }
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    let hyp = || self.le(&xz, &yz).and(self.in_ideal(x, z)).and(self.in_ideal(y, z));
                    if Self::judge(&mut t, || self.le(x, y), hyp) {
                        return Verdict::no("x + z <= y + z with z in I(x) and I(y), but x is not below y")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Leq(xz, yz))
                            .fact(Fact::NotLeq(x.clone(), y.clone()));
                    }
                }
            }
        }
        t.finish("IdealSeparation")
    }

    fn halving(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                for z in s {
                    let z2 = self.mul(2, z);
                    let (a, c) = (self.add(x, &z2), self.add(y, &z2));
                    let (a1, c1) = (self.add(x, z), self.add(y, z));
                    if Self::judge(&mut t, || self.le(&a1, &c1), || self.le(&a, &c)) {
                        return Verdict::no("x + 2z <= y + 2z but x + z is not below y + z")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Leq(a, c))
                            .fact(Fact::NotLeq(a1, c1));
                    }
                }
            }
        }
        t.finish("HalvingCancellation")
    }

    fn ideal_monotone(&self) -> Verdict {
        let (s, mut t) = self.slice(3);
        for x in s {
            for y in s {
                if self.in_ideal(y, x).is_yes() {
                    continue;
                }
                for z in s {
                    let (xz, yz) = (self.add(x, z), self.add(y, z));
                    if Self::judge(&mut t, || self.in_ideal(y, x), || self.le(&xz, &yz)) {
                        return Verdict::no("x + z <= y + z but x is outside I(y)")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .witness("z", z.clone())
                            .fact(Fact::Leq(xz, yz));
                    }
                }
            }
        }
        t.finish("IdealMonotone")
    }
}

/// `∃ c` in `cands` with `test(c)`; `No` only when the candidates are exact.
fn exists<'e>(cands: impl Iterator<Item = &'e Elem>, exact: bool, test: impl Fn(&Elem) -> Tri) -> Tri {
    let mut und = !exact;
    for c in cands {
        match test(c) {
            Tri::Yes => return Tri::Yes,
            Tri::Unknown => und = true,
            Tri::No => {}
        }
    }
    if und {
        Tri::Unknown
    } else {
        Tri::No
    }
}

// ---- implications -----------------------------------------------------------

/// `hypotheses ∧ premise ⟹ conclusion`, each a conjunction.
#[derive(Clone, Debug)]
pub struct Implication {
    pub key: &'static str,
    pub hypotheses: Vec<Formula>,
    pub premise: Vec<Formula>,
    pub conclusion: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// The hypotheses and premise hold but the conclusion fails.
    Fail,
    /// A hypothesis or premise is `No`; names it.
    Vacuous(String),
    Undecided,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::Vacuous(_) => "Vacuous",
            Status::Undecided => "Undecided",
        }
    }

    /// Folds statuses of several implications: any `Fail` wins, then
    /// `Pass`, then `Undecided`; all-vacuous stays vacuous.
    pub fn combine(all: &[Status]) -> Status {
        if all.iter().any(|s| *s == Status::Fail) {
            return Status::Fail;
        }
        if all.iter().any(|s| *s == Status::Pass) {
            return Status::Pass;
        }
        if all.iter().any(|s| *s == Status::Undecided) {
            return Status::Undecided;
        }
        match all.iter().find_map(|s| if let Status::Vacuous(w) = s { Some(w.clone()) } else { None }) {
            Some(w) => Status::Vacuous(w),
            None => Status::Undecided,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Vacuous(w) => write!(f, "Vacuous ({w} is No)"),
            s => f.write_str(s.as_str()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ImplicationResult {
    pub key: &'static str,
    pub status: Status,
    pub values: Vec<(&'static str, Tri)>,
}

fn imp(key: &'static str, hyp: &[Formula], premise: &[Formula], concl: &[Formula]) -> Implication {
    Implication { key, hypotheses: hyp.to_vec(), premise: premise.to_vec(), conclusion: concl.to_vec() }
}

/// Every implication checked by [`implication_suite`], in a fixed order.
pub fn implications() -> Vec<Implication> {
    use PropertyId::*;
    let p = Formula::Prop;
    let (isep, halv, imono) = (Formula::Aux(Aux::IdealSeparation), Formula::Aux(Aux::HalvingCancellation), Formula::Aux(Aux::IdealMonotone));
    vec![
        imp("strongly-finite-ideal-monotone", &[], &[p(StrongFiniteness)], &[imono]),
        imp("algebraic-order-gives-preminimal", &[], &[p(AlgebraicallyOrdered)], &[p(Preminimal)]),
        imp("nearly-separative-gives-ideal-separation", &[], &[p(NearlySeparative)], &[isep]),
        imp("ideal-separation-gives-nearly-separative", &[], &[isep], &[p(NearlySeparative)]),
        imp("ideal-separation-gives-halving", &[], &[isep], &[halv]),
        imp("ideal-separation-gives-preminimal", &[], &[isep], &[p(Preminimal)]),
        imp("nearly-separative-gives-separative", &[], &[p(NearlySeparative)], &[p(Separative)]),
        imp(
            "cancellative-gives-separative-ci-strongly-finite",
            &[p(Preminimal)],
            &[p(Cancellative)],
            &[p(Separative), p(CancellationIntoIdeals), p(StrongFiniteness)],
        ),
        imp(
            "separative-ci-strongly-finite-gives-cancellative",
            &[p(Preminimal)],
            &[p(Separative), p(CancellationIntoIdeals), p(StrongFiniteness)],
            &[p(Cancellative)],
        ),
        imp(
            "order-cancellative-gives-order-separative-oci-strongly-finite",
            &[p(Preminimal)],
            &[p(OrderCancellative)],
            &[p(OrderSeparative), p(OrderCancellationIntoIdeals), p(StrongFiniteness)],
        ),
        imp(
            "order-separative-oci-strongly-finite-gives-order-cancellative",
            &[p(Preminimal)],
            &[p(OrderSeparative), p(OrderCancellationIntoIdeals), p(StrongFiniteness)],
            &[p(OrderCancellative)],
        ),
        imp(
            "order-cancellative-gives-strongly-finite-nearly-separative-soci",
            &[],
            &[p(OrderCancellative)],
            &[p(StrongFiniteness), p(NearlySeparative), p(StrongOrderCancellationIntoIdeals)],
        ),
        imp(
            "strongly-finite-nearly-separative-soci-gives-order-cancellative",
            &[],
            &[p(StrongFiniteness), p(NearlySeparative), p(StrongOrderCancellationIntoIdeals)],
            &[p(OrderCancellative)],
        ),
        imp(
            "strongly-finite-soci-gives-oci",
            &[],
            &[p(StrongFiniteness), p(StrongOrderCancellationIntoIdeals)],
            &[p(OrderCancellationIntoIdeals)],
        ),
        imp(
            "simple-gives-cancellation-into-ideals",
            &[],
            &[p(Simple)],
            &[p(CancellationIntoIdeals), p(OrderCancellationIntoIdeals), p(StrongOrderCancellationIntoIdeals)],
        ),
        imp("weakly-divisible-gives-almost-divisible", &[p(AlgebraicallyOrdered)], &[p(WeaklyDivisible)], &[p(AlmostDivisible)]),
        imp(
            "almost-divisible-gives-weakly-divisible",
            &[p(AlgebraicallyOrdered), p(Cancellative)],
            &[p(AlmostDivisible)],
            &[p(WeaklyDivisible)],
        ),
        imp("nearly-unperforated-gives-almost-unperforated", &[], &[p(NearlyUnperforated)], &[p(AlmostUnperforated)]),
        imp("nearly-unperforated-gives-nearly-separative", &[], &[p(NearlyUnperforated)], &[p(NearlySeparative)]),
        imp(
            "nu-ci-gives-au-cancellative",
            &[p(StrongFiniteness), p(AlgebraicallyOrdered)],
            &[p(NearlyUnperforated), p(CancellationIntoIdeals)],
            &[p(AlmostUnperforated), p(Cancellative)],
        ),
        imp(
            "au-cancellative-gives-nu-ci",
            &[p(StrongFiniteness), p(AlgebraicallyOrdered)],
            &[p(AlmostUnperforated), p(Cancellative)],
            &[p(NearlyUnperforated), p(CancellationIntoIdeals)],
        ),
        imp(
            "sf-nu-ci-gives-au-cancellative",
            &[p(AlgebraicallyOrdered)],
            &[p(StrongFiniteness), p(NearlyUnperforated), p(CancellationIntoIdeals)],
            &[p(AlmostUnperforated), p(Cancellative)],
        ),
        imp(
            "au-cancellative-gives-sf-nu-ci",
            &[p(AlgebraicallyOrdered)],
            &[p(AlmostUnperforated), p(Cancellative)],
            &[p(StrongFiniteness), p(NearlyUnperforated), p(CancellationIntoIdeals)],
        ),
    ]
}

pub fn evaluate_implication(m: &Instance, imp: &Implication, b: &SearchBudget) -> ImplicationResult {
    let mut values = Vec::new();
    let mut vacuous: Option<String> = None;
    let mut all_yes = true;
    for f in imp.hypotheses.iter().chain(&imp.premise) {
        let v = check_formula(m, *f, b).value;
        values.push((f.name(), v));
        match v {
            Tri::No if vacuous.is_none() => vacuous = Some(f.name().to_string()),
            Tri::Yes => {}
            _ => all_yes = false,
        }
    }
    let mut concl = Tri::Yes;
    for f in &imp.conclusion {
        let v = check_formula(m, *f, b).value;
        values.push((f.name(), v));
        concl = concl.and(v);
    }
    let status = match (vacuous, all_yes, concl) {
        (Some(w), _, _) => Status::Vacuous(w),
        (None, true, Tri::Yes) => Status::Pass,
        (None, true, Tri::No) => Status::Fail,
        _ => Status::Undecided,
    };
    ImplicationResult { key: imp.key, status, values }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub properties: Vec<(PropertyId, Verdict)>,
    pub results: Vec<ImplicationResult>,
}

impl SuiteReport {
    pub fn failures(&self) -> Vec<&ImplicationResult> {
        self.results.iter().filter(|r| r.status == Status::Fail).collect()
    }
}

/// Evaluates every property, then every implication.
pub fn implication_suite(m: &Instance, b: &SearchBudget) -> SuiteReport {
    let properties = PropertyId::ALL.iter().map(|&p| (p, check_property(m, p, b))).collect();
    let results = implications().iter().map(|i| evaluate_implication(m, i, b)).collect();
    SuiteReport { properties, results }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{FiniteMonoid, OrderSpec};

    fn one_t() -> Instance {
        let names = vec!["0".into(), "1".into(), "T".into()];
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        Instance::finite("one_t", FiniteMonoid::new(names, table, OrderSpec::Algebraic).unwrap())
    }

    #[test]
    fn names_round_trip() {
        for p in PropertyId::ALL {
            assert_eq!(PropertyId::parse(&p.kebab()), Some(p));
            assert_eq!(PropertyId::parse(p.name()), Some(p));
        }
        assert_eq!(PropertyId::AlmostUnperforated.kebab(), "almost-unperforated");
    }

    #[test]
    fn numerical_semigroup_relations() {
        let m = Instance::numerical(&[2, 3]);
        let b = SearchBudget::default();
        let v = rel_s(&m, &Elem::Vec(vec![3]), &Elem::Vec(vec![4]), &b);
        assert!(v.is_yes());
        assert_eq!(v.certificate.n, Some(3));
        let z = Elem::Vec(vec![0]);
        assert_eq!(rel_s(&m, &z, &z, &b).certificate.n, Some(1));
    }

    #[test]
    fn nat_relations_are_exact() {
        let m = Instance::free(1);
        let b = SearchBudget::default();
        let one = Elem::Vec(vec![1]);
        assert!(rel_s(&m, &one, &one, &b).is_no());
        assert!(rel_d(&m, &one, &Elem::Vec(vec![0]), &b).is_no());
    }

    #[test]
    fn absorbing_truncation_is_not_separative() {
        let m = one_t();
        let b = SearchBudget::default();
        let v = check_property(&m, PropertyId::Separative, &b);
        assert!(v.is_no());
        assert_eq!(v.get("x"), Some(&Elem::Idx(1)));
        assert_eq!(v.get("y"), Some(&Elem::Idx(2)));
        assert_eq!(m.replay(&v.certificate.facts, &b), Tri::Yes);
    }

    #[test]
    fn numerical_semigroup_lacks_refinement() {
        let m = Instance::numerical(&[2, 3]);
        let b = SearchBudget::default();
        let v = check_property(&m, PropertyId::Refinement, &b);
        assert!(v.is_no());
        assert_eq!(v.get("x1"), Some(&Elem::Vec(vec![2])));
        assert_eq!(v.get("x2"), Some(&Elem::Vec(vec![4])));
        assert_eq!(v.get("y1"), Some(&Elem::Vec(vec![3])));
    }

    #[test]
    fn nat_is_not_almost_divisible() {
        let m = Instance::free(1);
        let v = check_property(&m, PropertyId::AlmostDivisible, &SearchBudget::default());
        assert!(v.is_no());
        assert_eq!(v.get("x"), Some(&Elem::Vec(vec![1])));
        assert_eq!(v.certificate.n, Some(2));
    }
}
