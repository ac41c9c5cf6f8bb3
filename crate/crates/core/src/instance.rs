//! Semigroup instances: backends, derived constructions, arithmetic and order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};

use crate::arith::{fmt_q, q, qf, Q};
use crate::budget::SearchBudget;
use crate::cuz::{CuZ, Ext};
use crate::elem::Elem;
use crate::error::{CoreError, CoreResult};
use crate::finite::{FiniteMonoid, OrderSpec};
use crate::verdict::{Bound, Fact, Tri, Verdict};
use crate::vector::{OrderMode, VectorMonoid};
use crate::{grothendieck, tensorz};

#[derive(Clone, Debug)]
pub enum Backend {
    Finite(Arc<FiniteMonoid>),
    Vector(Arc<VectorMonoid>),
    CuZ,
    QPlus,
    DirectSum(Arc<Instance>, Arc<Instance>),
    PrincipalIdeal { parent: Arc<Instance>, generator: Elem },
    /// Quotient by the principal ideal of `generator`, antisymmetrized.
    Quotient { parent: Arc<Instance>, generator: Elem },
    /// The almost-unperforated hull of the parent inside its Grothendieck group.
    AuHull(Arc<Instance>),
    /// The parent carrier with the order inherited from `M ⊗ Z` via `x ↦ x⊗1`.
    TensorOne(Arc<Instance>),
}

/// Memo tables shared by clones of one instance.
#[derive(Debug, Default)]
pub struct InstanceCache {
    pub(crate) verdicts: Mutex<BTreeMap<(String, SearchBudget), Verdict>>,
    view: OnceLock<Option<Arc<FiniteView>>>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub backend: Backend,
    pub budget: SearchBudget,
    pub(crate) cache: Arc<InstanceCache>,
}

/// A finite carrier materialized as a table, with the original elements.
#[derive(Debug)]
pub struct FiniteView {
    pub monoid: FiniteMonoid,
    pub elems: Vec<Elem>,
}

impl FiniteView {
    pub fn index(&self, e: &Elem) -> Option<usize> {
        self.elems.iter().position(|x| x == e)
    }
}

/// Sampled elements and whether they exhaust the carrier.
#[derive(Clone, Debug)]
pub struct Sample {
    pub elems: Vec<Elem>,
    pub exhaustive: bool,
}

impl Instance {
    fn wrap(name: impl Into<String>, backend: Backend) -> Instance {
        Instance { name: name.into(), backend, budget: SearchBudget::default(), cache: Arc::default() }
    }

    pub fn finite(name: impl Into<String>, m: FiniteMonoid) -> Instance {
        Self::wrap(name, Backend::Finite(Arc::new(m)))
    }

    pub fn vector(name: impl Into<String>, v: VectorMonoid) -> Instance {
        Self::wrap(name, Backend::Vector(Arc::new(v)))
    }

    pub fn cuz() -> Instance {
        Self::wrap("cuz", Backend::CuZ)
    }

    pub fn qplus() -> Instance {
        Self::wrap("qplus", Backend::QPlus)
    }

    /// `N^d` with the standard generators.
    pub fn free(d: usize) -> Instance {
        let gens = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        let v = VectorMonoid::new(d, gens, OrderMode::Algebraic).expect("unit vectors");
        Self::vector(if d == 1 { "nat".to_string() } else { format!("nat{d}") }, v)
    }

    /// The numerical semigroup generated by `gens` with algebraic order.
    pub fn numerical(gens: &[i64]) -> Instance {
        let v = VectorMonoid::new(1, gens.iter().map(|&g| vec![g]).collect(), OrderMode::Algebraic)
            .expect("positive generators");
        let name = format!("num{}", gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("_"));
        Self::vector(name, v)
    }

    pub fn direct_sum(a: Instance, b: Instance) -> Instance {
        let name = format!("{}+{}", a.name, b.name);
        Self::wrap(name, Backend::DirectSum(Arc::new(a), Arc::new(b)))
    }

    /// The principal order ideal `I(x)`.
    pub fn ideal(parent: &Instance, x: Elem) -> CoreResult<Instance> {
        parent.validate(&x)?;
        let name = format!("{}/I({})", parent.name, parent.fmt_elem(&x));
        Ok(Self::wrap(name, Backend::PrincipalIdeal { parent: Arc::new(parent.clone()), generator: x })
            .with_budget(parent.budget))
    }

    /// `M / I(x)`, where `ideal` must be `PrincipalIdeal(M, x)`.
    pub fn quotient(parent: &Instance, ideal: &Instance) -> CoreResult<Instance> {
        let Backend::PrincipalIdeal { parent: ip, generator } = &ideal.backend else {
            return Err(CoreError::NotAnIdeal("only principal ideals are supported".into()));
        };
        if ip.name != parent.name {
            return Err(CoreError::NotAnIdeal(format!("ideal lives in `{}`, not `{}`", ip.name, parent.name)));
        }
        ideal.check_is_ideal()?;
        let name = format!("{}/{}", parent.name, parent.fmt_elem(generator));
        Ok(Self::wrap(name, Backend::Quotient { parent: Arc::new(parent.clone()), generator: generator.clone() })
            .with_budget(parent.budget))
    }

    pub fn au_hull(parent: &Instance) -> Instance {
        Self::wrap(format!("au({})", parent.name), Backend::AuHull(Arc::new(parent.clone()))).with_budget(parent.budget)
    }

    pub fn tensor_one(parent: &Instance) -> Instance {
        Self::wrap(format!("{}⊗1", parent.name), Backend::TensorOne(Arc::new(parent.clone())))
            .with_budget(parent.budget)
    }

    pub fn with_budget(mut self, b: SearchBudget) -> Instance {
        self.budget = b;
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Instance {
        self.name = name.into();
        self
    }

    pub fn kind(&self) -> &'static str {
        match &self.backend {
            Backend::Finite(_) => "finite",
            Backend::Vector(_) => "vector",
            Backend::CuZ => "cuz",
            Backend::QPlus => "qplus",
            Backend::DirectSum(..) => "direct_sum",
            Backend::PrincipalIdeal { .. } => "principal_ideal",
            Backend::Quotient { .. } => "quotient",
            Backend::AuHull(_) => "au_hull",
            Backend::TensorOne(_) => "tensor_one",
        }
    }

    pub fn as_vector(&self) -> Option<&VectorMonoid> {
        match &self.backend {
            Backend::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMonoid> {
        match &self.backend {
            Backend::Finite(m) => Some(m),
            _ => None,
        }
    }

    // ---- elements -------------------------------------------------------

    pub fn zero(&self) -> Elem {
        match &self.backend {
            Backend::Finite(m) => Elem::Idx(m.zero),
            Backend::Vector(v) => Elem::Vec(vec![0; v.dim]),
            Backend::CuZ => Elem::Cu(CuZ::ZERO),
            Backend::QPlus => Elem::Rat(Q::zero()),
            Backend::DirectSum(a, b) => Elem::pair(a.zero(), b.zero()),
            Backend::PrincipalIdeal { parent, .. } | Backend::Quotient { parent, .. } => parent.zero(),
            Backend::TensorOne(p) => p.zero(),
            Backend::AuHull(p) => grothendieck::gr_zero(p),
        }
    }

    pub fn is_zero(&self, x: &Elem) -> Tri {
        self.eq_tri(x, &self.zero())
    }

    pub fn validate(&self, x: &Elem) -> CoreResult<()> {
        let bad = |msg: String| Err(CoreError::BackendMismatch(format!("{} in `{}`", msg, self.name)));
        match (&self.backend, x) {
            (Backend::Finite(m), Elem::Idx(i)) => {
                if *i < m.len() {
                    Ok(())
                } else {
                    bad(format!("index {i} out of range"))
                }
            }
            (Backend::Vector(v), Elem::Vec(c)) => {
                if c.len() != v.dim {
                    return bad(format!("vector of length {} but dim is {}", c.len(), v.dim));
                }
                match v.contains(c, &self.budget).value {
                    Tri::Yes => Ok(()),
                    Tri::No => bad(format!("{} is not in the generated monoid", self.fmt_elem(x))),
                    Tri::Unknown => bad(format!("membership of {} is undecided within budget", self.fmt_elem(x))),
                }
            }
            (Backend::CuZ, Elem::Cu(c)) => match c {
                CuZ::Soft(Ext::Fin(r)) if !r.is_positive() => bad("soft values must be positive".into()),
                _ => Ok(()),
            },
            (Backend::QPlus, Elem::Rat(r)) => {
                if r.is_negative() {
                    bad("negative rational".into())
                } else {
                    Ok(())
                }
            }
            (Backend::DirectSum(a, b), Elem::Pair(x1, x2)) => {
                a.validate(x1)?;
                b.validate(x2)
            }
            (Backend::PrincipalIdeal { parent, generator }, _) => {
                parent.validate(x)?;
                match parent.in_ideal(generator, x, &self.budget).value {
                    Tri::Yes => Ok(()),
                    Tri::No => bad(format!("{} is not in the ideal", parent.fmt_elem(x))),
                    Tri::Unknown => bad(format!("ideal membership of {} is undecided", parent.fmt_elem(x))),
                }
            }
            (Backend::Quotient { parent, .. }, _) | (Backend::TensorOne(parent), _) => parent.validate(x),
            (Backend::AuHull(p), _) => grothendieck::au_validate(p, x, &self.budget),
            _ => bad(format!("element {x} has the wrong shape")),
        }
    }

    /// Checked addition.
    pub fn add(&self, x: &Elem, y: &Elem) -> CoreResult<Elem> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.plus(x, y))
    }

    /// Addition on elements already known to be valid.
    pub fn plus(&self, x: &Elem, y: &Elem) -> Elem {
        match (&self.backend, x, y) {
            (Backend::Finite(m), Elem::Idx(a), Elem::Idx(b)) => Elem::Idx(m.add(*a, *b)),
            (Backend::Vector(_), Elem::Vec(a), Elem::Vec(b)) => Elem::Vec(a.iter().zip(b).map(|(p, q)| p + q).collect()),
            (Backend::CuZ, Elem::Cu(a), Elem::Cu(b)) => Elem::Cu(a.add(b)),
            (Backend::QPlus, Elem::Rat(a), Elem::Rat(b)) => Elem::Rat(a + b),
            (Backend::DirectSum(l, r), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => {
                Elem::pair(l.plus(a1, b1), r.plus(a2, b2))
            }
            (Backend::PrincipalIdeal { parent, .. }, _, _)
            | (Backend::Quotient { parent, .. }, _, _)
            | (Backend::TensorOne(parent), _, _) => parent.plus(x, y),
            (Backend::AuHull(p), _, _) => grothendieck::gr_add(p, x, y),
            _ => panic!("plus on mismatched elements {x} and {y} in `{}`", self.name),
        }
    }

    pub fn mul(&self, n: u64, x: &Elem) -> Elem {
        match (&self.backend, x) {
            (_, _) if n == 0 => self.zero(),
            (Backend::Finite(m), Elem::Idx(a)) => Elem::Idx(m.mul(n, *a)),
            (Backend::Vector(_), Elem::Vec(a)) => Elem::Vec(a.iter().map(|c| c * n as i64).collect()),
            (Backend::CuZ, Elem::Cu(a)) => Elem::Cu(a.scale(n)),
            (Backend::QPlus, Elem::Rat(a)) => Elem::Rat(a * q(n as i128)),
            (Backend::DirectSum(l, r), Elem::Pair(a, b)) => Elem::pair(l.mul(n, a), r.mul(n, b)),
            (Backend::PrincipalIdeal { parent, .. }, _)
            | (Backend::Quotient { parent, .. }, _)
            | (Backend::TensorOne(parent), _) => parent.mul(n, x),
            (Backend::AuHull(p), _) => grothendieck::gr_scale(p, n as i64, x),
            _ => panic!("mul on mismatched element {x} in `{}`", self.name),
        }
    }

    // ---- order ----------------------------------------------------------

    pub fn leq_tri(&self, x: &Elem, y: &Elem, b: &SearchBudget) -> Tri {
        match (&self.backend, x, y) {
            (Backend::Finite(m), Elem::Idx(a), Elem::Idx(c)) => Tri::from_bool(m.leq[*a][*c]),
            (Backend::Vector(v), Elem::Vec(a), Elem::Vec(c)) => v.leq_tri(a, c, b),
            (Backend::CuZ, Elem::Cu(a), Elem::Cu(c)) => Tri::from_bool(a.leq(c)),
            (Backend::QPlus, Elem::Rat(a), Elem::Rat(c)) => Tri::from_bool(a <= c),
            (Backend::DirectSum(l, r), Elem::Pair(a1, a2), Elem::Pair(c1, c2)) => {
                let first = l.leq_tri(a1, c1, b);
                if first.is_no() {
                    return Tri::No;
                }
                first.and(r.leq_tri(a2, c2, b))
            }
            (Backend::PrincipalIdeal { parent, .. }, _, _) => parent.leq_tri(x, y, b),
            (Backend::Quotient { parent, generator }, _, _) => parent.exists_n_leq(x, y, generator, b).value,
            (Backend::AuHull(p), _, _) => grothendieck::au_leq(p, x, y, b).value,
            (Backend::TensorOne(p), _, _) => tensorz::unit_leq(p, x, y, b).value,
            _ => panic!("leq on mismatched elements {x} and {y} in `{}`", self.name),
        }
    }

    /// Order test with a certificate.
    pub fn leq(&self, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
        let base = match (&self.backend, x, y) {
            (Backend::Vector(v), Elem::Vec(a), Elem::Vec(c)) => match &v.order_mode {
                OrderMode::Algebraic => {
                    let d: Vec<i64> = c.iter().zip(a).map(|(p, q)| p - q).collect();
                    let mut out = v.contains(&d, b);
                    if out.is_yes() {
                        out = out.witness("z", Elem::Vec(d));
                    }
                    out.certificate.summary = format!("difference membership: {}", out.certificate.summary).into();
                    out
                }
                OrderMode::Coordinatewise => {
                    Verdict::from_tri(v.leq_tri(a, c, b), "coordinatewise comparison", Bound::CoeffBound)
                }
                OrderMode::Linear(_) => {
                    let (va, vc) = (v.value(a).unwrap(), v.value(c).unwrap());
                    Verdict::from_tri(
                        v.leq_tri(a, c, b),
                        format!("values {va} and {vc} in Q(sqrt2)"),
                        Bound::CoeffBound,
                    )
                }
            },
            (Backend::DirectSum(l, r), Elem::Pair(a1, a2), Elem::Pair(c1, c2)) => {
                let v1 = l.leq(a1, c1, b);
                if v1.is_no() {
                    return Verdict::no("first component fails").steps(v1.budget_used.steps).fact(Fact::NotLeq(
                        x.clone(),
                        y.clone(),
                    ));
                }
                let v2 = r.leq(a2, c2, b);
                let t = v1.value.and(v2.value);
                let bound = v1.certificate.bound.or(v2.certificate.bound).unwrap_or(Bound::CoeffBound);
                let summary = match (v1.value, v2.value) {
                    (_, Tri::No) => "second component fails",
                    (Tri::Yes, Tri::Yes) => "both components hold",
                    _ => "a component is undecided",
                };
                Verdict::from_tri(t, summary, bound).steps(v1.budget_used.steps + v2.budget_used.steps)
            }
            (Backend::Quotient { parent, generator }, _, _) => {
                let mut v = parent.exists_n_leq(x, y, generator, b);
                v.certificate.summary = format!("x <= y + n*g in the parent: {}", v.certificate.summary).into();
                v
            }
            (Backend::AuHull(p), _, _) => grothendieck::au_leq(p, x, y, b),
            (Backend::TensorOne(p), _, _) => tensorz::unit_leq(p, x, y, b),
            (Backend::PrincipalIdeal { parent, .. }, _, _) => parent.leq(x, y, b),
            _ => Verdict::from_tri(self.leq_tri(x, y, b), "direct comparison", Bound::CoeffBound),
        };
        match base.value {
            Tri::Yes => base.fact(Fact::Leq(x.clone(), y.clone())),
            Tri::No if !base.certificate.facts.iter().any(|f| matches!(f, Fact::NotLeq(..))) => {
                base.fact(Fact::NotLeq(x.clone(), y.clone()))
            }
            _ => base,
        }
    }

    /// Equality of elements; classes in quotients and tensor models
    /// compare by mutual order.
    pub fn eq_tri(&self, x: &Elem, y: &Elem) -> Tri {
        match &self.backend {
            Backend::Quotient { .. } | Backend::TensorOne(_) => {
                if x == y {
                    return Tri::Yes;
                }
                let b = self.budget;
                let a = self.leq_tri(x, y, &b);
                if a.is_no() {
                    return Tri::No;
                }
                a.and(self.leq_tri(y, x, &b))
            }
            Backend::DirectSum(l, r) => match (x, y) {
                (Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => l.eq_tri(a1, b1).and(r.eq_tri(a2, b2)),
                _ => Tri::No,
            },
            _ => Tri::from_bool(x == y),
        }
    }

    /// `∃ n >= 0 : x <= y + n*g`. The set of such `n` is upward closed.
    pub fn exists_n_leq(&self, x: &Elem, y: &Elem, g: &Elem, b: &SearchBudget) -> Verdict {
        let found = |n: u64| Verdict::yes("multiple found").with_n(n).fact(Fact::Leq(x.clone(), self.plus(y, &self.mul(n, g))));
        match (&self.backend, x, y, g) {
            (Backend::Finite(m), _, _, Elem::Idx(gi)) => {
                let span = m.multiples_span(*gi);
                for n in 0..=span {
                    if self.leq_tri(x, &self.plus(y, &self.mul(n, g)), b).is_yes() {
                        return found(n);
                    }
                }
                Verdict::no("every distinct multiple checked").reached(span)
            }
            (Backend::Vector(v), Elem::Vec(xv), Elem::Vec(yv), Elem::Vec(gv)) => match &v.order_mode {
                OrderMode::Coordinatewise => {
                    let mut n = 0i64;
                    for i in 0..v.dim {
                        if gv[i] == 0 {
                            if xv[i] > yv[i] {
                                return Verdict::no(format!("coordinate {i} is not reached by multiples"));
                            }
                        } else {
                            let need = xv[i] - yv[i];
                            if need > 0 {
                                n = n.max((need + gv[i] - 1) / gv[i]);
                            }
                        }
                    }
                    found(n as u64)
                }
                OrderMode::Linear(_) => {
                    if gv.iter().all(|&c| c == 0) {
                        return Verdict::from_tri(self.leq_tri(x, y, b), "zero generator", Bound::NMax);
                    }
                    // v(g) > 0: grow n until the value passes v(x).
                    let mut n = 0u64;
                    loop {
                        if self.leq_tri(x, &self.plus(y, &self.mul(n, g)), b).is_yes() {
                            return found(n);
                        }
                        n = if n == 0 { 1 } else { n * 2 };
                    }
                }
                OrderMode::Algebraic => {
                    for d in &v.functionals {
                        use crate::lattice::dot;
                        if dot(d, gv) == 0 && dot(d, xv) > dot(d, yv) {
                            return Verdict::no(format!("functional {d:?} vanishes on g and separates x from y"));
                        }
                    }
                    self.search_n(x, y, g, b)
                }
            },
            (Backend::CuZ, Elem::Cu(xc), Elem::Cu(yc), Elem::Cu(gc)) => {
                if gc.is_zero() {
                    return Verdict::from_tri(self.leq_tri(x, y, b), "zero generator", Bound::NMax);
                }
                if *xc == CuZ::Soft(Ext::Inf) && yc.value() != Ext::Inf && gc.value() != Ext::Inf {
                    return Verdict::no("only infinite elements dominate inf'");
                }
                let mut n = 0u64;
                loop {
                    if self.leq_tri(x, &self.plus(y, &self.mul(n, g)), b).is_yes() {
                        return found(n);
                    }
                    n = if n == 0 { 1 } else { n * 2 };
                }
            }
            (Backend::QPlus, Elem::Rat(xr), Elem::Rat(yr), Elem::Rat(gr)) => {
                if xr <= yr {
                    return found(0);
                }
                if gr.is_zero() {
                    return Verdict::no("zero generator and x > y");
                }
                let n = ((xr - yr) / gr).ceil().to_integer() as u64;
                found(n)
            }
            (Backend::DirectSum(l, r), Elem::Pair(x1, x2), Elem::Pair(y1, y2), Elem::Pair(g1, g2)) => {
                let a = l.exists_n_leq(x1, y1, g1, b);
                let c = r.exists_n_leq(x2, y2, g2, b);
                match (a.value, c.value) {
                    (Tri::No, _) => Verdict::no("first component never dominated"),
                    (_, Tri::No) => Verdict::no("second component never dominated"),
                    (Tri::Yes, Tri::Yes) => {
                        found(a.certificate.n.unwrap_or(0).max(c.certificate.n.unwrap_or(0)))
                    }
                    _ => Verdict::unknown(Bound::NMax, "a component is undecided"),
                }
            }
            (Backend::PrincipalIdeal { parent, .. }, _, _, _) => parent.exists_n_leq(x, y, g, b),
            (Backend::Quotient { parent, generator }, _, _, _) => {
                let gg = parent.plus(g, generator);
                parent.exists_n_leq(x, y, &gg, b)
            }
            _ => self.search_n(x, y, g, b),
        }
    }

    fn search_n(&self, x: &Elem, y: &Elem, g: &Elem, b: &SearchBudget) -> Verdict {
        let mut acc = y.clone();
        for n in 0..=b.n_max {
            match self.leq_tri(x, &acc, b) {
                Tri::Yes => {
                    return Verdict::yes("multiple found").with_n(n).fact(Fact::Leq(x.clone(), acc));
                }
                _ => acc = self.plus(&acc, g),
            }
        }
        Verdict::unknown(Bound::NMax, "no multiple found up to n_max").reached(b.n_max)
    }

    /// Membership of `y` in the principal ideal `I(g)`.
    pub fn in_ideal(&self, g: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
        self.exists_n_leq(y, &self.zero(), g, b)
    }

    /// Sampled check that `ideal` is downward closed and closed under addition.
    pub fn check_is_ideal(&self) -> CoreResult<()> {
        let Backend::PrincipalIdeal { parent, generator } = &self.backend else {
            return Ok(());
        };
        let b = self.budget.with_box(self.budget.sample_box.min(4));
        let s = parent.sample(&b).elems;
        let members: Vec<&Elem> = s.iter().filter(|y| parent.in_ideal(generator, y, &b).is_yes()).collect();
        for y in &members {
            for x in &s {
                if parent.leq_tri(x, y, &b).is_yes() && parent.in_ideal(generator, x, &b).is_no() {
                    return Err(CoreError::NotAnIdeal(format!(
                        "{} <= {} but {} is outside",
                        parent.fmt_elem(x),
                        parent.fmt_elem(y),
                        parent.fmt_elem(x)
                    )));
                }
            }
            for z in &members {
                if parent.in_ideal(generator, &parent.plus(y, z), &b).is_no() {
                    return Err(CoreError::NotAnIdeal("not closed under addition".into()));
                }
            }
        }
        Ok(())
    }

    // ---- carriers and samples -------------------------------------------

    /// Every element, when the carrier is finite.
    pub fn carrier(&self) -> Option<Vec<Elem>> {
        match &self.backend {
            Backend::Finite(m) => Some((0..m.len()).map(Elem::Idx).collect()),
            Backend::DirectSum(a, b) => {
                let (ca, cb) = (a.carrier()?, b.carrier()?);
                Some(product_by_rank(&ca, &cb))
            }
            Backend::PrincipalIdeal { parent, generator } => {
                let c = parent.carrier()?;
                let b = self.budget;
                Some(c.into_iter().filter(|y| parent.in_ideal(generator, y, &b).is_yes()).collect())
            }
            Backend::Quotient { parent, .. } => {
                let c = parent.carrier()?;
                let mut reps: Vec<Elem> = Vec::new();
                for x in c {
                    if !reps.iter().any(|r| self.eq_tri(r, &x).is_yes()) {
                        reps.push(x);
                    }
                }
                Some(reps)
            }
            Backend::TensorOne(p) => p.carrier(),
            Backend::AuHull(p) => grothendieck::au_carrier(p),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.carrier().is_some()
    }

    /// Carrier materialized as a table; `None` for infinite carriers or
    /// when some comparison is undecided.
    pub fn finite_view(&self) -> Option<Arc<FiniteView>> {
        self.cache
            .view
            .get_or_init(|| {
                let elems = self.carrier()?;
                let idx = |e: &Elem| -> Option<usize> {
                    elems.iter().position(|r| r == e).or_else(|| elems.iter().position(|r| self.eq_tri(r, e).is_yes()))
                };
                let n = elems.len();
                let mut table = vec![vec![0; n]; n];
                for i in 0..n {
                    for j in i..n {
                        let s = idx(&self.plus(&elems[i], &elems[j]))?;
                        table[i][j] = s;
                        table[j][i] = s;
                    }
                }
                let b = self.budget;
                let mut pairs = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        match self.leq_tri(&elems[i], &elems[j], &b) {
                            Tri::Yes => pairs.push((i, j)),
                            Tri::No => {}
                            Tri::Unknown => return None,
                        }
                    }
                }
                let names = elems.iter().map(|e| self.fmt_elem(e)).collect();
                let monoid = FiniteMonoid::new(names, table, OrderSpec::Pairs(pairs)).ok()?;
                Some(Arc::new(FiniteView { monoid, elems }))
            })
            .clone()
    }

    /// Elements for quantified checks, in a fixed deterministic order.
    pub fn sample(&self, b: &SearchBudget) -> Sample {
        if let Some(c) = self.carrier() {
            return Sample { elems: c, exhaustive: true };
        }
        let bx = b.sample_box;
        let elems = match &self.backend {
            Backend::Vector(v) => match v.box_elements(bx) {
                Some(es) => es.into_iter().map(Elem::Vec).collect(),
                None => box_points(v.dim, bx)
                    .into_iter()
                    .filter(|p| v.contains(p, b).is_yes())
                    .map(Elem::Vec)
                    .collect(),
            },
            Backend::CuZ => cuz_sample(bx),
            Backend::QPlus => qplus_sample(bx).into_iter().map(Elem::Rat).collect(),
            Backend::DirectSum(l, r) => {
                let (sl, sr) = (l.sample(b).elems, r.sample(b).elems);
                product_by_rank(&sl, &sr)
            }
            Backend::PrincipalIdeal { parent, generator } => parent
                .sample(b)
                .elems
                .into_iter()
                .filter(|y| parent.in_ideal(generator, y, b).is_yes())
                .collect(),
            Backend::Quotient { parent, .. } => {
                let mut reps: Vec<Elem> = Vec::new();
                for x in parent.sample(b).elems {
                    if !reps.iter().any(|r| self.eq_tri(r, &x).is_yes()) {
                        reps.push(x);
                    }
                }
                reps
            }
            Backend::TensorOne(p) => p.sample(b).elems,
            Backend::AuHull(p) => grothendieck::au_sample(p, b),
            Backend::Finite(_) => unreachable!("finite carriers return early"),
        };
        Sample { elems, exhaustive: false }
    }

    /// All ways to write `x = a + b`, when there are finitely many and
    /// they can be listed exactly.
    pub fn decompositions(&self, x: &Elem) -> Option<Vec<(Elem, Elem)>> {
        match (&self.backend, x) {
            (Backend::Finite(m), Elem::Idx(t)) => {
                let mut out = Vec::new();
                for a in 0..m.len() {
                    for c in 0..m.len() {
                        if m.add(a, c) == *t {
                            out.push((Elem::Idx(a), Elem::Idx(c)));
                        }
                    }
                }
                Some(out)
            }
            (Backend::Vector(v), Elem::Vec(xv)) => {
                let l = v.ell(xv)?;
                let mut out = Vec::new();
                for a in v.elements_upto(l)? {
                    let rest: Vec<i64> = xv.iter().zip(&a).map(|(p, q)| p - q).collect();
                    match v.contains(&rest, &self.budget).value {
                        Tri::Yes => out.push((Elem::Vec(a), Elem::Vec(rest))),
                        Tri::No => {}
                        Tri::Unknown => return None,
                    }
                }
                Some(out)
            }
            (Backend::CuZ, Elem::Cu(CuZ::Compact(n))) => {
                Some((0..=*n).map(|k| (Elem::Cu(CuZ::Compact(k)), Elem::Cu(CuZ::Compact(n - k)))).collect())
            }
            (Backend::QPlus, Elem::Rat(r)) if r.is_zero() => Some(vec![(x.clone(), x.clone())]),
            (Backend::DirectSum(l, r), Elem::Pair(a, c)) => {
                let (da, dc) = (l.decompositions(a)?, r.decompositions(c)?);
                let mut out = Vec::new();
                for (a1, a2) in &da {
                    for (c1, c2) in &dc {
                        out.push((Elem::pair(a1.clone(), c1.clone()), Elem::pair(a2.clone(), c2.clone())));
                    }
                }
                Some(out)
            }
            (Backend::PrincipalIdeal { parent, .. }, _) | (Backend::TensorOne(parent), _) => parent.decompositions(x),
            (Backend::Quotient { .. }, _) => {
                let view = self.finite_view()?;
                let t = view.index(x).or_else(|| view.elems.iter().position(|r| self.eq_tri(r, x).is_yes()))?;
                let m = &view.monoid;
                let mut out = Vec::new();
                for a in 0..m.len() {
                    for c in 0..m.len() {
                        if m.add(a, c) == t {
                            out.push((view.elems[a].clone(), view.elems[c].clone()));
                        }
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// `(index, period)` of the multiples of `x`, for finite carriers.
    pub fn cycle(&self, x: &Elem) -> Option<(u64, u64)> {
        if let Backend::Finite(m) = &self.backend {
            if let Elem::Idx(i) = x {
                let (a, p) = m.cycles[*i];
                return Some((a as u64, p as u64));
            }
        }
        let view = self.finite_view()?;
        let i = view.index(x).or_else(|| view.elems.iter().position(|r| self.eq_tri(r, x).is_yes()))?;
        let (a, p) = view.monoid.cycles[i];
        Some((a as u64, p as u64))
    }

    // ---- formatting -------------------------------------------------------

    pub fn fmt_elem(&self, x: &Elem) -> String {
        match (&self.backend, x) {
            (Backend::Finite(m), Elem::Idx(i)) if *i < m.len() => m.names[*i].clone(),
            (Backend::DirectSum(l, r), Elem::Pair(a, b)) => format!("({}, {})", l.fmt_elem(a), r.fmt_elem(b)),
            (Backend::PrincipalIdeal { parent, .. }, _) | (Backend::TensorOne(parent), _) => parent.fmt_elem(x),
            (Backend::Quotient { parent, .. }, _) => format!("[{}]", parent.fmt_elem(x)),
            (Backend::AuHull(p), _) => grothendieck::fmt_gr(p, x),
            (_, Elem::Rat(r)) => fmt_q(r),
            _ => x.to_string(),
        }
    }

    /// Replays the facts of a certificate against this instance.
    pub fn replay(&self, facts: &[Fact], b: &SearchBudget) -> Tri {
        facts.iter().fold(Tri::Yes, |acc, f| {
            acc.and(match f {
                Fact::Leq(x, y) => self.leq_tri(x, y, b),
                Fact::NotLeq(x, y) => self.leq_tri(x, y, b).not(),
                Fact::Eq(x, y) => self.eq_tri(x, y),
                Fact::Ne(x, y) => self.eq_tri(x, y).not(),
            })
        })
    }

    pub(crate) fn memo<F: FnOnce() -> Verdict>(&self, key: &str, b: &SearchBudget, f: F) -> Verdict {
        let k = (key.to_string(), *b);
        if let Some(v) = self.cache.verdicts.lock().unwrap().get(&k) {
            return v.clone();
        }
        let v = f();
        self.cache.verdicts.lock().unwrap().insert(k, v.clone());
        v
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.kind())
    }
}

/// Cartesian product ordered by rank sum, then by the left rank.
pub fn product_by_rank(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut idx: Vec<(usize, usize)> = (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).collect();
    idx.sort_by_key(|&(i, j)| (i + j, i));
    idx.into_iter().map(|(i, j)| Elem::pair(a[i].clone(), b[j].clone())).collect()
}

fn box_points(dim: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-b..=b).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out
}

/// Compacts `0..=b`, integer softs `1'..=b'`, `inf'`, then half-integer softs.
pub fn cuz_sample(b: i64) -> Vec<Elem> {
    let mut out: Vec<Elem> = (0..=b as u64).map(|n| Elem::Cu(CuZ::Compact(n))).collect();
    out.extend((1..=b as i128).map(|n| Elem::Cu(CuZ::soft_int(n))));
    out.push(Elem::Cu(CuZ::Soft(Ext::Inf)));
    out.extend((0..b as i128).map(|n| Elem::Cu(CuZ::soft(qf(2 * n + 1, 2)))));
    out
}

/// Nonnegative rationals up to `b` with denominators 1, 2, 3, ascending.
pub fn qplus_sample(b: i64) -> Vec<Q> {
    let mut v: Vec<Q> = Vec::new();
    for d in 1..=3i128 {
        for n in 0..=(b as i128 * d) {
            v.push(qf(n, d));
        }
    }
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuz_order_examples() {
        let z = Instance::cuz();
        let b = SearchBudget::default();
        let c = |n| Elem::Cu(CuZ::Compact(n));
        let s = |n| Elem::Cu(CuZ::soft_int(n));
        assert!(z.leq(&s(1), &c(1), &b).is_yes());
        assert!(z.leq(&c(2), &s(2), &b).is_no());
        assert_eq!(z.plus(&c(1), &s(1)), s(2));
    }

    #[test]
    fn direct_sum_guard_rejects_gap() {
        let m = Instance::direct_sum(Instance::numerical(&[2, 3]), Instance::free(1));
        let bad = Elem::pair(Elem::Vec(vec![1]), Elem::Vec(vec![0]));
        assert!(matches!(m.validate(&bad), Err(CoreError::BackendMismatch(_))));
    }

    #[test]
    fn quotient_of_free_square() {
        let n2 = Instance::free(2);
        let i = Instance::ideal(&n2, Elem::Vec(vec![1, 0])).unwrap();
        let qt = Instance::quotient(&n2, &i).unwrap();
        assert_eq!(qt.eq_tri(&Elem::Vec(vec![5, 2]), &Elem::Vec(vec![0, 2])), Tri::Yes);
        assert_eq!(qt.eq_tri(&Elem::Vec(vec![5, 2]), &Elem::Vec(vec![0, 1])), Tri::No);
    }
}
