//! Grothendieck groups, their positive cones and the almost unperforated hull.
//!
//! Group elements are [`Elem`]s in a per-backend canonical form:
//! integer vectors for vector monoids, indices into the kernel group
//! `ω + M` for finite carriers, rationals for `Q+`, the empty vector for
//! the trivial group, and pairs for direct sums.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::arith::{fmt_q, q, Q};
use crate::budget::SearchBudget;
use crate::elem::Elem;
use crate::error::{CoreError, CoreResult};
use crate::finite::FiniteMonoid;
use crate::instance::{product_by_rank, qplus_sample, Backend, FiniteView, Instance};
use crate::lattice::{independent_subset, solve_rational};
use crate::relations::{check_property, PropertyId};
use crate::tensorz;
use crate::verdict::{Bound, Tri, Verdict};
use crate::vector::{OrderMode, VectorMonoid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cone {
    /// The image `ι(M)`.
    GrPlus,
    /// Differences `ι(x) - ι(y)` with `y <= x`.
    GrPlusPlus,
    /// `g` with `n*g` and `(n+1)*g` in `GrPlus` for some `n >= 1`.
    AuGrPlus,
    /// `g` with `n*g` and `(n+1)*g` in `GrPlusPlus` for some `n >= 1`.
    AuGrPlusPlus,
}

impl Cone {
    pub const ALL: [Cone; 4] = [Cone::GrPlus, Cone::GrPlusPlus, Cone::AuGrPlus, Cone::AuGrPlusPlus];

    pub fn as_str(self) -> &'static str {
        match self {
            Cone::GrPlus => "GrPlus",
            Cone::GrPlusPlus => "GrPlusPlus",
            Cone::AuGrPlus => "Au(GrPlus)",
            Cone::AuGrPlusPlus => "Au(GrPlusPlus)",
        }
    }

    pub fn parse(s: &str) -> Option<Cone> {
        let k: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match k.as_str() {
            "grplus" | "gr" | "plus" => Some(Cone::GrPlus),
            "grplusplus" | "plusplus" => Some(Cone::GrPlusPlus),
            "augrplus" | "au" => Some(Cone::AuGrPlus),
            "augrplusplus" | "auplusplus" => Some(Cone::AuGrPlusPlus),
            _ => None,
        }
    }

    /// The cone whose multiples define this one, for the hull cones.
    pub fn base(self) -> Option<Cone> {
        match self {
            Cone::AuGrPlus => Some(Cone::GrPlus),
            Cone::AuGrPlusPlus => Some(Cone::GrPlusPlus),
            _ => None,
        }
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The cone that carries the order of the hull instance.
pub const HULL_CONE: Cone = Cone::AuGrPlusPlus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub description: String,
    /// Torsion-free rank, when the group is finitely generated.
    pub rank: Option<usize>,
    /// Order of the group, when finite.
    pub order: Option<usize>,
    /// Echelon basis for lattices.
    pub basis: Vec<Vec<i64>>,
}

/// Finite carriers: the kernel group `ω + M` of the addition table.
#[derive(Clone)]
struct FinGroup {
    monoid: FinSource,
    omega: usize,
    members: Vec<usize>,
}

#[derive(Clone)]
enum FinSource {
    Own(Arc<FiniteMonoid>),
    View(Arc<FiniteView>),
}

impl FinGroup {
    fn new(monoid: FinSource) -> FinGroup {
        let m = match &monoid {
            FinSource::Own(m) => m.as_ref(),
            FinSource::View(v) => &v.monoid,
        };
        let omega = m.kernel_idempotent();
        let mut members: Vec<usize> = (0..m.len()).map(|x| m.add(omega, x)).collect();
        members.sort();
        members.dedup();
        FinGroup { monoid, omega, members }
    }

    fn m(&self) -> &FiniteMonoid {
        match &self.monoid {
            FinSource::Own(m) => m,
            FinSource::View(v) => &v.monoid,
        }
    }

    /// Table index of a carrier element.
    fn index(&self, inst: &Instance, x: &Elem) -> Option<usize> {
        match (&self.monoid, x) {
            (FinSource::Own(m), Elem::Idx(i)) if *i < m.len() => Some(*i),
            (FinSource::View(v), _) => {
                v.index(x).or_else(|| v.elems.iter().position(|r| inst.eq_tri(r, x).is_yes()))
            }
            _ => None,
        }
    }

    fn member(&self, g: &Elem) -> Option<usize> {
        match g {
            Elem::Idx(i) if self.members.binary_search(i).is_ok() => Some(*i),
            _ => None,
        }
    }

    fn neg(&self, g: usize) -> usize {
        let m = self.m();
        *self.members.iter().find(|&&h| m.add(g, h) == self.omega).expect("kernel is a group")
    }
}

/// How the group of an instance is realized.
#[derive(Clone)]
enum Group {
    Lattice(Arc<VectorMonoid>),
    Fin(FinGroup),
    Rat,
    Trivial,
    Sum(Box<Group>, Box<Group>),
}

fn group(m: &Instance) -> CoreResult<Group> {
    match &m.backend {
        Backend::Vector(v) => Ok(Group::Lattice(v.clone())),
        Backend::Finite(f) => Ok(Group::Fin(FinGroup::new(FinSource::Own(f.clone())))),
        Backend::QPlus => Ok(Group::Rat),
        // `x + inf' = inf'` for every `x`, so all classes coincide.
        Backend::CuZ => Ok(Group::Trivial),
        Backend::DirectSum(a, b) => Ok(Group::Sum(Box::new(group(a)?), Box::new(group(b)?))),
        Backend::TensorOne(p) | Backend::AuHull(p) => group(p),
        Backend::PrincipalIdeal { .. } | Backend::Quotient { .. } => match m.finite_view() {
            Some(v) => Ok(Group::Fin(FinGroup::new(FinSource::View(v)))),
            None => Err(CoreError::UnsupportedBackend(format!(
                "Grothendieck group of `{}` needs a finite carrier",
                m.name
            ))),
        },
    }
}

impl Group {
    fn zero(&self) -> Elem {
        match self {
            Group::Lattice(v) => Elem::Vec(vec![0; v.dim]),
            Group::Fin(f) => Elem::Idx(f.omega),
            Group::Rat => Elem::Rat(Q::zero()),
            Group::Trivial => Elem::Vec(vec![]),
            Group::Sum(a, b) => Elem::pair(a.zero(), b.zero()),
        }
    }

    fn add(&self, x: &Elem, y: &Elem) -> Elem {
        match (self, x, y) {
            (Group::Lattice(_), Elem::Vec(a), Elem::Vec(b)) => Elem::Vec(a.iter().zip(b).map(|(p, q)| p + q).collect()),
            (Group::Fin(f), Elem::Idx(a), Elem::Idx(b)) => Elem::Idx(f.m().add(*a, *b)),
            (Group::Rat, Elem::Rat(a), Elem::Rat(b)) => Elem::Rat(a + b),
            (Group::Trivial, _, _) => Elem::Vec(vec![]),
            (Group::Sum(ga, gb), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => Elem::pair(ga.add(a1, b1), gb.add(a2, b2)),
            _ => panic!("group addition on mismatched elements {x} and {y}"),
        }
    }

    fn neg(&self, x: &Elem) -> Elem {
        match (self, x) {
            (Group::Lattice(_), Elem::Vec(a)) => Elem::Vec(a.iter().map(|c| -c).collect()),
            (Group::Fin(f), Elem::Idx(a)) => Elem::Idx(f.neg(*a)),
            (Group::Rat, Elem::Rat(a)) => Elem::Rat(-a),
            (Group::Trivial, _) => Elem::Vec(vec![]),
            (Group::Sum(ga, gb), Elem::Pair(a, b)) => Elem::pair(ga.neg(a), gb.neg(b)),
            _ => panic!("group negation on mismatched element {x}"),
        }
    }

    fn scale(&self, k: i64, x: &Elem) -> Elem {
        match (self, x) {
            (Group::Lattice(_), Elem::Vec(a)) => Elem::Vec(a.iter().map(|c| c * k).collect()),
            (Group::Rat, Elem::Rat(a)) => Elem::Rat(a * q(k as i128)),
            (Group::Sum(ga, gb), Elem::Pair(a, b)) => Elem::pair(ga.scale(k, a), gb.scale(k, b)),
            _ => {
                let base = if k < 0 { self.neg(x) } else { x.clone() };
                let mut acc = self.zero();
                for _ in 0..k.unsigned_abs() {
                    acc = self.add(&acc, &base);
                }
                acc
            }
        }
    }

    fn is_zero(&self, x: &Elem) -> bool {
        *x == self.zero()
    }

    /// Is `x` a well-formed group element?
    fn holds(&self, x: &Elem) -> bool {
        match (self, x) {
            (Group::Lattice(v), Elem::Vec(a)) => a.len() == v.dim && v.in_lattice(a),
            (Group::Fin(f), _) => f.member(x).is_some(),
            (Group::Rat, Elem::Rat(_)) => true,
            (Group::Trivial, Elem::Vec(a)) => a.is_empty(),
            (Group::Sum(ga, gb), Elem::Pair(a, b)) => ga.holds(a) && gb.holds(b),
            _ => false,
        }
    }

    fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            Group::Fin(f) => Some(f.members.iter().map(|&i| Elem::Idx(i)).collect()),
            Group::Trivial => Some(vec![Elem::Vec(vec![])]),
            Group::Sum(a, b) => Some(product_by_rank(&a.elements()?, &b.elements()?)),
            _ => None,
        }
    }

    fn sample(&self, bx: i64) -> Vec<Elem> {
        if let Some(e) = self.elements() {
            return e;
        }
        match self {
            Group::Lattice(v) => {
                let mut pts: Vec<Vec<i64>> = vec![vec![]];
                for _ in 0..v.dim {
                    pts = pts
                        .into_iter()
                        .flat_map(|p: Vec<i64>| (-bx..=bx).map(move |c| [p.clone(), vec![c]].concat()))
                        .collect();
                }
                // Smallest sup-norm first keeps truncated samples balanced.
                pts.sort_by_key(|p| (p.iter().map(|c| c.abs()).max().unwrap_or(0), p.clone()));
                pts.into_iter().filter(|p| v.in_lattice(p)).map(Elem::Vec).collect()
            }
            Group::Rat => {
                let pos = qplus_sample(bx);
                let mut out: Vec<Q> = pos.iter().flat_map(|r| if r.is_zero() { vec![*r] } else { vec![*r, -r] }).collect();
                out.sort_by_key(|r| (r.abs(), *r));
                out.into_iter().map(Elem::Rat).collect()
            }
            Group::Sum(a, b) => product_by_rank(&a.sample(bx), &b.sample(bx)),
            Group::Fin(_) | Group::Trivial => unreachable!("finite groups return early"),
        }
    }

    fn iota(&self, m: &Instance, x: &Elem) -> Option<Elem> {
        match (self, &m.backend) {
            (_, Backend::AuHull(_)) => Some(x.clone()),
            (_, Backend::TensorOne(p)) => self.iota(p, x),
            (Group::Lattice(_), _) => Some(x.clone()),
            (Group::Fin(f), _) => f.index(m, x).map(|i| Elem::Idx(f.m().add(f.omega, i))),
            (Group::Rat, _) => Some(x.clone()),
            (Group::Trivial, _) => Some(Elem::Vec(vec![])),
            (Group::Sum(ga, gb), Backend::DirectSum(l, r)) => {
                let (a, b) = x.as_pair()?;
                Some(Elem::pair(ga.iota(l, a)?, gb.iota(r, b)?))
            }
            _ => None,
        }
    }

    fn describe(&self) -> GroupDescriptor {
        match self {
            Group::Lattice(v) => {
                let basis: Vec<Vec<i64>> = v.lattice.iter().map(|r| r.iter().map(|&c| c as i64).collect()).collect();
                let r = basis.len();
                GroupDescriptor {
                    description: if r == 0 { "trivial".into() } else { format!("Z^{r} inside Z^{}", v.dim) },
                    rank: Some(r),
                    order: None,
                    basis,
                }
            }
            Group::Fin(f) => {
                let k = f.members.len();
                GroupDescriptor {
                    description: if k == 1 { "trivial".into() } else { format!("finite abelian group of order {k}") },
                    rank: Some(0),
                    order: Some(k),
                    basis: vec![],
                }
            }
            Group::Rat => GroupDescriptor { description: "Q".into(), rank: None, order: None, basis: vec![] },
            Group::Trivial => {
                GroupDescriptor { description: "trivial".into(), rank: Some(0), order: Some(1), basis: vec![] }
            }
            Group::Sum(a, b) => {
                let (da, db) = (a.describe(), b.describe());
                GroupDescriptor {
                    description: format!("({}) x ({})", da.description, db.description),
                    rank: da.rank.zip(db.rank).map(|(x, y)| x + y),
                    order: da.order.zip(db.order).map(|(x, y)| x * y),
                    basis: vec![],
                }
            }
        }
    }
}

// ---- public group API ------------------------------------------------------

pub fn gr_group(m: &Instance) -> CoreResult<GroupDescriptor> {
    Ok(group(m)?.describe())
}

/// The canonical map `ι: M -> Gr(M)`.
pub fn iota(m: &Instance, x: &Elem) -> CoreResult<Elem> {
    m.validate(x)?;
    let g = group(m)?;
    g.iota(m, x).ok_or_else(|| CoreError::BackendMismatch(format!("cannot map {x} into the group of `{}`", m.name)))
}

pub fn gr_zero(m: &Instance) -> Elem {
    group(m).map(|g| g.zero()).unwrap_or(Elem::Vec(vec![]))
}

pub fn gr_add(m: &Instance, x: &Elem, y: &Elem) -> Elem {
    group(m).expect("group exists for hull instances").add(x, y)
}

pub fn gr_neg(m: &Instance, x: &Elem) -> Elem {
    group(m).expect("group exists for hull instances").neg(x)
}

pub fn gr_sub(m: &Instance, x: &Elem, y: &Elem) -> Elem {
    let g = group(m).expect("group exists for hull instances");
    g.add(x, &g.neg(y))
}

pub fn gr_scale(m: &Instance, k: i64, x: &Elem) -> Elem {
    group(m).expect("group exists for hull instances").scale(k, x)
}

/// Checks that `g` is a well-formed element of `Gr(M)`.
pub fn gr_validate(m: &Instance, g: &Elem) -> CoreResult<()> {
    if group(m)?.holds(g) {
        Ok(())
    } else {
        Err(CoreError::BackendMismatch(format!("{g} is not an element of the group of `{}`", m.name)))
    }
}

/// Group elements for quantified checks: lattice points of the box
/// `[-b, b]^d` ordered by sup-norm, or every element of a finite group.
pub fn gr_sample(m: &Instance, b: &SearchBudget) -> CoreResult<Vec<Elem>> {
    Ok(group(m)?.sample(b.sample_box))
}

pub fn fmt_gr(m: &Instance, x: &Elem) -> String {
    match (&m.backend, x) {
        (Backend::DirectSum(l, r), Elem::Pair(a, b)) => format!("({}, {})", fmt_gr(l, a), fmt_gr(r, b)),
        (Backend::Finite(_), _) => m.fmt_elem(x),
        (Backend::TensorOne(p) | Backend::AuHull(p), _) => fmt_gr(p, x),
        (Backend::PrincipalIdeal { .. } | Backend::Quotient { .. }, Elem::Idx(i)) => match m.finite_view() {
            Some(v) if *i < v.elems.len() => m.fmt_elem(&v.elems[*i]),
            _ => x.to_string(),
        },
        (Backend::CuZ, _) => "0".into(),
        (_, Elem::Rat(r)) => fmt_q(r),
        _ => x.to_string(),
    }
}

// ---- cones -----------------------------------------------------------------

/// Membership of `g` in a cone of `Gr(M)`, with witnesses.
pub fn cone_member(m: &Instance, cone: Cone, g: &Elem, b: &SearchBudget) -> CoreResult<Verdict> {
    let grp = group(m)?;
    if !grp.holds(g) {
        return Err(CoreError::BackendMismatch(format!("{g} is not an element of the group of `{}`", m.name)));
    }
    Ok(cone_verdict(m, &grp, cone, g, b))
}

fn cone_verdict(m: &Instance, grp: &Group, cone: Cone, g: &Elem, b: &SearchBudget) -> Verdict {
    let key = format!("cone:{cone}:{g}");
    m.memo(&key, b, || cone_uncached(m, grp, cone, g, b))
}

fn cone_uncached(m: &Instance, grp: &Group, cone: Cone, g: &Elem, b: &SearchBudget) -> Verdict {
    match (&m.backend, grp) {
        (Backend::Vector(v), _) => vector_cone(v, cone, g.as_vec().expect("lattice element"), b),
        (Backend::QPlus, _) => match g {
            Elem::Rat(r) if !r.is_negative() => Verdict::yes("nonnegative rational").with_n(1),
            _ => Verdict::no("negative rational"),
        },
        (Backend::CuZ, _) => Verdict::yes("the group is trivial").with_n(1),
        (Backend::DirectSum(l, r), Group::Sum(gl, gr)) => {
            let (a, c) = g.as_pair().expect("pair element");
            let va = cone_verdict(l, gl, cone, a, b);
            if va.is_no() {
                return Verdict::no(format!("first component: {}", va.certificate.summary));
            }
            let vc = cone_verdict(r, gr, cone, c, b);
            if vc.is_no() {
                return Verdict::no(format!("second component: {}", vc.certificate.summary));
            }
            if !(va.is_yes() && vc.is_yes()) {
                return Verdict::unknown(Bound::NMax, "a component is undecided");
            }
            match cone.base() {
                None => Verdict::yes("both components are members"),
                Some(base) => {
                    // Each component's good multiples form an additive
                    // set containing n_i and n_i + 1, hence every k >= n_i^2 - n_i.
                    let (n1, n2) = (va.certificate.n.unwrap_or(1), vc.certificate.n.unwrap_or(1));
                    let hi = [n1, n2, n1 * n1 - n1, n2 * n2 - n2].into_iter().max().unwrap();
                    for n in n1.max(n2)..=hi.max(n1.max(n2)) {
                        let ok = |k: u64| {
                            let x = grp.scale(k as i64, g);
                            cone_verdict(m, grp, base, &x, b).is_yes()
                        };
                        if ok(n) && ok(n + 1) {
                            return Verdict::yes("common multiple for both components").with_n(n);
                        }
                    }
                    Verdict::unknown(Bound::NMax, "no common multiple found")
                }
            }
        }
        (_, Group::Fin(f)) => finite_cone(m, f, cone, g),
        (Backend::TensorOne(p), _) => tensor_cone(m, p, grp, cone, g, b),
        (Backend::AuHull(p), _) => match cone {
            Cone::GrPlus | Cone::GrPlusPlus => {
                let mut v = cone_verdict(p, grp, HULL_CONE, g, b);
                v.certificate.summary = format!("hull membership: {}", v.certificate.summary).into();
                v
            }
            _ => generic_au(m, grp, cone, g, b),
        },
        _ => Verdict::unknown(Bound::SampleBox, "no decision route for this backend"),
    }
}

fn vector_cone(v: &VectorMonoid, cone: Cone, g: &[i64], b: &SearchBudget) -> Verdict {
    let zero = g.iter().all(|&c| c == 0);
    match (cone, &v.order_mode) {
        (Cone::GrPlus, _) | (Cone::GrPlusPlus, OrderMode::Algebraic) => {
            let mut out = v.contains(g, b);
            if out.is_yes() {
                out = out.witness("x", Elem::Vec(g.to_vec()));
            }
            out
        }
        (Cone::AuGrPlus, _) | (Cone::AuGrPlusPlus, OrderMode::Algebraic) => v.au_member(g, b),
        (_, OrderMode::Coordinatewise) => {
            // With y <= x coordinatewise the difference is nonnegative, and
            // any nonnegative lattice point splits as a difference of
            // combinations with the negative part below the positive part.
            if !v.in_lattice(g) {
                return Verdict::no("not in the group generated");
            }
            if let Some(i) = g.iter().position(|&c| c < 0) {
                return Verdict::no(format!("coordinate {i} is negative"));
            }
            Verdict::yes("nonnegative lattice point").with_n(1)
        }
        (_, OrderMode::Linear(w)) => {
            if zero {
                return Verdict::yes("zero").with_n(1);
            }
            if !v.in_lattice(g) {
                return Verdict::no("not in the group generated");
            }
            let val = crate::vector::value_of(w, g);
            if val.signum() > 0 {
                Verdict::yes(format!("positive value {val}")).with_n(1)
            } else {
                Verdict::no(format!("value {val} is not positive"))
            }
        }
    }
}

fn finite_cone(m: &Instance, f: &FinGroup, cone: Cone, g: &Elem) -> Verdict {
    let Some(gi) = f.member(g) else {
        return Verdict::no("not a group element");
    };
    let fm = f.m();
    let in_plus = |h: usize| f.members.binary_search(&h).is_ok();
    let in_plusplus = |h: usize| -> Option<(usize, usize)> {
        for x in 0..fm.len() {
            for y in 0..fm.len() {
                if fm.leq[y][x] {
                    let ix = fm.add(f.omega, x);
                    let iy = fm.add(f.omega, y);
                    if fm.add(ix, f.neg(iy)) == h {
                        return Some((x, y));
                    }
                }
            }
        }
        None
    };
    let elem_of = |i: usize| match &f.monoid {
        FinSource::Own(_) => Elem::Idx(i),
        FinSource::View(v) => v.elems[i].clone(),
    };
    let _ = m;
    match cone {
        // The kernel group is ι(M): ι(g) = ω + g = g for members.
        Cone::GrPlus => {
            if in_plus(gi) {
                Verdict::yes("every group element is the image of itself").witness("x", elem_of(gi)).with_n(1)
            } else {
                Verdict::no("not a group element")
            }
        }
        Cone::GrPlusPlus => match in_plusplus(gi) {
            Some((x, y)) => Verdict::yes("difference of comparable elements")
                .witness("x", elem_of(x))
                .witness("y", elem_of(y))
                .with_n(1),
            None => Verdict::no("no comparable pair has this difference (exhaustive)"),
        },
        Cone::AuGrPlus | Cone::AuGrPlusPlus => {
            let test = |h: usize| if cone == Cone::AuGrPlus { in_plus(h) } else { in_plusplus(h).is_some() };
            let order = f.members.len() as u64;
            let mult = |k: u64| {
                let mut acc = f.omega;
                for _ in 0..k {
                    acc = fm.add(acc, gi);
                }
                acc
            };
            for n in 1..=order {
                if test(mult(n)) && test(mult(n + 1)) {
                    return Verdict::yes("multiples found").with_n(n);
                }
            }
            Verdict::no("multiples of a finite group element cycle; every residue checked").reached(order)
        }
    }
}

fn tensor_cone(m: &Instance, p: &Instance, grp: &Group, cone: Cone, g: &Elem, b: &SearchBudget) -> Verdict {
    match cone {
        Cone::GrPlus => cone_verdict(p, grp, Cone::GrPlus, g, b),
        Cone::GrPlusPlus => {
            if grp.is_zero(g) {
                return Verdict::yes("zero").with_n(1);
            }
            // Search differences x - y with y ⊗ 1 <= x ⊗ 1.
            let sample = p.sample(&b.with_box(b.sample_box.min(6))).elems;
            let mut undecided = false;
            for y in &sample {
                let Some(iy) = grp.iota(p, y) else { continue };
                let target = grp.add(g, &iy);
                let Some(x) = sample.iter().find(|x| grp.iota(p, x).as_ref() == Some(&target)) else { continue };
                match tensorz::unit_leq(p, y, x, b).value {
                    Tri::Yes => {
                        return Verdict::yes("difference of elements comparable in M⊗1")
                            .witness("x", x.clone())
                            .witness("y", y.clone())
                            .with_n(1)
                    }
                    Tri::Unknown => undecided = true,
                    Tri::No => {}
                }
            }
            // y ⊗ 1 <= x ⊗ 1 forces y <=_p x, which for an algebraically
            // ordered cancellative vector monoid means x - y in Au(GrPlus).
            if let Backend::Vector(v) = &p.backend {
                if v.is_algebraic_mode() {
                    let au = cone_verdict(p, grp, Cone::AuGrPlus, g, b);
                    if au.is_no() {
                        return Verdict::no(format!("not in Au(GrPlus) of the parent: {}", au.certificate.summary));
                    }
                }
            }
            if !undecided {
                if let Some(view) = m.finite_view() {
                    let _ = view;
                    return Verdict::no("no comparable pair has this difference (exhaustive)");
                }
            }
            Verdict::unknown(Bound::SampleBox, "no comparable pair with this difference in the sample")
        }
        _ => generic_au(m, grp, cone, g, b),
    }
}

/// `n*g, (n+1)*g` in the base cone for some `1 <= n <= n_max`.
fn generic_au(m: &Instance, grp: &Group, cone: Cone, g: &Elem, b: &SearchBudget) -> Verdict {
    let base = cone.base().expect("hull cone");
    let mut prev = cone_verdict(m, grp, base, g, b).value;
    for n in 1..=b.n_max {
        let next = cone_verdict(m, grp, base, &grp.scale(n as i64 + 1, g), b).value;
        if prev.is_yes() && next.is_yes() {
            return Verdict::yes("multiples found").with_n(n);
        }
        prev = next;
    }
    Verdict::unknown(Bound::NMax, "no pair of consecutive multiples found up to n_max").reached(b.n_max)
}

/// Membership in the hull through a single nonzero multiple:
/// `g = 0` or `n*g` in `GrPlus \ {0}` for some `n`. Only valid when `M`
/// is simple.
pub fn au_member_simple(m: &Instance, g: &Elem, b: &SearchBudget) -> CoreResult<Verdict> {
    let simple = check_property(m, PropertyId::Simple, b);
    if !simple.is_yes() {
        return Err(CoreError::HypothesisFailure(format!(
            "Simple is {} for `{}`; the single-multiple description needs it",
            simple.value, m.name
        )));
    }
    let grp = group(m)?;
    if grp.is_zero(g) {
        return Ok(Verdict::yes("zero").with_n(1));
    }
    for n in 1..=b.n_max {
        let x = grp.scale(n as i64, g);
        if cone_verdict(m, &grp, Cone::GrPlus, &x, b).is_yes() {
            return Ok(Verdict::yes("a nonzero multiple lies in GrPlus").with_n(n));
        }
    }
    Ok(Verdict::unknown(Bound::NMax, "no positive multiple found up to n_max").reached(b.n_max))
}

// ---- the hull as an instance -----------------------------------------------

pub fn au_semigroup(m: &Instance) -> CoreResult<Instance> {
    group(m)?;
    Ok(Instance::au_hull(m))
}

pub fn au_validate(p: &Instance, x: &Elem, b: &SearchBudget) -> CoreResult<()> {
    let grp = group(p)?;
    if !grp.holds(x) {
        return Err(CoreError::BackendMismatch(format!("{x} is not an element of the group of `{}`", p.name)));
    }
    match cone_verdict(p, &grp, HULL_CONE, x, b).value {
        Tri::Yes => Ok(()),
        Tri::No => Err(CoreError::BackendMismatch(format!("{} is not in the hull of `{}`", fmt_gr(p, x), p.name))),
        Tri::Unknown => Err(CoreError::BackendMismatch(format!(
            "hull membership of {} is undecided within budget",
            fmt_gr(p, x)
        ))),
    }
}

/// The hull order: `x <= y` iff `y - x` is in the hull cone.
pub fn au_leq(p: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> Verdict {
    let Ok(grp) = group(p) else {
        return Verdict::unknown(Bound::SampleBox, "no group for the parent");
    };
    let d = grp.add(y, &grp.neg(x));
    let mut v = cone_verdict(p, &grp, HULL_CONE, &d, b);
    if v.is_yes() {
        v = v.witness("z", d);
    }
    v
}

pub fn au_carrier(p: &Instance) -> Option<Vec<Elem>> {
    let grp = group(p).ok()?;
    let all = grp.elements()?;
    let b = p.budget;
    let mut out = Vec::new();
    for g in all {
        match cone_verdict(p, &grp, HULL_CONE, &g, &b).value {
            Tri::Yes => out.push(g),
            Tri::No => {}
            Tri::Unknown => return None,
        }
    }
    Some(out)
}

pub fn au_sample(p: &Instance, b: &SearchBudget) -> Vec<Elem> {
    let Ok(grp) = group(p) else { return vec![] };
    grp.sample(b.sample_box.min(4))
        .into_iter()
        .filter(|g| cone_verdict(p, &grp, HULL_CONE, g, b).is_yes())
        .collect()
}

/// The model of the stabilized projection semigroup: the hull of `M`
/// together with the checks that accompany it.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub hull: Instance,
    pub finiteness: Verdict,
    pub cancellation_into_ideals: Verdict,
    /// Almost unperforation of the hull over its sample.
    pub almost_unperforated: Verdict,
    /// Weak divisibility of the hull, checked when `M` is weakly divisible.
    pub weakly_divisible: Option<Verdict>,
}

pub fn z_stabilized(m: &Instance, b: &SearchBudget) -> CoreResult<Stabilized> {
    let finiteness = check_property(m, PropertyId::Finiteness, b);
    let ci = check_property(m, PropertyId::CancellationIntoIdeals, b);
    for (name, v) in [("Finiteness", &finiteness), ("CancellationIntoIdeals", &ci)] {
        if v.is_no() {
            return Err(CoreError::HypothesisFailure(format!("{name} is No for `{}`", m.name)));
        }
    }
    let hull = au_semigroup(m)?.named(format!("stab({})", m.name));
    let hb = b.with_box(b.sample_box.min(3));
    let almost_unperforated = check_property(&hull, PropertyId::AlmostUnperforated, &hb);
    let weakly_divisible = if check_property(m, PropertyId::WeaklyDivisible, b).is_yes() {
        Some(check_property(&hull, PropertyId::WeaklyDivisible, &hb))
    } else {
        None
    };
    Ok(Stabilized { hull, finiteness, cancellation_into_ideals: ci, almost_unperforated, weakly_divisible })
}

// ---- maps out of the hull --------------------------------------------------

/// A semigroup map `f: M -> N` given on the generators of a vector
/// monoid `M`, with target a vector monoid or `Q+`.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub source: Instance,
    pub target: Instance,
    gens: Vec<Vec<i64>>,
    images: Vec<Vec<Q>>,
    basis: Vec<usize>,
}

impl GeneratorMap {
    pub fn new(source: &Instance, target: &Instance, assignment: &[(Elem, Elem)]) -> CoreResult<GeneratorMap> {
        let Backend::Vector(v) = &source.backend else {
            return Err(CoreError::UnsupportedBackend(format!(
                "maps are given on generators of a vector monoid, not `{}`",
                source.kind()
            )));
        };
        if !matches!(target.backend, Backend::Vector(_) | Backend::QPlus) {
            return Err(CoreError::UnsupportedBackend(format!("target `{}` must be a vector monoid or Q+", target.kind())));
        }
        let mut images = Vec::with_capacity(v.generators.len());
        for (i, gen) in v.generators.iter().enumerate() {
            let Some((_, img)) = assignment.iter().find(|(k, _)| k.as_vec() == Some(gen.as_slice())) else {
                return Err(CoreError::Invalid(format!("generator {i} {:?} has no image", gen)));
            };
            target.validate(img)?;
            images.push(to_qvec(img));
        }
        for (k, _) in assignment {
            if !v.generators.iter().any(|g| k.as_vec() == Some(g.as_slice())) {
                return Err(CoreError::Invalid(format!("{k} is not a generator of `{}`", source.name)));
            }
        }
        let basis = independent_subset(&v.generators, v.dim);
        let map = GeneratorMap { source: source.clone(), target: target.clone(), gens: v.generators.clone(), images, basis };
        // Relations among generators must map to relations.
        for (i, gen) in map.gens.iter().enumerate() {
            if map.linear(gen)? != map.images[i] {
                return Err(CoreError::HypothesisFailure(format!(
                    "the images violate a relation of `{}` at generator {:?}",
                    source.name, gen
                )));
            }
        }
        Ok(map)
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    /// `f(sum c_i g_i) = sum c_i f(g_i)`.
    pub fn on_combination(&self, coeffs: &[u64]) -> Vec<Q> {
        let dim = self.images.first().map_or(0, |v| v.len());
        let mut acc = vec![Q::zero(); dim];
        for (c, img) in coeffs.iter().zip(&self.images) {
            for (a, x) in acc.iter_mut().zip(img) {
                *a += x * q(*c as i128);
            }
        }
        acc
    }

    /// `f(x)` through a membership combination of `x`.
    pub fn apply(&self, x: &Elem, b: &SearchBudget) -> CoreResult<Elem> {
        let v = self.source.as_vector().expect("vector source");
        let xv = x.as_vec().ok_or_else(|| CoreError::BackendMismatch(format!("{x} is not a vector")))?;
        let c = v.contains(xv, b);
        match (c.value, &c.certificate.combination) {
            (Tri::Yes, Some(comb)) => self.to_target(&self.on_combination(comb)),
            _ => Err(CoreError::BackendMismatch(format!("{x} is not a member of `{}`", self.source.name))),
        }
    }

    /// The unique group map agreeing with `f` on generators, by solving
    /// in an independent subset of the generators.
    pub fn linear(&self, g: &[i64]) -> CoreResult<Vec<Q>> {
        let cols: Vec<Vec<i64>> = self.basis.iter().map(|&i| self.gens[i].clone()).collect();
        let c = solve_rational(&cols, g)
            .ok_or_else(|| CoreError::BackendMismatch(format!("{g:?} is outside the span of the generators")))?;
        let dim = self.images.first().map_or(0, |v| v.len());
        let mut acc = vec![Q::zero(); dim];
        for (cj, &i) in c.iter().zip(&self.basis) {
            for (a, x) in acc.iter_mut().zip(&self.images[i]) {
                *a += cj * x;
            }
        }
        Ok(acc)
    }

    pub fn to_target(&self, v: &[Q]) -> CoreResult<Elem> {
        match &self.target.backend {
            Backend::QPlus => Ok(Elem::Rat(v[0])),
            _ => {
                if v.iter().any(|c| !c.is_integer()) {
                    return Err(CoreError::BackendMismatch(format!("image {v:?} is not an integer vector")));
                }
                Ok(Elem::Vec(v.iter().map(|c| c.to_integer() as i64).collect()))
            }
        }
    }

    fn check_order_preserving(&self, b: &SearchBudget) -> CoreResult<usize> {
        let sb = b.with_box(b.sample_box.min(4));
        let s = self.source.sample(&sb).elems;
        let imgs: Vec<Elem> = s.iter().map(|x| self.apply(x, b)).collect::<CoreResult<_>>()?;
        let mut checked = 0;
        for (i, x) in s.iter().enumerate() {
            for (j, y) in s.iter().enumerate() {
                if self.source.leq_tri(x, y, b).is_yes() {
                    checked += 1;
                    if self.target.leq_tri(&imgs[i], &imgs[j], b).is_no() {
                        return Err(CoreError::NotOrderPreserving(format!(
                            "{} <= {} but f gives {} and {}",
                            self.source.fmt_elem(x),
                            self.source.fmt_elem(y),
                            self.target.fmt_elem(&imgs[i]),
                            self.target.fmt_elem(&imgs[j])
                        )));
                    }
                }
            }
        }
        Ok(checked)
    }
}

fn to_qvec(e: &Elem) -> Vec<Q> {
    match e {
        Elem::Vec(v) => v.iter().map(|&c| q(c as i128)).collect(),
        Elem::Rat(r) => vec![*r],
        _ => vec![],
    }
}

/// The factorization of an order-preserving `f: M -> N` through the hull
/// of `M`, built two ways: linear extension to the group, and the
/// multiple-comparison recipe on each hull element.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub map: GeneratorMap,
    /// Sampled comparable pairs on which order preservation was checked.
    pub order_pairs_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeTrace {
    pub n: u64,
    /// `f(y) + a = f(x)` for `n*g = ι(x) - ι(y)`.
    pub a: Elem,
    /// `f(w) + b = f(z)` for `(n+1)*g = ι(z) - ι(w)`.
    pub b: Elem,
    /// `a + c = b`.
    pub c: Elem,
}

pub fn universal_factorization(
    m: &Instance,
    n: &Instance,
    assignment: &[(Elem, Elem)],
    b: &SearchBudget,
) -> CoreResult<Factorization> {
    for p in [PropertyId::AlgebraicallyOrdered, PropertyId::Cancellative, PropertyId::AlmostUnperforated] {
        if check_property(n, p, b).is_no() {
            return Err(CoreError::HypothesisFailure(format!("{} is No for the target `{}`", p.name(), n.name)));
        }
    }
    let map = GeneratorMap::new(m, n, assignment)?;
    let order_pairs_checked = map.check_order_preserving(b)?;
    Ok(Factorization { map, order_pairs_checked })
}

impl Factorization {
    /// The factored map on a hull element, by linear extension.
    pub fn apply(&self, g: &Elem, b: &SearchBudget) -> CoreResult<Elem> {
        let v = cone_member(&self.map.source, HULL_CONE, g, b)?;
        if !v.is_yes() {
            return Err(CoreError::BackendMismatch(format!("{g} is not in the hull ({})", v.value)));
        }
        let out = self.map.to_target(&self.map.linear(g.as_vec().expect("lattice element"))?)?;
        self.map.target.validate(&out)?;
        Ok(out)
    }

    /// The factored map on a hull element from differences and multiples
    /// only, without using the group structure of the source.
    pub fn apply_by_multiples(&self, g: &Elem, b: &SearchBudget) -> CoreResult<(Elem, RecipeTrace)> {
        let src = &self.map.source;
        let tgt = &self.map.target;
        let mv = cone_member(src, HULL_CONE, g, b)?;
        let Some(n) = mv.certificate.n.filter(|_| mv.is_yes()) else {
            return Err(CoreError::BackendMismatch(format!("{g} is not in the hull ({})", mv.value)));
        };
        let gv = g.as_vec().expect("lattice element");
        let diff = |k: u64| -> CoreResult<Elem> {
            let u: Vec<i64> = gv.iter().map(|c| c * k as i64).collect();
            let (x, y) = difference_witness(src, &u, b)?;
            let fx = to_qvec(&self.map.apply(&Elem::Vec(x), b)?);
            let fy = to_qvec(&self.map.apply(&Elem::Vec(y), b)?);
            let d: Vec<Q> = fx.iter().zip(&fy).map(|(p, q)| p - q).collect();
            self.map.to_target(&d)
        };
        let a = diff(n)?;
        let bb = diff(n + 1)?;
        let (qa, qb) = (to_qvec(&a), to_qvec(&bb));
        let lhs: Vec<Q> = qa.iter().map(|x| x * q(n as i128 + 1)).collect();
        let rhs: Vec<Q> = qb.iter().map(|x| x * q(n as i128)).collect();
        if lhs != rhs {
            return Err(CoreError::HypothesisFailure(format!(
                "(n+1)a = nb fails for n = {n}: the target is not cancellative on these values"
            )));
        }
        let c: Vec<Q> = qb.iter().zip(&qa).map(|(x, y)| x - y).collect();
        let c = self.map.to_target(&c)?;
        tgt.validate(&c)?;
        Ok((c.clone(), RecipeTrace { n, a, b: bb, c }))
    }
}

/// `u = x - y` with `y <= x` in a vector monoid.
fn difference_witness(m: &Instance, u: &[i64], b: &SearchBudget) -> CoreResult<(Vec<i64>, Vec<i64>)> {
    let v = m.as_vector().expect("vector source");
    if v.is_algebraic_mode() && v.contains(u, b).is_yes() {
        return Ok((u.to_vec(), vec![0; u.len()]));
    }
    let ell = v.positive.as_ref().ok_or_else(|| CoreError::UnsupportedBackend("no positive functional".into()))?;
    let max_gen: i128 = v.generators.iter().map(|g| crate::lattice::dot(ell, g)).max().unwrap_or(1);
    let bound: i128 = ell.iter().zip(u).map(|(l, c)| (*l as i128).abs() * (*c as i128).abs()).sum::<i128>() + 2 * max_gen;
    for y in v.elements_upto(bound).unwrap_or_default() {
        let x: Vec<i64> = u.iter().zip(&y).map(|(a, c)| a + c).collect();
        if v.contains(&x, b).is_yes() && v.leq_tri(&y, &x, b).is_yes() {
            return Ok((x, y));
        }
    }
    Err(CoreError::BackendMismatch(format!("{u:?} is not a difference of comparable elements within budget")))
}

/// The map `Au(M) -> Au(N)` induced by `f: M -> N`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub map: GeneratorMap,
    /// Sampled hull elements whose image was checked to lie in the target hull.
    pub hull_checked: usize,
    /// Sampled elements on which the square `f̄ ∘ ι = ι ∘ f` was checked.
    pub square_checked: usize,
}

pub fn functorial_au(
    m: &Instance,
    n: &Instance,
    assignment: &[(Elem, Elem)],
    b: &SearchBudget,
) -> CoreResult<InducedMap> {
    let map = GeneratorMap::new(m, n, assignment)?;
    map.check_order_preserving(b)?;
    let sb = b.with_box(b.sample_box.min(4));
    let mut square_checked = 0;
    for x in m.sample(&sb).elems {
        let lhs = map.to_target(&map.linear(x.as_vec().expect("vector"))?)?;
        let rhs = iota(n, &map.apply(&x, b)?)?;
        if lhs != rhs {
            return Err(CoreError::HypothesisFailure(format!("square fails at {}", m.fmt_elem(&x))));
        }
        square_checked += 1;
    }
    let mut hull_checked = 0;
    for g in au_sample(m, &sb) {
        let img = map.to_target(&map.linear(g.as_vec().expect("vector"))?)?;
        let v = cone_member(n, HULL_CONE, &img, b)?;
        if v.is_no() {
            return Err(CoreError::HypothesisFailure(format!(
                "{} is in the hull of the source but its image {} is not in the target hull",
                fmt_gr(m, &g),
                fmt_gr(n, &img)
            )));
        }
        hull_checked += 1;
    }
    Ok(InducedMap { map, hull_checked, square_checked })
}

impl InducedMap {
    pub fn apply(&self, g: &Elem) -> CoreResult<Elem> {
        self.map.to_target(&self.map.linear(g.as_vec().ok_or_else(|| CoreError::BackendMismatch(format!("{g}")))?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::OrderMode;

    fn cone33() -> Instance {
        Instance::vector(
            "cone33",
            VectorMonoid::new(2, vec![vec![1, 0], vec![0, 1], vec![3, -3]], OrderMode::Algebraic).unwrap(),
        )
    }

    #[test]
    fn cone33_hull_contains_two_minus_one() {
        let m = cone33();
        let b = SearchBudget::default();
        let g = Elem::Vec(vec![2, -1]);
        assert!(cone_member(&m, Cone::GrPlus, &g, &b).unwrap().is_no());
        let v = cone_member(&m, Cone::AuGrPlus, &g, &b).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.certificate.n, Some(2));
    }

    #[test]
    fn numerical_semigroup_hull_is_nat() {
        let m = Instance::numerical(&[2, 3]);
        let b = SearchBudget::default();
        assert_eq!(gr_group(&m).unwrap().rank, Some(1));
        for k in 0..10 {
            assert!(cone_member(&m, Cone::AuGrPlus, &Elem::Vec(vec![k]), &b).unwrap().is_yes());
            assert!(cone_member(&m, Cone::AuGrPlus, &Elem::Vec(vec![-k - 1]), &b).unwrap().is_no());
        }
        let s = au_member_simple(&m, &Elem::Vec(vec![1]), &b).unwrap();
        assert!(s.is_yes());
    }

    #[test]
    fn absorbing_element_kills_the_group() {
        let names = vec!["0".into(), "1".into(), "T".into()];
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        let f = FiniteMonoid::new(names, table, crate::finite::OrderSpec::Algebraic).unwrap();
        let m = Instance::finite("one_t", f);
        let d = gr_group(&m).unwrap();
        assert_eq!(d.order, Some(1));
        assert_eq!(iota(&m, &Elem::Idx(1)).unwrap(), Elem::Idx(2));
    }

    #[test]
    fn factorization_paths_agree_on_cone33() {
        let m = cone33();
        let nat = Instance::free(1);
        let b = SearchBudget::default();
        let asg = vec![
            (Elem::Vec(vec![1, 0]), Elem::Vec(vec![1])),
            (Elem::Vec(vec![0, 1]), Elem::Vec(vec![1])),
            (Elem::Vec(vec![3, -3]), Elem::Vec(vec![0])),
        ];
        let f = universal_factorization(&m, &nat, &asg, &b).unwrap();
        let g = Elem::Vec(vec![2, -1]);
        assert_eq!(f.apply(&g, &b).unwrap(), Elem::Vec(vec![1]));
        let (c, trace) = f.apply_by_multiples(&g, &b).unwrap();
        assert_eq!(c, Elem::Vec(vec![1]));
        assert_eq!(trace.n, 2);
    }

    #[test]
    fn doubling_map_is_functorial() {
        let nat = Instance::free(1);
        let b = SearchBudget::default();
        let f = functorial_au(&nat, &nat, &[(Elem::Vec(vec![1]), Elem::Vec(vec![2]))], &b).unwrap();
        assert_eq!(f.apply(&Elem::Vec(vec![3])).unwrap(), Elem::Vec(vec![6]));
    }
}
