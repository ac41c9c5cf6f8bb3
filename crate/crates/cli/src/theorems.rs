//! Theorem checks: each id wires hypotheses and conclusions of one result
//! to the core deciders and evaluates them on a single instance.
//!
//! Sampled checks follow one rule. A pair whose premise is `Yes` and whose
//! conclusion is `No` is a violation and makes the status `Fail`. With no
//! violation, at least one confirmed premise gives `Pass`; a decided-`No`
//! hypothesis gives `Vacuous`; anything else is `Undecided`.

use orderlab_core::arith::{q, qf};
use orderlab_core::culayer::{self, AlgebraicCu, Axiom, CuElem, Tail};
use orderlab_core::grothendieck::{
    self, cone_member, gr_add, gr_neg, gr_sample, gr_scale, gr_zero, iota, universal_factorization, Cone,
};
use orderlab_core::instance::Backend;
use orderlab_core::json::{elem_json, gr_json, parse_elem};
use orderlab_core::relations::{evaluate_implication, implications, rel_d, rel_p, rel_s, check_property, Status};
use orderlab_core::tensorz::{self, oracle_leq, replay_chain, unit_leq, FormalSum};
use orderlab_core::{CoreError, CuZ, Elem, Instance, PropertyId, SearchBudget, Tri};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value};

pub struct Theorem {
    pub id: &'static str,
    pub title: &'static str,
    run: fn(&Instance, &SearchBudget) -> Option<Outcome>,
}

impl Theorem {
    /// `None` when the theorem has no wiring for this instance.
    pub fn run(&self, m: &Instance, b: &SearchBudget) -> Option<Outcome> {
        (self.run)(m, b)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub details: Map<String, Value>,
}

impl Outcome {
    fn new(status: Status) -> Outcome {
        Outcome { status, details: Map::new() }
    }

    fn with(mut self, key: &str, v: Value) -> Outcome {
        self.details.insert(key.into(), v);
        self
    }
}

pub fn status_json(s: &Status) -> Value {
    match s {
        Status::Vacuous(h) => json!({ "status": "Vacuous", "failing_hypothesis": h }),
        s => json!({ "status": s.as_str() }),
    }
}

/// Counts premise/conclusion pairs over a sample.
#[derive(Default)]
pub struct Tally {
    pub confirmed: usize,
    pub undecided: usize,
    pub violations: Vec<Value>,
}

impl Tally {
    fn imp(&mut self, premise: Tri, conclusion: Tri, witness: impl FnOnce() -> Value) {
        if premise.is_yes() {
            match conclusion {
                Tri::Yes => self.confirmed += 1,
                Tri::No => {
                    if self.violations.len() < 8 {
                        self.violations.push(witness());
                    } else {
                        self.violations.push(Value::Null);
                    }
                }
                Tri::Unknown => self.undecided += 1,
            }
        }
    }

    fn violation(&mut self, w: Value) {
        self.violations.push(w);
    }

    pub fn status(&self) -> Status {
        if !self.violations.is_empty() {
            Status::Fail
        } else if self.confirmed > 0 {
            Status::Pass
        } else {
            Status::Undecided
        }
    }

    fn outcome(self) -> Outcome {
        let status = self.status();
        let violations: Vec<Value> = self.violations.into_iter().filter(|v| !v.is_null()).collect();
        let mut o = Outcome::new(status).with("confirmed", json!(self.confirmed)).with("undecided", json!(self.undecided));
        if !violations.is_empty() {
            o = o.with("violations", Value::Array(violations));
        }
        o
    }
}

fn prop(m: &Instance, p: PropertyId, b: &SearchBudget) -> Tri {
    check_property(m, p, b).value
}

/// The first hypothesis decided `No`, else whether all are `Yes`.
fn hypotheses(m: &Instance, ps: &[PropertyId], b: &SearchBudget) -> Result<bool, String> {
    let mut all = true;
    for &p in ps {
        match prop(m, p, b) {
            Tri::No => return Err(p.name().into()),
            Tri::Unknown => all = false,
            Tri::Yes => {}
        }
    }
    Ok(all)
}

fn hyp_json(m: &Instance, ps: &[PropertyId], b: &SearchBudget) -> Value {
    let mut o = Map::new();
    for &p in ps {
        o.insert(p.name().into(), json!(prop(m, p, b).as_str()));
    }
    Value::Object(o)
}

/// Gate on hypotheses: `Err` carries the finished outcome.
fn gate(m: &Instance, ps: &[PropertyId], b: &SearchBudget) -> Result<(), Outcome> {
    match hypotheses(m, ps, b) {
        Err(h) => Err(Outcome::new(Status::Vacuous(h)).with("hypotheses", hyp_json(m, ps, b))),
        Ok(false) => Err(Outcome::new(Status::Undecided).with("hypotheses", hyp_json(m, ps, b))),
        Ok(true) => Ok(()),
    }
}

fn sample(m: &Instance, b: &SearchBudget, cap: i64) -> Vec<Elem> {
    m.sample(&b.with_box(b.sample_box.min(cap))).elems
}

fn pair_json(m: &Instance, x: &Elem, y: &Elem) -> Value {
    json!({ "x": elem_json(m, x), "y": elem_json(m, y) })
}

// ---- implication bundles ----------------------------------------------------

fn bundle(m: &Instance, b: &SearchBudget, keys: &[&str]) -> Outcome {
    let all = implications();
    let mut statuses = Vec::new();
    let mut per = Map::new();
    for key in keys {
        let imp = all.iter().find(|i| i.key == *key).expect("registered implication key");
        let r = evaluate_implication(m, imp, b);
        let mut vals = Map::new();
        for (name, v) in &r.values {
            vals.insert((*name).into(), json!(v.as_str()));
        }
        let mut entry = status_json(&r.status);
        entry["values"] = Value::Object(vals);
        per.insert((*key).into(), entry);
        statuses.push(r.status);
    }
    Outcome::new(Status::combine(&statuses)).with("implications", Value::Object(per))
}

fn l13(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    Some(bundle(m, b, &["strongly-finite-ideal-monotone"]))
}

fn l22(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    Some(bundle(
        m,
        b,
        &[
            "nearly-separative-gives-ideal-separation",
            "ideal-separation-gives-nearly-separative",
            "ideal-separation-gives-halving",
            "ideal-separation-gives-preminimal",
            "nearly-separative-gives-separative",
        ],
    ))
}

fn p28(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    Some(bundle(
        m,
        b,
        &[
            "algebraic-order-gives-preminimal",
            "cancellative-gives-separative-ci-strongly-finite",
            "separative-ci-strongly-finite-gives-cancellative",
            "order-cancellative-gives-order-separative-oci-strongly-finite",
            "order-separative-oci-strongly-finite-gives-order-cancellative",
            "order-cancellative-gives-strongly-finite-nearly-separative-soci",
            "strongly-finite-nearly-separative-soci-gives-order-cancellative",
            "strongly-finite-soci-gives-oci",
            "simple-gives-cancellation-into-ideals",
        ],
    ))
}

fn l32(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    Some(bundle(m, b, &["weakly-divisible-gives-almost-divisible", "almost-divisible-gives-weakly-divisible"]))
}

fn p38(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    Some(bundle(
        m,
        b,
        &[
            "nearly-unperforated-gives-almost-unperforated",
            "nearly-unperforated-gives-nearly-separative",
            "nu-ci-gives-au-cancellative",
            "au-cancellative-gives-nu-ci",
        ],
    ))
}

fn t310(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    Some(bundle(m, b, &["sf-nu-ci-gives-au-cancellative", "au-cancellative-gives-sf-nu-ci"]))
}

// ---- cones ------------------------------------------------------------------

fn member(m: &Instance, c: Cone, g: &Elem, b: &SearchBudget) -> Tri {
    cone_member(m, c, g, b).map_or(Tri::Unknown, |v| v.value)
}

fn gr_elems(m: &Instance, b: &SearchBudget, cap: i64) -> Result<Vec<Elem>, Outcome> {
    gr_sample(m, &b.with_box(b.sample_box.min(cap)))
        .map_err(|e| Outcome::new(Status::Undecided).with("error", json!(e.to_string())))
}

fn l41(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    if let Err(o) = gate(m, &[StrongFiniteness, AlgebraicallyOrdered, CancellationIntoIdeals, AlmostUnperforated], b) {
        return Some(o);
    }
    let gs = match gr_elems(m, b, 3) {
        Ok(g) => g,
        Err(o) => return Some(o),
    };
    let mut t = Tally::default();
    let top = b.n_max.min(8);
    for g in &gs {
        let mut premise = Tri::No;
        for n in 1..=top {
            let both = member(m, Cone::GrPlus, &gr_scale(m, n as i64, g), b)
                .and(member(m, Cone::GrPlus, &gr_scale(m, n as i64 + 1, g), b));
            premise = premise.or(both);
            if premise.is_yes() {
                break;
            }
        }
        t.imp(premise, member(m, Cone::GrPlus, g, b), || json!({ "g": gr_json(m, g) }));
    }
    Some(t.outcome().with("group_elements", json!(gs.len())))
}

/// Addition closure, strictness and almost unperforation of an Au cone,
/// over sampled group elements with multiples up to `n_max`.
pub fn au_cone_checks(m: &Instance, cone: Cone, gs: &[Elem], b: &SearchBudget) -> Tally {
    let mut t = Tally::default();
    let base = cone.base().expect("an Au cone");
    let inside: Vec<Tri> = gs.iter().map(|g| member(m, cone, g, b)).collect();
    for (g, a) in gs.iter().zip(&inside) {
        t.imp(member(m, base, g, b), *a, || json!({ "kind": "base cone not inside", "g": gr_json(m, g) }));
    }
    for (i, g) in gs.iter().enumerate() {
        for (j, h) in gs.iter().enumerate().skip(i) {
            let both = inside[i].and(inside[j]);
            if both.is_yes() {
                let s = gr_add(m, g, h);
                t.imp(both, member(m, cone, &s, b), || {
                    json!({ "kind": "not closed under addition", "g": gr_json(m, g), "h": gr_json(m, h) })
                });
            }
        }
    }
    let zero = gr_zero(m);
    for (g, a) in gs.iter().zip(&inside) {
        if a.is_yes() {
            let neg = member(m, cone, &gr_neg(m, g), b);
            if neg.is_yes() {
                t.imp(Tri::Yes, Tri::from_bool(*g == zero), || json!({ "kind": "not strict", "g": gr_json(m, g) }));
            } else if neg.is_no() {
                t.confirmed += 1;
            } else {
                t.undecided += 1;
            }
        }
    }
    for (g, a) in gs.iter().zip(&inside) {
        if a.is_yes() {
            continue;
        }
        for n in 1..=b.n_max {
            let ng = member(m, cone, &gr_scale(m, n as i64, g), b);
            if !ng.is_yes() {
                continue;
            }
            let premise = ng.and(member(m, cone, &gr_scale(m, n as i64 + 1, g), b));
            if premise.is_yes() {
                t.imp(premise, *a, || json!({ "kind": "not almost unperforated", "g": gr_json(m, g), "n": n }));
                break;
            }
        }
    }
    t
}

fn p43(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let gs = match gr_elems(m, b, 3) {
        Ok(g) => g,
        Err(o) => return Some(o),
    };
    let mut parts = Map::new();
    let mut statuses = Vec::new();
    for cone in [Cone::AuGrPlus, Cone::AuGrPlusPlus] {
        let o = au_cone_checks(m, cone, &gs, b).outcome();
        statuses.push(o.status.clone());
        let mut v = status_json(&o.status);
        for (k, x) in o.details {
            v[k] = x;
        }
        parts.insert(cone.as_str().into(), v);
    }
    let status = if statuses.contains(&Status::Fail) { Status::Fail } else { Status::combine(&statuses) };
    Some(Outcome::new(status).with("cones", Value::Object(parts)).with("group_elements", json!(gs.len())))
}

/// `x <= y ⟺ ι(y) - ι(x) ∈ cone` on the sample; `No` is definite, `Yes`
/// only when the sample is the whole carrier.
fn embedding(m: &Instance, cone: Cone, b: &SearchBudget) -> (Tri, Option<Value>) {
    let s = m.sample(&b.with_box(b.sample_box.min(4)));
    let mut undecided = false;
    for x in &s.elems {
        for y in &s.elems {
            let d = match (iota(m, x), iota(m, y)) {
                (Ok(ix), Ok(iy)) => grothendieck::gr_sub(m, &iy, &ix),
                _ => return (Tri::Unknown, None),
            };
            match (m.leq_tri(x, y, b), member(m, cone, &d, b)) {
                (Tri::Yes, Tri::Yes) | (Tri::No, Tri::No) => {}
                (Tri::Unknown, _) | (_, Tri::Unknown) => undecided = true,
                (l, _) => {
                    let mut w = pair_json(m, x, y);
                    w["leq"] = json!(l.as_str());
                    return (Tri::No, Some(w));
                }
            }
        }
    }
    (if s.exhaustive && !undecided { Tri::Yes } else { Tri::Unknown }, None)
}

fn iff_status(props: Tri, emb: Tri) -> Status {
    match (props, emb) {
        (Tri::Yes, Tri::No) => Status::Fail,
        (Tri::No, Tri::Yes) => Status::Fail,
        (Tri::Yes, _) => Status::Pass,
        (Tri::No, Tri::No) => Status::Pass,
        _ => Status::Undecided,
    }
}

fn p46(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    let mut parts = Map::new();
    let mut statuses = Vec::new();
    // (ii): into the Au hull of Gr++, for any M.
    let p2 = prop(m, OrderCancellative, b).and(prop(m, NearlyUnperforated, b));
    let (e2, w2) = embedding(m, Cone::AuGrPlusPlus, b);
    let s2 = iff_status(p2, e2);
    parts.insert("order_cancellative_and_nearly_unperforated".into(), json!({
        "properties": p2.as_str(), "embedding": e2.as_str(), "status": s2.as_str(), "counterexample": w2,
    }));
    statuses.push(s2);
    // (iii): into the Au hull of Gr+, for algebraically ordered M.
    let s3 = match prop(m, AlgebraicallyOrdered, b) {
        Tri::No => Status::Vacuous(AlgebraicallyOrdered.name().into()),
        Tri::Unknown => Status::Undecided,
        Tri::Yes => {
            let p3 = prop(m, Cancellative, b).and(prop(m, AlmostUnperforated, b));
            let (e3, w3) = embedding(m, Cone::AuGrPlus, b);
            let s = iff_status(p3, e3);
            parts.insert("cancellative_and_almost_unperforated".into(), json!({
                "properties": p3.as_str(), "embedding": e3.as_str(), "status": s.as_str(), "counterexample": w3,
            }));
            s
        }
    };
    statuses.push(s3);
    Some(Outcome::new(Status::combine(&statuses)).with("parts", Value::Object(parts)))
}

fn p48(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    if let Err(o) = gate(m, &[Finiteness, AlgebraicallyOrdered, WeaklyDivisible], b) {
        return Some(o);
    }
    let hull = match grothendieck::au_semigroup(m) {
        Ok(h) => h,
        Err(e) => return Some(Outcome::new(Status::Undecided).with("error", json!(e.to_string()))),
    };
    let hb = b.with_box(b.sample_box.min(3));
    let elems = hull.sample(&hb).elems;
    let mut t = Tally::default();
    for x in elems.iter().take(8) {
        for n in 1..=b.n_max.min(5) {
            let found = elems.iter().find_map(|y| {
                elems.iter().find(|z| hull.eq_tri(&hull.plus(&hull.mul(n, y), &hull.mul(n + 1, z)), x).is_yes()).map(|z| (y, z))
            });
            match found {
                Some(_) => t.confirmed += 1,
                None => t.undecided += 1,
            }
        }
    }
    let wd = check_property(&hull, WeaklyDivisible, &hb).value;
    t.imp(Tri::Yes, wd.or(Tri::Unknown), || json!({ "kind": "hull is not weakly divisible" }));
    Some(t.outcome().with("hull_weakly_divisible", json!(wd.as_str())))
}

// ---- the universal map ------------------------------------------------------

/// The generator assignments checked for the factorization through the hull.
fn t49_map(m: &Instance) -> Option<Vec<(Elem, Elem)>> {
    let v = |c: &[i64]| Elem::Vec(c.to_vec());
    match m.name.as_str() {
        "nat" => Some(vec![(v(&[1]), v(&[1]))]),
        "num2_3" => Some(vec![(v(&[2]), v(&[2])), (v(&[3]), v(&[3]))]),
        "cone33" => Some(vec![(v(&[1, 0]), v(&[1])), (v(&[0, 1]), v(&[1])), (v(&[3, -3]), v(&[0]))]),
        _ => None,
    }
}

fn t49(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let assignment = t49_map(m)?;
    let target = Instance::free(1);
    let fac = match universal_factorization(m, &target, &assignment, b) {
        Ok(f) => f,
        Err(CoreError::HypothesisFailure(h)) => return Some(Outcome::new(Status::Vacuous(h))),
        Err(e) => return Some(Outcome::new(Status::Fail).with("error", json!(e.to_string()))),
    };
    let mut t = Tally::default();
    let check = |g: &Elem, expect: Option<&Elem>, t: &mut Tally| {
        let a = fac.apply(g, b);
        let c = fac.apply_by_multiples(g, b).map(|(c, _)| c);
        match (&a, &c) {
            (Ok(a), Ok(c)) if a == c && expect.map_or(true, |e| e == a) => t.confirmed += 1,
            _ => t.violation(json!({
                "g": gr_json(m, g),
                "linear": a.as_ref().map(|x| elem_json(&target, x)).unwrap_or_else(|e| json!(e.to_string())),
                "by_multiples": c.as_ref().map(|x| elem_json(&target, x)).unwrap_or_else(|e| json!(e.to_string())),
                "expected": expect.map(|e| elem_json(&target, e)),
            })),
        }
    };
    let gens: Vec<Vec<i64>> = fac.map.generators().to_vec();
    for (x, fx) in &assignment {
        let g = iota(m, x).expect("generators are elements");
        check(&g, Some(fx), &mut t);
    }
    let mut rng = StdRng::seed_from_u64(0x0749);
    for _ in 0..100 {
        let coeffs: Vec<u64> = gens.iter().map(|_| rng.gen_range(0..=5)).collect();
        let x: Vec<i64> = (0..gens[0].len()).map(|k| gens.iter().zip(&coeffs).map(|(g, c)| g[k] * *c as i64).sum()).collect();
        let fx = fac.map.to_target(&fac.map.on_combination(&coeffs)).expect("integer images");
        check(&Elem::Vec(x), Some(&fx), &mut t);
    }
    let mut hull_only = Vec::new();
    if let Ok(gs) = gr_sample(m, &b.with_box(3)) {
        for g in gs {
            if member(m, Cone::AuGrPlusPlus, &g, b).is_yes() && !member(m, Cone::GrPlus, &g, b).is_yes() {
                check(&g, None, &mut t);
                if let Ok(c) = fac.apply(&g, b) {
                    hull_only.push(json!([gr_json(m, &g), elem_json(&target, &c)]));
                }
            }
        }
    }
    Some(
        t.outcome()
            .with("target", json!(target.name))
            .with("order_pairs_checked", json!(fac.order_pairs_checked))
            .with("hull_elements_outside_image", Value::Array(hull_only)),
    )
}

fn t413(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    if let Err(o) = gate(m, &[Finiteness, CancellationIntoIdeals], b) {
        if matches!(o.status, Status::Vacuous(_)) {
            return Some(o);
        }
    }
    let st = match grothendieck::z_stabilized(m, b) {
        Ok(s) => s,
        Err(e) => return Some(Outcome::new(Status::Undecided).with("error", json!(e.to_string()))),
    };
    let mut t = Tally::default();
    let au = st.almost_unperforated.value;
    let mut o_au = au;
    if !au.is_decided() {
        // Sampled check on the hull: (n+1)g <= nh for some n forces g <= h.
        let h = &st.hull;
        let elems = h.sample(&b.with_box(b.sample_box.min(3))).elems;
        let mut any = false;
        for g in &elems {
            for k in &elems {
                let premise = (1..=b.n_max.min(8))
                    .map(|n| h.leq_tri(&h.mul(n + 1, g), &h.mul(n, k), b))
                    .fold(Tri::No, Tri::or);
                if premise.is_yes() {
                    any = true;
                }
                t.imp(premise, h.leq_tri(g, k, b), || json!({ "kind": "hull perforated", "g": elem_json(h, g), "h": elem_json(h, k) }));
            }
        }
        if any && t.violations.is_empty() {
            o_au = Tri::Yes;
        }
    } else {
        t.imp(Tri::Yes, au, || json!({ "kind": "hull is not almost unperforated", "certificate": st.almost_unperforated.certificate.summary }));
    }
    if let Some(wd) = &st.weakly_divisible {
        t.imp(Tri::Yes, wd.value.or(Tri::Unknown), || json!({ "kind": "hull is not weakly divisible" }));
    }
    Some(
        t.outcome()
            .with("hull", json!(st.hull.name))
            .with("finiteness", json!(st.finiteness.value.as_str()))
            .with("cancellation_into_ideals", json!(st.cancellation_into_ideals.value.as_str()))
            .with("hull_almost_unperforated", json!(o_au.as_str()))
            .with("hull_weakly_divisible", json!(st.weakly_divisible.as_ref().map(|v| v.value.as_str()))),
    )
}

// ---- M ⊗ 1 ------------------------------------------------------------------

/// Named pairs reported by the unit-order theorems.
const FEATURED: &[(&str, &str, &str)] = &[
    ("ex54", "[[3],[1]]", "[[4],[1]]"),
    ("num2_3", "[3]", "[4]"),
    ("cone33", "[0,1]", "[2,0]"),
    ("nsquare", "[1,2]", "[2,1]"),
];

fn featured(m: &Instance) -> Option<(Elem, Elem)> {
    let (_, x, y) = FEATURED.iter().find(|(n, _, _)| *n == m.name)?;
    let p = |s: &str| parse_elem(m, &serde_json::from_str(s).ok()?, "").ok();
    Some((p(x)?, p(y)?))
}

/// Runs the chain oracle on `x⊗1 <= y⊗1` and replays any chain it returns.
pub fn oracle_units(m: &Instance, x: &Elem, y: &Elem, b: &SearchBudget) -> (Tri, Option<usize>) {
    let (f, g) = (FormalSum::unit(m, x.clone()), FormalSum::unit(m, y.clone()));
    let (v, c) = oracle_leq(m, &f, &g, b);
    match (v.value, c) {
        (Tri::Yes, Some(c)) => {
            if replay_chain(m, &c, &f, &g, b).is_yes() {
                (Tri::Yes, Some(c.depth()))
            } else {
                (Tri::No, Some(c.depth()))
            }
        }
        (Tri::Yes, None) => (Tri::No, None),
        _ => (Tri::Unknown, None),
    }
}

fn featured_json(m: &Instance, b: &SearchBudget) -> Option<Value> {
    let (x, y) = featured(m)?;
    let u = unit_leq(m, &x, &y, b);
    let (o, depth) = oracle_units(m, &x, &y, b);
    Some(json!({
        "x": elem_json(m, &x),
        "y": elem_json(m, &y),
        "leq": m.leq_tri(&x, &y, b).as_str(),
        "rel_s": rel_s(m, &x, &y, b).value.as_str(),
        "rel_d": rel_d(m, &x, &y, b).value.as_str(),
        "rel_p": rel_p(m, &x, &y, b).value.as_str(),
        "unit_leq": u.value.as_str(),
        "unit_leq_rung": u.certificate.summary,
        "oracle": o.as_str(),
        "oracle_depth": depth,
    }))
}

/// `x <=_s y ⟹ x⊗1 <= y⊗1 ⟹ x <=_p y` over all pairs of `elems`, with
/// every strict `<_s` pair also sent through the chain oracle.
pub struct Sandwich {
    pub pairs: usize,
    pub tally: Tally,
    pub oracle_confirmed: usize,
    pub oracle_missing: usize,
}

pub fn sandwich(m: &Instance, elems: &[Elem], b: &SearchBudget) -> Sandwich {
    let mut r = Sandwich { pairs: 0, tally: Tally::default(), oracle_confirmed: 0, oracle_missing: 0 };
    for x in elems {
        for y in elems {
            r.pairs += 1;
            let leq = m.leq_tri(x, y, b);
            let s = rel_s(m, x, y, b).value;
            let u = unit_leq(m, x, y, b).value;
            let p = rel_p(m, x, y, b).value;
            r.tally.imp(leq.or(s), u, || json!({ "kind": "x <=_s y but not x⊗1 <= y⊗1", "x": elem_json(m, x), "y": elem_json(m, y) }));
            r.tally.imp(u, p, || json!({ "kind": "x⊗1 <= y⊗1 but not x <=_p y", "x": elem_json(m, x), "y": elem_json(m, y) }));
            if s.is_yes() && !leq.is_yes() {
                match oracle_units(m, x, y, b).0 {
                    Tri::Yes => r.oracle_confirmed += 1,
                    Tri::No => r.tally.violation(json!({ "kind": "oracle chain does not replay", "x": elem_json(m, x), "y": elem_json(m, y) })),
                    Tri::Unknown => r.oracle_missing += 1,
                }
            }
        }
    }
    r
}

fn l52(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let elems = sample(m, b, 4);
    let r = sandwich(m, &elems, b);
    let mut o = r
        .tally
        .outcome()
        .with("pairs", json!(r.pairs))
        .with("oracle_confirmed", json!(r.oracle_confirmed))
        .with("oracle_missing", json!(r.oracle_missing));
    if let Some(f) = featured_json(m, b) {
        o = o.with("featured", f);
    }
    Some(o)
}

fn t53(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    let r = tensorz::tensor_one_report(m, b);
    let (nu, au) = (prop(m, NearlyUnperforated, b), prop(m, AlmostUnperforated, b));
    let alg_canc = prop(m, AlgebraicallyOrdered, b).and(prop(m, Cancellative, b));
    let mut t = Tally::default();
    t.imp(nu, r.embedding, || json!({ "kind": "nearly unperforated but x ↦ x⊗1 is not an order embedding" }));
    t.imp(r.embedding, au, || json!({ "kind": "order embedding but not almost unperforated" }));
    t.imp(nu, au, || json!({ "kind": "nearly unperforated but not almost unperforated" }));
    t.imp(alg_canc.and(au), nu, || json!({ "kind": "algebraic, cancellative, almost unperforated, not nearly unperforated" }));
    let mut o = t.outcome();
    if o.status == Status::Undecided && nu.is_no() && au.is_no() {
        o.status = Status::Vacuous(NearlyUnperforated.name().into());
    }
    Some(
        o.with("nearly_unperforated", json!(nu.as_str()))
            .with("embedding", json!(r.embedding.as_str()))
            .with("almost_unperforated", json!(au.as_str()))
            .with("pairs", json!(r.pairs)),
    )
}

fn l55(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    let base = prop(m, AlgebraicallyOrdered, b).and(prop(m, Cancellative, b));
    let refine = base.and(prop(m, Refinement, b));
    let simple = base.and(prop(m, Simple, b));
    let mut t = Tally::default();
    for x in &sample(m, b, 4) {
        for y in &sample(m, b, 4) {
            let s = m.leq_tri(x, y, b).or(rel_s(m, x, y, b).value);
            let d = rel_d(m, x, y, b).value;
            let p = rel_p(m, x, y, b).value;
            let w = |k: &'static str| move || json!({ "kind": k, "x": elem_json(m, x), "y": elem_json(m, y) });
            t.imp(s, d, w("<=_s but not <=_d"));
            t.imp(d, p, w("<=_d but not <=_p"));
            if refine.is_yes() {
                t.imp(p, d, w("<=_p but not <=_d under refinement"));
            }
            if simple.is_yes() {
                t.imp(p, s, w("<=_p but not <=_s under simplicity"));
            }
        }
    }
    let mut o = t.outcome().with("refinement_case", json!(refine.as_str())).with("simple_case", json!(simple.as_str()));
    if let Some(f) = featured_json(m, b) {
        o = o.with("featured", f);
    }
    Some(o)
}

/// Under the hypotheses, `x⊗1 <= y⊗1 ⟺ x <=_p y` on `elems`; the chain
/// oracle is run on every `<=_p` pair, and on every pair when `all_pairs`.
pub fn p56_check(m: &Instance, elems: &[Elem], b: &SearchBudget, all_pairs: bool) -> Result<(Tally, usize, usize), Outcome> {
    use PropertyId::*;
    let h = tensorz::p56_hypotheses(m, b);
    let hj = Value::Object(h.iter().map(|(p, v)| (p.name().to_string(), json!(v.as_str()))).collect());
    for (p, v) in &h[..2] {
        if v.is_no() {
            return Err(Outcome::new(Status::Vacuous(p.name().into())).with("hypotheses", hj));
        }
    }
    if h[2].1.is_no() && h[3].1.is_no() {
        let names = format!("{} and {}", Simple.name(), Refinement.name());
        return Err(Outcome::new(Status::Vacuous(names)).with("hypotheses", hj));
    }
    if !(h[0].1.is_yes() && h[1].1.is_yes() && (h[2].1.is_yes() || h[3].1.is_yes())) {
        return Err(Outcome::new(Status::Undecided).with("hypotheses", hj));
    }
    let mut t = Tally::default();
    let (mut oracle_yes, mut oracle_missing) = (0, 0);
    for x in elems {
        for y in elems {
            let u = unit_leq(m, x, y, b).value;
            let p = rel_p(m, x, y, b).value;
            let w = || json!({ "x": elem_json(m, x), "y": elem_json(m, y), "unit_leq": u.as_str(), "rel_p": p.as_str() });
            match (u, p) {
                (Tri::Yes, Tri::Yes) | (Tri::No, Tri::No) => t.confirmed += 1,
                (Tri::Unknown, _) | (_, Tri::Unknown) => t.undecided += 1,
                _ => t.violation(w()),
            }
            if p.is_yes() || all_pairs {
                match oracle_units(m, x, y, b).0 {
                    Tri::Yes if p.is_no() => t.violation(json!({ "kind": "oracle chain against <=_p", "x": elem_json(m, x), "y": elem_json(m, y) })),
                    Tri::Yes => oracle_yes += 1,
                    Tri::No => t.violation(json!({ "kind": "oracle chain does not replay", "x": elem_json(m, x), "y": elem_json(m, y) })),
                    Tri::Unknown if p.is_yes() => oracle_missing += 1,
                    Tri::Unknown => {}
                }
            }
        }
    }
    Ok((t, oracle_yes, oracle_missing))
}

fn p56(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let elems = sample(m, b, 4);
    let ob = b.with_depth(b.chain_depth.min(6));
    Some(match p56_check(m, &elems, &ob, false) {
        Err(o) => o,
        Ok((t, yes, missing)) => t.outcome().with("oracle_confirmed", json!(yes)).with("oracle_missing", json!(missing)),
    })
}

fn p57(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    if let Err(o) = gate(m, &[AlgebraicallyOrdered, Cancellative], b) {
        return Some(o);
    }
    let t1 = tensorz::m_tensor_one(m);
    let r = tensorz::tensor_one_report(m, b);
    let vals = [
        ("order_cancellative", prop(&t1, OrderCancellative, b)),
        ("order_separative", prop(&t1, OrderSeparative, b)),
        ("nearly_unperforated", prop(&t1, NearlyUnperforated, b)),
        ("p_implies_unit", r.p_implies_unit),
    ];
    let yes = vals.iter().any(|(_, v)| v.is_yes());
    let no = vals.iter().any(|(_, v)| v.is_no());
    let decided = vals.iter().filter(|(_, v)| v.is_decided()).count();
    let status = if yes && no {
        Status::Fail
    } else if decided >= 2 {
        Status::Pass
    } else {
        Status::Undecided
    };
    let vj: Map<String, Value> = vals.iter().map(|(k, v)| (k.to_string(), json!(v.as_str()))).collect();
    Some(Outcome::new(status).with("conditions", Value::Object(vj)))
}

fn p59(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    if let Err(o) = gate(m, &[AlgebraicallyOrdered, Cancellative], b) {
        return Some(o);
    }
    let r = match tensorz::gr_plusplus_iso(m, b) {
        Ok(r) => r,
        Err(CoreError::HypothesisFailure(h)) => return Some(Outcome::new(Status::Vacuous(h))),
        Err(e) => return Some(Outcome::new(Status::Undecided).with("error", json!(e.to_string()))),
    };
    let mut t = Tally { confirmed: r.agree, undecided: r.undecided, violations: Vec::new() };
    for g in &r.mismatches {
        t.violation(json!({ "g": gr_json(m, g) }));
    }
    Some(t.outcome().with("checked", json!(r.checked)))
}

// ---- compact level ----------------------------------------------------------

fn nonzero_sample(m: &Instance, b: &SearchBudget, k: usize) -> Vec<Elem> {
    let mut v: Vec<Elem> = sample(m, b, 3).into_iter().filter(|x| !m.is_zero(x).is_yes()).collect();
    if matches!(m.backend, Backend::QPlus) {
        v.insert(0, Elem::Rat(q(1)));
        v.dedup();
    }
    v.truncate(k);
    v
}

fn l61(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let windows = [(qf(1, 2), qf(3, 4)), (qf(1, 1), qf(2, 1)), (qf(1, 3), qf(1, 2))];
    let mut t = Tally::default();
    let mut vacuous = None;
    let mut runs = Vec::new();
    for x in nonzero_sample(m, b, 2) {
        for (s, tt) in &windows {
            match tensorz::interpolate_compact(m, &x, s, tt, b) {
                Ok(i) => {
                    let v = i.verified();
                    t.imp(Tri::Yes, v, || json!({ "x": elem_json(m, &x), "s": s.to_string(), "t": tt.to_string() }));
                    runs.push(json!({
                        "x": elem_json(m, &x), "s": s.to_string(), "t": tt.to_string(),
                        "L": i.l, "n": i.n, "y": elem_json(m, &i.y), "verified": v.as_str(),
                    }));
                }
                Err(CoreError::HypothesisFailure(_)) if check_property(m, PropertyId::AlmostDivisible, b).is_no() => {
                    vacuous = Some(PropertyId::AlmostDivisible.name().to_string());
                }
                Err(_) => t.undecided += 1,
            }
        }
    }
    let mut o = t.outcome().with("runs", Value::Array(runs));
    if o.status == Status::Undecided {
        if let Some(h) = vacuous {
            o.status = Status::Vacuous(h);
        }
    }
    Some(o)
}

fn l62(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    use PropertyId::*;
    if prop(m, AlmostDivisible, b).is_no() {
        return Some(Outcome::new(Status::Vacuous(AlmostDivisible.name().into())));
    }
    let mut t = Tally::default();
    for x in nonzero_sample(m, b, 3) {
        for k in [1u64, 2] {
            let f = FormalSum::term(m, x.clone(), CuZ::Compact(k));
            match tensorz::compact_test(m, &f, b) {
                Ok((v, c)) => {
                    let replays = match &c {
                        Some(c) => replay_chain(m, c, &f, c.states.last().expect("nonempty"), b),
                        None => Tri::No,
                    };
                    t.imp(Tri::Yes, v.value.and(replays), || json!({ "kind": "compact sum not recognized", "x": elem_json(m, &x), "k": k }));
                }
                Err(e) => t.violation(json!({ "kind": "error", "error": e.to_string() })),
            }
        }
    }
    let mut soft = Value::Null;
    if matches!(m.backend, Backend::QPlus) {
        let f = FormalSum::term(m, Elem::Rat(q(1)), CuZ::soft(q(1)));
        if let Ok((v, _)) = tensorz::compact_test(m, &f, b) {
            t.imp(Tri::Yes, v.value.not(), || json!({ "kind": "soft term judged compact" }));
            soft = json!({ "sum": "1⊙1′", "compact": v.value.as_str() });
        }
    }
    Some(t.outcome().with("soft_example", soft))
}

fn t63(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let s = AlgebraicCu::new(m.clone());
    let tc = match culayer::tensor_compacts(&s, b) {
        Ok(t) => t,
        Err(_) => return Some(Outcome::new(Status::Vacuous(PropertyId::AlmostDivisible.name().into()))),
    };
    let mut t = Tally::default();
    let elems = sample(m, b, 3);
    for x in &elems {
        let f = FormalSum::unit(m, x.clone());
        if let Ok((v, _)) = tensorz::compact_test(m, &f, b) {
            t.imp(Tri::Yes, v.value, || json!({ "kind": "x⊗1 not compact", "x": elem_json(m, x) }));
        }
        for y in &elems {
            let l = tc.leq_tri(x, y, b);
            let u = unit_leq(m, x, y, b).value;
            if l.is_decided() && u.is_decided() && l != u {
                t.violation(json!({ "kind": "compact order differs from x⊗1 order", "x": elem_json(m, x), "y": elem_json(m, y) }));
            }
            if u.is_yes() && !m.leq_tri(x, y, b).is_yes() {
                t.imp(Tri::Yes, oracle_units(m, x, y, b).0.or(Tri::Unknown), || json!({ "kind": "oracle chain does not replay" }));
            }
        }
    }
    Some(t.outcome().with("compacts", json!(tc.name)))
}

fn approach_one() -> CuElem {
    let r = |n, d| Elem::Rat(qf(n, d));
    CuElem {
        prefix: vec![r(0, 1), r(1, 2), r(2, 3), r(3, 4)],
        tail: Tail::FormalSupLabel { label: "1 - 1/n".into(), below: Some(r(1, 1)) },
    }
}

fn t64(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let s = AlgebraicCu::new(m.clone());
    let mut hyps = Map::new();
    for a in culayer::UNIT_HYPOTHESES {
        let v = culayer::satisfies_axiom(&s, a, b).value;
        hyps.insert(a.name().into(), json!(v.as_str()));
        if v.is_no() {
            return Some(Outcome::new(Status::Vacuous(a.name().into())).with("hypotheses", Value::Object(hyps)));
        }
    }
    let mut t = Tally::default();
    let elems = sample(m, b, 3);
    for x in &elems {
        for y in &elems {
            match culayer::unit_consistency(&s, x, y, b) {
                Ok(v) => t.imp(Tri::Yes, v.or(Tri::Unknown), || json!({ "kind": "Cu unit order differs", "x": elem_json(m, x), "y": elem_json(m, y) })),
                Err(_) => {
                    return Some(Outcome::new(Status::Undecided).with("hypotheses", Value::Object(hyps)));
                }
            }
        }
    }
    let mut o = t.outcome().with("hypotheses", Value::Object(hyps));
    if matches!(m.backend, Backend::QPlus) {
        let one = s.constant(Elem::Rat(q(1)));
        if let Ok(v) = culayer::cu_unit_leq(&s, &approach_one(), &one, b) {
            o = o.with("featured", json!({ "u": "sup(1 - 1/n)", "v": "1", "unit_leq": v.value.as_str() }));
            if v.is_no() {
                o.status = Status::Fail;
            }
        }
    }
    Some(o)
}

fn t65(m: &Instance, b: &SearchBudget) -> Option<Outcome> {
    let r = culayer::thm65_chain(&AlgebraicCu::new(m.clone()), b);
    let st: Vec<Value> = r.statuses.iter().map(|(l, v)| json!([l, v.as_str()])).collect();
    Some(Outcome::new(r.status).with("conditions", Value::Array(st)).with("notes", json!(r.notes)))
}

pub const THEOREMS: &[Theorem] = &[
    Theorem { id: "L1.3", title: "ideal monotonicity under strong finiteness", run: l13 },
    Theorem { id: "L2.2", title: "near separativity through ideals", run: l22 },
    Theorem { id: "P2.8", title: "cancellation from separativity, cancellation into ideals and strong finiteness", run: p28 },
    Theorem { id: "L3.2", title: "weak divisibility versus almost divisibility", run: l32 },
    Theorem { id: "P3.8", title: "near unperforation with cancellation into ideals versus almost unperforation with cancellation", run: p38 },
    Theorem { id: "T3.10", title: "the same equivalence with strong finiteness as a premise", run: t310 },
    Theorem { id: "L4.1", title: "almost unperforation passes to the Grothendieck cone", run: l41 },
    Theorem { id: "P4.3", title: "the Au cones are strict and almost unperforated", run: p43 },
    Theorem { id: "P4.6", title: "embeddings into the Au hulls", run: p46 },
    Theorem { id: "P4.8", title: "weak divisibility passes to the Au hull", run: p48 },
    Theorem { id: "T4.9", title: "factorization of order-preserving maps through the Au hull", run: t49 },
    Theorem { id: "T4.13", title: "the stabilized model is almost unperforated", run: t413 },
    Theorem { id: "L5.2", title: "x <=_s y gives x⊗1 <= y⊗1 gives x <=_p y", run: l52 },
    Theorem { id: "T5.3", title: "near unperforation, order embedding into M⊗1, almost unperforation", run: t53 },
    Theorem { id: "L5.5", title: "comparison relations <=_s, <=_d, <=_p", run: l55 },
    Theorem { id: "P5.6", title: "x⊗1 <= y⊗1 exactly when x <=_p y", run: p56 },
    Theorem { id: "P5.7", title: "order cancellation in M⊗1", run: p57 },
    Theorem { id: "P5.9", title: "the Au cone of M equals Gr++ of M⊗1", run: p59 },
    Theorem { id: "L6.1", title: "compact interpolation between x⊗s and x⊗t", run: l61 },
    Theorem { id: "L6.2", title: "compact elements of the tensor product", run: l62 },
    Theorem { id: "T6.3", title: "compacts of S⊗Z are S_c⊗1", run: t63 },
    Theorem { id: "T6.4", title: "the unit order on an algebraic Cu-semigroup", run: t64 },
    Theorem { id: "T6.5", title: "the almost unperforation chain", run: t65 },
];

pub fn find(id: &str) -> Option<&'static Theorem> {
    THEOREMS.iter().find(|t| t.id.eq_ignore_ascii_case(id))
}

/// Axiom names accepted by the `cu` command.
pub fn parse_axiom(s: &str) -> Option<Axiom> {
    Axiom::parse(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_every_id_once() {
        let ids: Vec<&str> = THEOREMS.iter().map(|t| t.id).collect();
        assert_eq!(ids.len(), 23);
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 23);
        assert!(find("p4.3").is_some());
    }

    #[test]
    fn tally_fails_on_one_counterexample_and_ignores_false_premises() {
        let mut t = Tally::default();
        t.imp(Tri::No, Tri::No, || json!(null));
        t.imp(Tri::Unknown, Tri::No, || json!(null));
        assert_eq!(t.status(), Status::Undecided);
        t.imp(Tri::Yes, Tri::Yes, || json!(null));
        assert_eq!(t.status(), Status::Pass);
        t.imp(Tri::Yes, Tri::No, || json!({ "x": 1 }));
        assert_eq!(t.status(), Status::Fail);
        assert_eq!(t.outcome().details["violations"], json!([{ "x": 1 }]));
    }

    #[test]
    fn decided_no_hypothesis_is_vacuous_and_named() {
        let m = Instance::numerical(&[2, 3]);
        let o = find("T6.4").unwrap().run(&m, &SearchBudget::default()).unwrap();
        assert!(matches!(o.status, Status::Vacuous(ref h) if !h.is_empty()));
    }
}
