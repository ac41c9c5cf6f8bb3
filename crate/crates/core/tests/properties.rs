use orderlab_core::catalog;
use orderlab_core::json::{elem_json, instance_json, parse_elem, parse_instance};
use orderlab_core::relations::{check_property, rel_p, rel_s};
use orderlab_core::tensorz::{oracle_leq, replay_chain, unit_leq, FormalSum};
use orderlab_core::vector::{OrderMode, VectorMonoid};
use orderlab_core::{CuZ, Elem, Instance, PropertyId, SearchBudget, Tri};
use proptest::prelude::*;

fn small() -> SearchBudget {
    SearchBudget::default().with_box(4)
}

fn ordered_instances() -> Vec<Instance> {
    let mut v: Vec<Instance> = catalog::all().into_iter().map(|e| e.instance).filter(|m| m.carrier().is_some()).collect();
    v.push(Instance::free(2));
    v.push(Instance::numerical(&[2, 3]));
    v.push(Instance::direct_sum(Instance::numerical(&[2, 3]), Instance::free(1)));
    v
}

fn pick<'a>(xs: &'a [Elem], i: usize) -> &'a Elem {
    &xs[i % xs.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_translation_invariant(k in 0usize..64, i in 0usize..1000, j in 0usize..1000, l in 0usize..1000) {
        let all = ordered_instances();
        let m = &all[k % all.len()];
        let b = small();
        let s = m.sample(&b).elems;
        let (x, y, z) = (pick(&s, i), pick(&s, j), pick(&s, l));
        if m.leq_tri(x, y, &b).is_yes() {
            prop_assert_ne!(m.leq_tri(&m.plus(x, z), &m.plus(y, z), &b), Tri::No);
        }
    }

    #[test]
    fn unit_order_sits_between_s_and_p(k in 0usize..3, i in 0usize..1000, j in 0usize..1000) {
        let ms = [Instance::free(2), Instance::numerical(&[2, 3]), Instance::direct_sum(Instance::numerical(&[2, 3]), Instance::free(1))];
        let m = &ms[k];
        let b = SearchBudget::default();
        let s = m.sample(&b.with_box(5)).elems;
        let (x, y) = (pick(&s, i), pick(&s, j));
        let below_s = m.leq_tri(x, y, &b).or(rel_s(m, x, y, &b).value);
        let u = unit_leq(m, x, y, &b).value;
        prop_assert!(!(below_s.is_yes() && u.is_no()), "x <=_s y without x⊗1 <= y⊗1");
        prop_assert!(!(u.is_yes() && rel_p(m, x, y, &b).value.is_no()), "x⊗1 <= y⊗1 without x <=_p y");
    }

    #[test]
    fn oracle_chains_replay(i in 0usize..1000, j in 0usize..1000) {
        let m = Instance::direct_sum(Instance::numerical(&[2, 3]), Instance::free(1));
        let b = SearchBudget::default();
        let s = m.sample(&b.with_box(4)).elems;
        let (f, g) = (FormalSum::unit(&m, pick(&s, i).clone()), FormalSum::unit(&m, pick(&s, j).clone()));
        let (v, chain) = oracle_leq(&m, &f, &g, &b);
        if v.value.is_yes() {
            let c = chain.expect("a Yes carries a chain");
            prop_assert!(c.depth() <= b.chain_depth as usize);
            prop_assert_eq!(replay_chain(&m, &c, &f, &g, &b), Tri::Yes);
        }
    }

    #[test]
    fn larger_budgets_never_flip_decided_verdicts(k in 0usize..64, p in 0usize..18) {
        let all = ordered_instances();
        let m = &all[k % all.len()];
        let p = PropertyId::ALL[p];
        let lo = check_property(m, p, &SearchBudget::default().with_box(3).with_n_max(8)).value;
        let hi = check_property(m, p, &SearchBudget::default().with_box(5).with_n_max(16)).value;
        if lo.is_decided() && hi.is_decided() {
            prop_assert_eq!(lo, hi);
        }
        if lo.is_decided() {
            prop_assert!(hi.is_decided(), "{} on {} was decided and became Unknown", p.name(), m.name);
        }
    }

    #[test]
    fn vector_instances_round_trip(gens in prop::collection::vec(prop::collection::vec(0i64..5, 2), 1..4)) {
        prop_assume!(gens.iter().all(|g| g.iter().any(|&c| c != 0)));
        let v = VectorMonoid::new(2, gens, OrderMode::Algebraic);
        prop_assume!(v.is_ok());
        let m = Instance::vector("random", v.unwrap());
        let doc = instance_json(&m).expect("vector instances serialize");
        let back = parse_instance(&doc).expect("serialized form parses");
        prop_assert_eq!(instance_json(&back), Some(doc));
        for x in m.sample(&small()).elems {
            prop_assert_eq!(parse_elem(&back, &elem_json(&m, &x), "").unwrap(), x);
        }
    }

    #[test]
    fn cuz_addition_respects_order(a in 0u64..6, b in 1i128..12, c in 0u64..6, soft in any::<bool>()) {
        let x = CuZ::Compact(a);
        let y = if soft { CuZ::soft_int(b) } else { CuZ::Compact(b as u64) };
        let z = CuZ::Compact(c);
        prop_assert_eq!(x.add(&y), y.add(&x));
        if x.leq(&y) {
            prop_assert!(x.add(&z).leq(&y.add(&z)));
        }
    }
}

#[test]
fn catalog_files_round_trip() {
    for e in catalog::all() {
        let doc = instance_json(&e.instance).expect("catalog instances serialize");
        let back = parse_instance(&doc).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(instance_json(&back).as_ref(), Some(&doc), "{}", e.name);
    }
}
