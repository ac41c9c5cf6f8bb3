//! Worked examples with fixed expected values.

use orderlab_core::arith::qf;
use orderlab_core::catalog;
use orderlab_core::grothendieck::{cone_member, Cone};
use orderlab_core::relations::{check_property, rel_p, rel_s};
use orderlab_core::tensorz::{interpolate_compact, unit_leq};
use orderlab_core::verdict::Fact;
use orderlab_core::{CuZ, Elem, Instance, PropertyId, SearchBudget, Tri};

fn cat(name: &str) -> Instance {
    catalog::lookup(name).expect("catalog entry").instance
}

fn v(c: &[i64]) -> Elem {
    Elem::Vec(c.to_vec())
}

#[test]
fn cuz_is_not_preminimal_and_the_witness_replays() {
    let m = cat("cuz");
    let b = SearchBudget::default();
    let r = check_property(&m, PropertyId::Preminimal, &b);
    assert_eq!(r.value, Tri::No);
    let get = |k: &str| r.get(k).cloned().expect("witness component");
    let (one, soft) = (Elem::Cu(CuZ::Compact(1)), Elem::Cu(CuZ::soft_int(1)));
    assert_eq!([get("x"), get("y"), get("v"), get("w")], [one.clone(), soft.clone(), soft, one]);
    assert_eq!(m.replay(&r.certificate.facts, &b), Tri::Yes);
    assert!(r.certificate.facts.iter().any(|f| matches!(f, Fact::NotLeq(..))));
}

#[test]
fn cone33_perforation_and_hull_membership() {
    let m = cat("cone33");
    let b = SearchBudget::default().with_box(8);
    let au = check_property(&m, PropertyId::AlmostUnperforated, &b);
    assert_eq!(au.value, Tri::No);
    let (x, y, n) = (au.get("x").unwrap().clone(), au.get("y").unwrap().clone(), au.certificate.n.unwrap());
    assert_eq!((x.clone(), y.clone(), n), (v(&[0, 1]), v(&[2, 0]), 2));
    assert_eq!(m.leq_tri(&m.mul(n + 1, &x), &m.mul(n, &y), &b), Tri::Yes);
    assert_eq!(m.leq_tri(&x, &y, &b), Tri::No);
    let g = v(&[2, -1]);
    assert_eq!(cone_member(&m, Cone::GrPlus, &g, &b).unwrap().value, Tri::No);
    let hull = cone_member(&m, Cone::AuGrPlus, &g, &b).unwrap();
    assert_eq!((hull.value, hull.certificate.n), (Tri::Yes, Some(2)));
}

#[test]
fn theta_hull_is_the_positive_quadrant() {
    let m = cat("theta");
    let b = SearchBudget::default();
    for a in -10..=10 {
        for c in -10..=10 {
            let got = cone_member(&m, Cone::AuGrPlus, &v(&[a, c]), &b).unwrap().value;
            assert_eq!(got, Tri::from_bool(a >= 0 && c >= 0), "({a},{c})");
        }
    }
    assert_eq!(cone_member(&m, Cone::GrPlusPlus, &v(&[2, -1]), &b).unwrap().value, Tri::Yes);
}

#[test]
fn three_below_four_only_after_tensoring() {
    let m = cat("ex54");
    let b = SearchBudget::default();
    let x = Elem::pair(v(&[3]), v(&[1]));
    let y = Elem::pair(v(&[4]), v(&[1]));
    assert_eq!(m.leq_tri(&x, &y, &b), Tri::No);
    assert_eq!(rel_s(&m, &x, &y, &b).value, Tri::No);
    let p = rel_p(&m, &x, &y, &b);
    assert_eq!((p.value, p.certificate.n), (Tri::Yes, Some(2)));
    assert_eq!(unit_leq(&m, &x, &y, &b).value, Tri::Yes);
}

#[test]
fn numerical_semigroup_report_values() {
    let m = cat("num2_3");
    let b = SearchBudget::default();
    let val = |p| check_property(&m, p, &b).value;
    assert_eq!(val(PropertyId::Refinement), Tri::No);
    assert_eq!(val(PropertyId::Cancellative), Tri::Yes);
    assert_eq!(val(PropertyId::AlmostUnperforated), Tri::No);
    assert_eq!(val(PropertyId::Simple), Tri::Yes);
}

#[test]
fn free_square_fails_only_divisibility() {
    let m = cat("nsquare");
    let b = SearchBudget::default();
    for p in PropertyId::ALL {
        let want = match p {
            PropertyId::AlmostDivisible | PropertyId::WeaklyDivisible | PropertyId::Simple => Tri::No,
            _ => Tri::Yes,
        };
        assert_eq!(check_property(&m, p, &b).value, want, "{}", p.name());
    }
}

#[test]
fn rational_interpolation_matches_the_worked_numbers() {
    let m = cat("qplus");
    let i = interpolate_compact(&m, &Elem::Rat(qf(1, 1)), &qf(1, 2), &qf(3, 4), &SearchBudget::default()).unwrap();
    assert_eq!((i.l, i.n, i.y.clone()), (Some(8), 5, Elem::Rat(qf(1, 8))));
    assert_eq!(i.verified(), Tri::Yes);
}
