//! Closed-form shortcuts against the bounded searches they replace.

use orderlab_core::catalog;
use orderlab_core::relations::check_property_with;
use orderlab_core::{PropertyId, SearchBudget};

#[test]
fn shortcuts_agree_with_search_on_finite_and_vector_instances() {
    let b = SearchBudget::default().with_box(4).with_n_max(12);
    let mut compared = 0;
    for e in catalog::all() {
        let m = &e.instance;
        if !matches!(m.kind(), "finite" | "vector") {
            continue;
        }
        for p in PropertyId::ALL {
            let fast = check_property_with(m, p, &b, true).value;
            let slow = check_property_with(m, p, &b, false).value;
            if fast.is_decided() && slow.is_decided() {
                assert_eq!(fast, slow, "{} on {}", p.name(), e.name);
                compared += 1;
            }
        }
    }
    assert!(compared > 100, "only {compared} decided pairs compared");
}
