//! Named instances: curated examples and every commutative monoid of
//! order at most three with each of its admissible orders.

use std::collections::BTreeSet;

use crate::arith::{q, QuadraticValue};
use crate::finite::{FiniteMonoid, OrderSpec};
use crate::instance::Instance;
use crate::vector::{OrderMode, VectorMonoid};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    /// What the instance is and why it is here.
    pub note: String,
    pub instance: Instance,
    pub curated: bool,
}

fn entry(name: &str, note: &str, instance: Instance) -> CatalogEntry {
    CatalogEntry { name: name.into(), note: note.into(), instance: instance.named(name), curated: true }
}

fn finite(names: &[&str], table: &[&[usize]], order: OrderSpec) -> Instance {
    let names = names.iter().map(|s| s.to_string()).collect();
    let table = table.iter().map(|r| r.to_vec()).collect();
    Instance::finite("finite", FiniteMonoid::new(names, table, order).expect("curated table is valid"))
}

fn vector(dim: usize, gens: &[&[i64]], mode: OrderMode) -> Instance {
    let gens = gens.iter().map(|g| g.to_vec()).collect();
    Instance::vector("vector", VectorMonoid::new(dim, gens, mode).expect("curated generators are valid"))
}

/// Hand-picked instances, in a fixed order.
pub fn curated() -> Vec<CatalogEntry> {
    let theta = OrderMode::Linear(vec![QuadraticValue::rational(q(1)), QuadraticValue::new(q(0), q(1))]);
    vec![
        entry("cuz", "The Cuntz semigroup Z: compact naturals and soft values in (0, inf].", Instance::cuz()),
        entry("qplus", "Nonnegative rationals under addition.", Instance::qplus()),
        entry("nat", "The natural numbers.", Instance::free(1)),
        entry("nsquare", "N^2 with the algebraic order.", Instance::free(2)),
        entry("num2_3", "Numerical semigroup <2,3>: simple, cancellative, not almost unperforated.", Instance::numerical(&[2, 3])),
        entry("ex54", "<2,3> + N, where 3 lies below 4 only after tensoring with Z.", Instance::direct_sum(Instance::numerical(&[2, 3]), Instance::free(1))),
        entry(
            "cone33",
            "N^2 + (3,-3)N inside Z^2 with the algebraic order: 3(0,1) <= 2(2,0) but (0,1) is not below (2,0).",
            vector(2, &[&[1, 0], &[0, 1], &[3, -3]], OrderMode::Algebraic),
        ),
        entry("theta", "N^2 ordered by the functional (a,b) -> a + b*sqrt(2).", vector(2, &[&[1, 0], &[0, 1]], theta)),
        entry("zero_top", "{0, T} with T + T = T.", finite(&["0", "T"], &[&[0, 1], &[1, 1]], OrderSpec::Algebraic)),
        entry(
            "one_top",
            "{0, 1, T} with 1 + 1 = T: N truncated above 1.",
            finite(&["0", "1", "T"], &[&[0, 1, 2], &[1, 2, 2], &[2, 2, 2]], OrderSpec::Algebraic),
        ),
        entry(
            "trunc3",
            "{0, 1, 2, T}: N truncated above 2.",
            finite(&["0", "1", "2", "T"], &[&[0, 1, 2, 3], &[1, 2, 3, 3], &[2, 3, 3, 3], &[3, 3, 3, 3]], OrderSpec::Algebraic),
        ),
        entry(
            "diamond",
            "The join semilattice {0, a, b, T} with a + b = T.",
            finite(&["0", "a", "b", "T"], &[&[0, 1, 2, 3], &[1, 1, 3, 3], &[2, 3, 2, 3], &[3, 3, 3, 3]], OrderSpec::Algebraic),
        ),
        entry(
            "chain4",
            "The chain 0 < 1 < 2 < 3 under max.",
            finite(&["0", "1", "2", "3"], &[&[0, 1, 2, 3], &[1, 1, 2, 3], &[2, 2, 2, 3], &[3, 3, 3, 3]], OrderSpec::Algebraic),
        ),
        entry(
            "halves_top",
            "{0, h, 1, T} with h + h = 1 and everything else absorbed by T.",
            finite(&["0", "h", "1", "T"], &[&[0, 1, 2, 3], &[1, 2, 3, 3], &[2, 3, 3, 3], &[3, 3, 3, 3]], OrderSpec::Algebraic),
        ),
        entry(
            "split_top",
            "{0, a, b, T} with 2a = 2b = a + b = T: two atoms that are not comparable.",
            finite(&["0", "a", "b", "T"], &[&[0, 1, 2, 3], &[1, 3, 3, 3], &[2, 3, 3, 3], &[3, 3, 3, 3]], OrderSpec::Algebraic),
        ),
    ]
}

const NAMES: [&str; 3] = ["0", "a", "b"];

/// Canonical form of `(table, leq)` under permutations fixing zero.
fn canonical(m: &FiniteMonoid) -> (Vec<usize>, Vec<bool>) {
    let n = m.len();
    let perms: Vec<Vec<usize>> = if n == 3 { vec![vec![0, 1, 2], vec![0, 2, 1]] } else { vec![(0..n).collect()] };
    perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; n];
            for (i, &pi) in p.iter().enumerate() {
                inv[pi] = i;
            }
            let mut t = Vec::new();
            let mut l = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    t.push(p[m.table[inv[i]][inv[j]]]);
                    l.push(m.leq[inv[i]][inv[j]]);
                }
            }
            (t, l)
        })
        .min()
        .expect("at least one permutation")
}

/// Every commutative monoid on at most `max_order` (at most 3) elements,
/// up to isomorphism, with every translation invariant partial order
/// having zero as least element.
pub fn small_monoids(max_order: usize) -> Vec<CatalogEntry> {
    assert!(max_order <= 3, "exhaustive enumeration stops at order 3");
    let mut out = Vec::new();
    for n in 1..=max_order {
        let names: Vec<String> = NAMES[..n].iter().map(|s| s.to_string()).collect();
        let free: Vec<(usize, usize)> = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let off: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut seen = BTreeSet::new();
        for code in 0..n.pow(free.len() as u32) {
            let mut table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| if i == 0 { j } else if j == 0 { i } else { 0 }).collect()).collect();
            let mut c = code;
            for &(i, j) in &free {
                table[i][j] = c % n;
                table[j][i] = c % n;
                c /= n;
            }
            for mask in 0u32..(1 << off.len()) {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .map(|x| (0, x))
                    .chain(off.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p))
                    .collect();
                let Ok(m) = FiniteMonoid::new(names.clone(), table.clone(), OrderSpec::Pairs(pairs)) else { continue };
                if seen.insert(canonical(&m)) {
                    let name = format!("ord{n}_{:02}", seen.len());
                    out.push(CatalogEntry {
                        name: name.clone(),
                        note: format!("Enumerated monoid of order {n}."),
                        instance: Instance::finite(name, m),
                        curated: false,
                    });
                }
            }
        }
    }
    out
}

/// Curated entries followed by the enumerated ones.
pub fn all() -> Vec<CatalogEntry> {
    let mut v = curated();
    v.extend(small_monoids(3));
    v
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    all().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_are_stable() {
        let v = small_monoids(3);
        let by_order = |n: usize| v.iter().filter(|e| e.instance.as_finite().unwrap().len() == n).count();
        // Order 1: trivial. Order 2: {0,a} idempotent (Z/2 admits no positive order).
        assert_eq!(by_order(1), 1);
        assert_eq!(by_order(2), 1);
        assert!(by_order(3) > 0);
        let names: BTreeSet<_> = v.iter().map(|e| e.name.clone()).collect();
        assert_eq!(names.len(), v.len());
    }

    #[test]
    fn curated_names_are_unique() {
        let names: BTreeSet<_> = all().into_iter().map(|e| e.name).collect();
        assert_eq!(names.len(), all().len());
    }
}
