//! Finitely generated submonoids of Z^d.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use crate::arith::{q, QuadraticValue};
use crate::budget::SearchBudget;
use crate::elem::Elem;
use crate::lattice::{cone_functionals, dot, echelon_basis, lattice_coords};
use crate::verdict::{Bound, Tri, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderMode {
    /// `x <= y` iff `y - x` lies in the monoid.
    Algebraic,
    /// `x <= y` iff `y - x >= 0` in every coordinate.
    Coordinatewise,
    /// `x <= y` iff `x = y` or `w(x) < w(y)` for the weight functional `w`.
    Linear(Vec<QuadraticValue>),
}

#[derive(Debug)]
pub struct VectorMonoid {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
    pub order_mode: OrderMode,
    /// Integer functional with value `>= 1` on every generator.
    pub positive: Option<Vec<i64>>,
    /// Supporting functionals of the generated rational cone.
    pub functionals: Vec<Vec<i64>>,
    /// Echelon basis of the group generated.
    pub lattice: Vec<Vec<i128>>,
    unit_basis: bool,
    cache: Mutex<HashMap<(Vec<i64>, u64), Verdict>>,
}

impl Clone for VectorMonoid {
    fn clone(&self) -> Self {
        VectorMonoid::new(self.dim, self.generators.clone(), self.order_mode.clone()).expect("already validated")
    }
}

impl PartialEq for VectorMonoid {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim && self.generators == o.generators && self.order_mode == o.order_mode
    }
}

impl VectorMonoid {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>, order_mode: OrderMode) -> Result<Self, String> {
        if dim == 0 {
            return Err("dim must be positive".into());
        }
        if generators.is_empty() {
            return Err("at least one generator is required".into());
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(format!("generator {i} has length {} but dim is {dim}", g.len()));
            }
            if g.iter().all(|&c| c == 0) {
                return Err(format!("generator {i} is zero"));
            }
            if g.iter().any(|c| c.unsigned_abs() > 1 << 20) {
                return Err(format!("generator {i} has an entry beyond 2^20"));
            }
        }
        match &order_mode {
            OrderMode::Algebraic => {}
            OrderMode::Coordinatewise => {
                if let Some(i) = generators.iter().position(|g| g.iter().any(|&c| c < 0)) {
                    return Err(format!("coordinatewise order needs nonnegative generators; generator {i} is not"));
                }
            }
            OrderMode::Linear(w) => {
                if w.len() != dim {
                    return Err(format!("linear order needs {dim} weights, got {}", w.len()));
                }
                for (i, g) in generators.iter().enumerate() {
                    if value_of(w, g).signum() <= 0 {
                        return Err(format!("linear order needs a positive value on generator {i}"));
                    }
                }
            }
        }
        let positive = find_positive(&generators, dim);
        if order_mode == OrderMode::Algebraic && positive.is_none() {
            return Err("generators span a cone containing a line; the algebraic order would not be antisymmetric"
                .into());
        }
        let functionals = cone_functionals(&generators, dim);
        let lattice = echelon_basis(&generators, dim);
        let mut units: Vec<Vec<i64>> = generators.clone();
        units.sort();
        units.dedup();
        let unit_basis = generators.len() == dim
            && units.len() == dim
            && units.iter().all(|g| g.iter().filter(|&&c| c == 1).count() == 1 && g.iter().all(|&c| c == 0 || c == 1));
        Ok(VectorMonoid {
            dim,
            generators,
            order_mode,
            positive,
            functionals,
            lattice,
            unit_basis,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// The monoid is `N^dim` with its standard generators.
    pub fn is_free(&self) -> bool {
        self.unit_basis
    }

    pub fn is_algebraic_mode(&self) -> bool {
        self.order_mode == OrderMode::Algebraic
    }

    pub fn ell(&self, v: &[i64]) -> Option<i128> {
        self.positive.as_ref().map(|l| dot(l, v))
    }

    pub fn value(&self, v: &[i64]) -> Option<QuadraticValue> {
        match &self.order_mode {
            OrderMode::Linear(w) => Some(value_of(w, v)),
            _ => None,
        }
    }

    pub fn in_lattice(&self, v: &[i64]) -> bool {
        lattice_coords(&self.lattice, v).is_some()
    }

    /// Is `v` a nonnegative integer combination of the generators?
    pub fn contains(&self, v: &[i64], budget: &SearchBudget) -> Verdict {
        let cap = budget.node_cap();
        let key = (v.to_vec(), cap);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = self.contains_uncached(v, budget);
        let mut c = self.cache.lock().unwrap();
        if c.len() > 1 << 18 {
            c.clear();
        }
        c.insert(key, out.clone());
        out
    }

    fn contains_uncached(&self, v: &[i64], budget: &SearchBudget) -> Verdict {
        let k = self.generators.len();
        if v.iter().all(|&c| c == 0) {
            return Verdict::yes("zero is the empty combination").combination(vec![0; k]);
        }
        if self.unit_basis {
            if v.iter().any(|&c| c < 0) {
                return Verdict::no("negative coordinate in a free monoid");
            }
            let coeffs = self
                .generators
                .iter()
                .map(|g| v[g.iter().position(|&c| c == 1).unwrap()] as u64)
                .collect();
            return Verdict::yes("coordinates of a free monoid").combination(coeffs);
        }
        if !self.in_lattice(v) {
            return Verdict::no("not in the group generated by the generators");
        }
        if let Some(d) = self.functionals.iter().find(|d| dot(d, v) < 0) {
            return Verdict::no(format!("supporting functional {d:?} is negative on the vector"));
        }
        let mut search = Search {
            gens: &self.generators,
            ell: self.positive.as_deref(),
            functionals: &self.functionals,
            coeff_bound: budget.coeff_bound,
            cap: budget.node_cap(),
            nodes: 0,
            capped: false,
            coeffs: vec![0; k],
        };
        let residual: Vec<i64> = v.to_vec();
        let found = search.go(0, residual);
        let nodes = search.nodes;
        if found {
            return Verdict::yes("explicit nonnegative combination").combination(search.coeffs).steps(nodes);
        }
        if search.capped || self.positive.is_none() {
            return Verdict::unknown(Bound::CoeffBound, "membership search stopped at its bound").steps(nodes);
        }
        Verdict::no("exhaustive search bounded by a positive functional").steps(nodes)
    }

    pub fn leq_tri(&self, x: &[i64], y: &[i64], budget: &SearchBudget) -> Tri {
        match &self.order_mode {
            OrderMode::Algebraic => {
                let d: Vec<i64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
                self.contains(&d, budget).value
            }
            OrderMode::Coordinatewise => Tri::from_bool(x.iter().zip(y).all(|(a, b)| a <= b)),
            OrderMode::Linear(w) => Tri::from_bool(x == y || value_of(w, x) < value_of(w, y)),
        }
    }

    /// All elements `v` with `ell(v) <= bound`, or `None` without a
    /// positive functional. Sorted by `(ell, lex)`.
    pub fn elements_upto(&self, bound: i128) -> Option<Vec<Vec<i64>>> {
        let ell = self.positive.as_ref()?;
        let lg: Vec<i128> = self.generators.iter().map(|g| dot(ell, g)).collect();
        let mut out = BTreeSet::new();
        let mut cur = vec![0i64; self.dim];
        enumerate(&self.generators, &lg, 0, bound, &mut cur, &mut out);
        let mut v: Vec<Vec<i64>> = out.into_iter().collect();
        v.sort_by_key(|x| (dot(ell, x), x.clone()));
        Some(v)
    }

    /// Elements inside the coordinate box `[-b, b]^dim`, sorted by
    /// `(ell, lex)`. Requires a positive functional.
    pub fn box_elements(&self, b: i64) -> Option<Vec<Vec<i64>>> {
        let ell = self.positive.as_ref()?;
        let bound: i128 = ell.iter().map(|&c| c.unsigned_abs() as i128 * b as i128).sum();
        let all = self.elements_upto(bound)?;
        Some(all.into_iter().filter(|v| v.iter().all(|c| c.abs() <= b)).collect())
    }

    pub fn elem(v: Vec<i64>) -> Elem {
        Elem::Vec(v)
    }

    /// Generators lying on every supporting hyperplane through `g`: they
    /// span the smallest face of the cone that contains `g`.
    pub fn face_generators(&self, g: &[i64]) -> Vec<Vec<i64>> {
        let tight: Vec<&Vec<i64>> = self.functionals.iter().filter(|d| dot(d, g) == 0).collect();
        self.generators.iter().filter(|gen| tight.iter().all(|d| dot(d, gen) == 0)).cloned().collect()
    }

    /// Is `n*g` and `(n+1)*g` in the monoid for some `n >= 1`?
    ///
    /// Both multiples lie in the smallest face `F` containing `g`, so `g`
    /// must be in the cone and in the group generated by `F`. Conversely
    /// such a `g` sits in the relative interior of `F`, where every
    /// large enough lattice point belongs to the monoid. The witness `n`
    /// is searched up to `n_max`.
    pub fn au_member(&self, g: &[i64], budget: &SearchBudget) -> Verdict {
        if g.iter().all(|&c| c == 0) {
            return Verdict::yes("zero").with_n(1);
        }
        if let Some(d) = self.functionals.iter().find(|d| dot(d, g) < 0) {
            return Verdict::no(format!("supporting functional {d:?} is negative on the vector"));
        }
        let face = self.face_generators(g);
        if lattice_coords(&echelon_basis(&face, self.dim), g).is_none() {
            return Verdict::no("not in the group generated by its smallest face");
        }
        let mut steps = 0;
        for n in 1..=budget.n_max {
            let m1: Vec<i64> = g.iter().map(|c| c * n as i64).collect();
            let m2: Vec<i64> = g.iter().map(|c| c * (n as i64 + 1)).collect();
            let a = self.contains(&m1, budget);
            steps += a.budget_used.steps;
            if !a.is_yes() {
                continue;
            }
            let b = self.contains(&m2, budget);
            steps += b.budget_used.steps;
            if b.is_yes() {
                return Verdict::yes("both multiples are combinations of generators")
                    .with_n(n)
                    .witness("ng", Elem::Vec(m1))
                    .witness("(n+1)g", Elem::Vec(m2))
                    .steps(steps);
            }
        }
        Verdict::unknown(Bound::NMax, "member of the face group, but no multiple pair found up to n_max")
            .reached(budget.n_max)
            .steps(steps)
    }

    /// All elements whose weight is at most `bound`, for the linear order.
    pub fn elements_value_upto(&self, bound: &QuadraticValue) -> Option<Vec<Vec<i64>>> {
        let OrderMode::Linear(w) = &self.order_mode else { return None };
        let vals: Vec<QuadraticValue> = self.generators.iter().map(|g| value_of(w, g)).collect();
        let mut out = BTreeSet::new();
        let mut cur = vec![0i64; self.dim];
        fn go(
            gens: &[Vec<i64>],
            vals: &[QuadraticValue],
            i: usize,
            rem: QuadraticValue,
            cur: &mut Vec<i64>,
            out: &mut BTreeSet<Vec<i64>>,
        ) {
            if i == gens.len() {
                out.insert(cur.clone());
                return;
            }
            let mut rem = rem;
            let mut c = 0i64;
            loop {
                go(gens, vals, i + 1, rem.clone(), cur, out);
                rem = &rem - &vals[i];
                if rem.signum() < 0 {
                    break;
                }
                c += 1;
                for (x, g) in cur.iter_mut().zip(&gens[i]) {
                    *x += g;
                }
            }
            for (x, g) in cur.iter_mut().zip(&gens[i]) {
                *x -= g * c;
            }
        }
        go(&self.generators, &vals, 0, bound.clone(), &mut cur, &mut out);
        let mut v: Vec<Vec<i64>> = out.into_iter().collect();
        v.sort_by(|a, b| value_of(w, a).cmp(&value_of(w, b)).then_with(|| a.cmp(b)));
        Some(v)
    }
}

pub fn value_of(w: &[QuadraticValue], v: &[i64]) -> QuadraticValue {
    let mut acc = QuadraticValue::zero();
    for (wi, &c) in w.iter().zip(v) {
        acc = &acc + &QuadraticValue::new(wi.a * q(c as i128), wi.b * q(c as i128));
    }
    acc
}

fn enumerate(
    gens: &[Vec<i64>],
    lg: &[i128],
    i: usize,
    rem: i128,
    cur: &mut Vec<i64>,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if i == gens.len() {
        out.insert(cur.clone());
        return;
    }
    let mut used = 0i128;
    let mut c = 0;
    loop {
        enumerate(gens, lg, i + 1, rem - used, cur, out);
        used += lg[i];
        if used > rem {
            break;
        }
        c += 1;
        for (x, g) in cur.iter_mut().zip(&gens[i]) {
            *x += g;
        }
    }
    for (x, g) in cur.iter_mut().zip(&gens[i]) {
        *x -= g * c;
    }
}

/// Candidate functionals with entries in `[-r, r]`, smallest `r` first,
/// then smallest absolute sum, then lexicographic.
fn find_positive(gens: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    for r in 1..=6i64 {
        let mut best: Option<(i64, Vec<i64>)> = None;
        for cand in odometer(dim, r) {
            if gens.iter().all(|g| dot(&cand, g) >= 1) {
                let s: i64 = cand.iter().map(|c| c.abs()).sum();
                if best.as_ref().is_none_or(|(bs, bv)| (s, &cand) < (*bs, bv)) {
                    best = Some((s, cand));
                }
            }
        }
        if let Some((_, v)) = best {
            return Some(v);
        }
    }
    None
}

/// All vectors in `[-r, r]^dim` in lexicographic order.
fn odometer(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-r; dim];
    loop {
        out.push(cur.clone());
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                cur.iter_mut().skip(i + 1).for_each(|c| *c = -r);
                break;
            }
        }
    }
}

/// Depth-first membership search. With a positive functional the
/// search space is finite and exhaustion proves non-membership.
struct Search<'a> {
    gens: &'a [Vec<i64>],
    ell: Option<&'a [i64]>,
    functionals: &'a [Vec<i64>],
    coeff_bound: u64,
    cap: u64,
    nodes: u64,
    capped: bool,
    coeffs: Vec<u64>,
}

impl Search<'_> {
    fn go(&mut self, i: usize, residual: Vec<i64>) -> bool {
        self.nodes += 1;
        if self.nodes > self.cap {
            self.capped = true;
            return false;
        }
        if residual.iter().all(|&c| c == 0) {
            for c in self.coeffs.iter_mut().skip(i) {
                *c = 0;
            }
            return true;
        }
        if i == self.gens.len() {
            return false;
        }
        // Functionals vanishing on every remaining generator must vanish
        // on the residual; all of them must stay nonnegative.
        for d in self.functionals {
            let dv = dot(d, &residual);
            if dv < 0 {
                return false;
            }
            if dv > 0 && self.gens[i..].iter().all(|g| dot(d, g) == 0) {
                return false;
            }
        }
        let g = &self.gens[i];
        if i + 1 == self.gens.len() {
            // Last generator: the multiplicity is forced.
            let piv = g.iter().position(|&c| c != 0).unwrap();
            if residual[piv] % g[piv] != 0 {
                return false;
            }
            let k = residual[piv] / g[piv];
            if k < 0 || (self.ell.is_none() && k as u64 > self.coeff_bound) {
                return false;
            }
            if residual.iter().zip(g).all(|(r, gc)| *r == k * gc) {
                self.coeffs[i] = k as u64;
                return true;
            }
            return false;
        }
        let max_k: u64 = match self.ell {
            Some(l) => {
                let lr = dot(l, &residual);
                if lr < 0 {
                    return false;
                }
                (lr / dot(l, g)) as u64
            }
            None => self.coeff_bound,
        };
        let mut r = residual;
        for k in 0..=max_k {
            self.coeffs[i] = k;
            if self.go(i + 1, r.clone()) {
                return true;
            }
            if self.capped {
                return false;
            }
            for (rc, gc) in r.iter_mut().zip(g) {
                *rc -= gc;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone33() -> VectorMonoid {
        VectorMonoid::new(2, vec![vec![1, 0], vec![0, 1], vec![3, -3]], OrderMode::Algebraic).unwrap()
    }

    #[test]
    fn cone33_membership() {
        let n = cone33();
        let b = SearchBudget::default();
        assert_eq!(n.positive, Some(vec![2, 1]));
        assert!(n.contains(&[2, -1], &b).is_no());
        assert!(n.contains(&[4, -2], &b).is_yes());
        assert!(n.contains(&[6, -3], &b).is_yes());
        assert!(n.contains(&[4, -3], &b).is_yes());
        assert!(n.contains(&[0, 0], &b).is_yes());
    }

    #[test]
    fn numerical_semigroup_gap() {
        let m = VectorMonoid::new(1, vec![vec![2], vec![3]], OrderMode::Algebraic).unwrap();
        let b = SearchBudget::default();
        assert!(m.contains(&[1], &b).is_no());
        assert!(m.contains(&[5], &b).is_yes());
        assert_eq!(m.box_elements(6).unwrap(), vec![vec![0], vec![2], vec![3], vec![4], vec![5], vec![6]]);
    }

    #[test]
    fn line_is_rejected_for_algebraic_order() {
        assert!(VectorMonoid::new(1, vec![vec![1], vec![-1]], OrderMode::Algebraic).is_err());
    }
}
