//! Finite commutative monoids with an explicit order.

/// Invariant (checked by `new`): commutative, associative, `zero` is
/// neutral and least, `leq` is a translation invariant partial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
    pub zero: usize,
    /// For each element `x`: `(index, period)` with `index*x` the first
    /// multiple that repeats, `(index+period)*x = index*x`.
    pub cycles: Vec<(usize, usize)>,
}

pub enum OrderSpec {
    Algebraic,
    Pairs(Vec<(usize, usize)>),
}

impl FiniteMonoid {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>, order: OrderSpec) -> Result<Self, String> {
        let n = names.len();
        if n == 0 {
            return Err("a monoid needs at least one element".into());
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(format!("addition table must be {n}x{n}"));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err("addition table refers to an unknown element".into());
        }
        for a in 0..n {
            for b in 0..n {
                if table[a][b] != table[b][a] {
                    return Err(format!("addition is not commutative at ({}, {})", names[a], names[b]));
                }
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(format!(
                            "addition is not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        ));
                    }
                }
            }
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| table[z][a] == a))
            .ok_or("no neutral element")?;
        let mut leq = vec![vec![false; n]; n];
        match order {
            OrderSpec::Algebraic => {
                for a in 0..n {
                    for z in 0..n {
                        leq[a][table[a][z]] = true;
                    }
                }
            }
            OrderSpec::Pairs(pairs) => {
                for (a, b) in pairs {
                    if a >= n || b >= n {
                        return Err("order pair refers to an unknown element".into());
                    }
                    leq[a][b] = true;
                }
            }
        }
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        // Reflexive-transitive closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            if !leq[zero][a] {
                return Err(format!("zero is not below `{}`", names[a]));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(format!("order is not antisymmetric on ({}, {})", names[a], names[b]));
                }
                if leq[a][b] {
                    for c in 0..n {
                        if !leq[table[a][c]][table[b][c]] {
                            return Err(format!(
                                "order is not translation invariant: {} <= {} but not after adding {}",
                                names[a], names[b], names[c]
                            ));
                        }
                    }
                }
            }
        }
        let cycles = (0..n).map(|x| cycle_of(&table, x)).collect();
        Ok(FiniteMonoid { names, table, leq, zero, cycles })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn mul(&self, n: u64, x: usize) -> usize {
        if n == 0 {
            return self.zero;
        }
        let (idx, per) = self.cycles[x];
        let n = n as usize;
        let m = if n < idx { n } else { idx + (n - idx) % per };
        let mut acc = x;
        for _ in 1..m {
            acc = self.table[acc][x];
        }
        acc
    }

    /// Number of distinct positive multiples of `x`.
    pub fn multiples_span(&self, x: usize) -> u64 {
        let (i, p) = self.cycles[x];
        (i + p - 1) as u64
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    /// The smallest idempotent `ω` of the form `k * (sum of all elements)`.
    /// `ω + M` is the minimal ideal, a group isomorphic to `Gr(M)`.
    pub fn kernel_idempotent(&self) -> usize {
        let s = (0..self.len()).fold(self.zero, |acc, x| self.add(acc, x));
        let mut w = s;
        loop {
            let w2 = self.add(w, w);
            if w2 == w {
                return w;
            }
            w = self.add(w, s);
        }
    }
}

fn cycle_of(table: &[Vec<usize>], x: usize) -> (usize, usize) {
    let mut seen: Vec<usize> = vec![x];
    let mut cur = x;
    loop {
        cur = table[cur][x];
        if let Some(pos) = seen.iter().position(|&s| s == cur) {
            return (pos + 1, seen.len() - pos);
        }
        seen.push(cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_t() -> FiniteMonoid {
        // {0, 1, T}: 1+1 = T, T absorbing.
        let names = vec!["0".into(), "1".into(), "T".into()];
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        FiniteMonoid::new(names, table, OrderSpec::Algebraic).unwrap()
    }

    #[test]
    fn cycles_and_multiples() {
        let m = one_t();
        assert_eq!(m.cycles[1], (2, 1));
        assert_eq!(m.mul(1, 1), 1);
        assert_eq!(m.mul(5, 1), 2);
        assert_eq!(m.mul(0, 2), 0);
        assert_eq!(m.kernel_idempotent(), 2);
    }

    #[test]
    fn rejects_non_translation_invariant_order() {
        let names = vec!["0".into(), "1".into(), "T".into()];
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        // 0 <= 1 forces 1 <= T after adding 1, which the closure lacks.
        assert!(FiniteMonoid::new(names, table, OrderSpec::Pairs(vec![(0, 1), (0, 2), (2, 1)])).is_err());
    }

    #[test]
    fn z2_is_not_positively_ordered() {
        let names = vec!["0".into(), "a".into()];
        let table = vec![vec![0, 1], vec![1, 0]];
        assert!(FiniteMonoid::new(names, table, OrderSpec::Algebraic).is_err());
    }
}
