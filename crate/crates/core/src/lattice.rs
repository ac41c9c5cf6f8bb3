//! Integer linear algebra for finitely generated submonoids of Z^d.

use num_integer::Integer;

/// Echelon basis of the lattice spanned by `rows` (row-style Hermite
/// form without the reduction above pivots). Pivots are positive.
pub fn echelon_basis(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i128>> {
    let mut m: Vec<Vec<i128>> =
        rows.iter().map(|r| r.iter().map(|&c| c as i128).collect()).filter(|r: &Vec<i128>| r.iter().any(|&c| c != 0)).collect();
    let mut basis = Vec::new();
    let mut col = 0;
    while col < dim && !m.is_empty() {
        // Euclid on column `col` until one row carries the gcd.
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let qt = num_integer::Integer::div_floor(&m[i][col], &m[p][col]);
                    for c in col..dim {
                        m[i][c] -= qt * m[p][c];
                    }
                }
            }
        }
        if let Some(p) = (0..m.len()).find(|&i| m[i][col] != 0) {
            let mut row = m.remove(p);
            if row[col] < 0 {
                row.iter_mut().for_each(|c| *c = -*c);
            }
            basis.push(row);
        }
        m.retain(|r| r.iter().any(|&c| c != 0));
        col += 1;
    }
    basis
}

/// Coordinates of `v` in an echelon basis, if `v` lies in the lattice.
pub fn lattice_coords(basis: &[Vec<i128>], v: &[i64]) -> Option<Vec<i128>> {
    let mut r: Vec<i128> = v.iter().map(|&c| c as i128).collect();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let piv = b.iter().position(|&c| c != 0).unwrap();
        if r[..piv].iter().any(|&c| c != 0) {
            return None;
        }
        if r[piv] % b[piv] != 0 {
            return None;
        }
        let k = r[piv] / b[piv];
        for (rc, bc) in r.iter_mut().zip(b) {
            *rc -= k * bc;
        }
        coords.push(k);
    }
    if r.iter().all(|&c| c == 0) {
        Some(coords)
    } else {
        None
    }
}

/// Integer vectors spanning the rational kernel `{n : <r, n> = 0 for all rows r}`.
pub fn kernel_basis(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    use crate::arith::{q, Q};
    use num_traits::Zero;
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&c| q(c as i128)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Q::from_integer(1) / m[row][col];
        for c in 0..dim {
            m[row][c] *= inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col];
                for c in 0..dim {
                    let t = m[row][c] * f;
                    m[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![Q::zero(); dim];
        v[f] = q(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][f];
        }
        let den = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
        let iv: Vec<i128> = v.iter().map(|x| (x * q(den)).to_integer()).collect();
        out.push(primitive(&iv));
    }
    out
}

fn primitive(v: &[i128]) -> Vec<i64> {
    let g = v.iter().fold(0i128, |acc, &c| acc.gcd(&c));
    let g = if g == 0 { 1 } else { g };
    v.iter().map(|&c| (c / g) as i64).collect()
}

/// Determinant by fraction-free elimination.
pub fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Primitive integer normal to `d-1` vectors in `Z^d`, or `None` when
/// they are linearly dependent.
pub fn normal(vectors: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    debug_assert_eq!(vectors.len() + 1, dim);
    if dim == 1 {
        return Some(vec![1]);
    }
    let mut n = vec![0i128; dim];
    for (j, slot) in n.iter_mut().enumerate() {
        let minor: Vec<Vec<i128>> = vectors
            .iter()
            .map(|v| (0..dim).filter(|&c| c != j).map(|c| v[c] as i128).collect())
            .collect();
        let d = det(minor);
        *slot = if j % 2 == 0 { d } else { -d };
    }
    if n.iter().all(|&c| c == 0) {
        None
    } else {
        Some(primitive(&n))
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn rank(rows: &[Vec<i64>], dim: usize) -> usize {
    echelon_basis(rows, dim).len()
}

/// Supporting functionals of the rational cone spanned by `gens`: every
/// returned `δ` has `δ(g) >= 0` on all generators, and a vector lies in
/// the cone iff it is nonnegative on all of them. Kernel directions of
/// the span appear with both signs.
pub fn cone_functionals(gens: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let ker = kernel_basis(gens, dim);
    let r = dim - ker.len();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let push = |v: Vec<i64>, out: &mut Vec<Vec<i64>>| {
        if !out.contains(&v) {
            out.push(v);
        }
    };
    for k in &ker {
        push(k.clone(), &mut out);
        push(k.iter().map(|c| -c).collect(), &mut out);
    }
    if r == 0 {
        return out;
    }
    let nonzero: Vec<&Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&c| c != 0)).collect();
    for subset in combinations(nonzero.len(), r - 1) {
        let mut vs: Vec<Vec<i64>> = subset.iter().map(|&i| nonzero[i].clone()).collect();
        vs.extend(ker.iter().cloned());
        let Some(n) = normal(&vs, dim) else { continue };
        let vals: Vec<i128> = nonzero.iter().map(|g| dot(&n, g)).collect();
        if vals.iter().all(|&v| v == 0) {
            continue;
        }
        if vals.iter().all(|&v| v >= 0) {
            push(n, &mut out);
        } else if vals.iter().all(|&v| v <= 0) {
            push(n.iter().map(|c| -c).collect(), &mut out);
        }
    }
    out.sort();
    out
}

/// Indices of a maximal linearly independent subset of `rows`, greedily
/// in order.
pub fn independent_subset(rows: &[Vec<i64>], dim: usize) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    let mut acc: Vec<Vec<i64>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push(r.clone());
        if rank(&acc, dim) == acc.len() {
            picked.push(i);
        } else {
            acc.pop();
        }
    }
    picked
}

/// The unique rational `c` with `sum c_j * cols[j] = rhs`, when the
/// columns are independent and `rhs` lies in their span.
pub fn solve_rational(cols: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<crate::arith::Q>> {
    use crate::arith::{q, Q};
    use num_traits::Zero;
    let d = rhs.len();
    let k = cols.len();
    // Augmented d x (k+1) system.
    let mut m: Vec<Vec<Q>> =
        (0..d).map(|i| (0..k).map(|j| q(cols[j][i] as i128)).chain([q(rhs[i] as i128)]).collect()).collect();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..d).find(|&i| !m[i][col].is_zero()) else { return None };
        m.swap(row, p);
        let inv = Q::from_integer(1) / m[row][col];
        for c in 0..=k {
            m[row][c] *= inv;
        }
        for i in 0..d {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col];
                for c in 0..=k {
                    let t = m[row][c] * f;
                    m[i][c] -= t;
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|j| m[j][k]).collect())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_semigroup_lattice_is_z() {
        let b = echelon_basis(&[vec![2], vec![3]], 1);
        assert_eq!(b, vec![vec![1]]);
    }

    #[test]
    fn sublattice_membership() {
        let b = echelon_basis(&[vec![2, 0], vec![0, 2], vec![1, 1]], 2);
        assert!(lattice_coords(&b, &[1, 1]).is_some());
        assert!(lattice_coords(&b, &[1, 0]).is_none());
        assert!(lattice_coords(&b, &[3, 5]).is_some());
    }

    #[test]
    fn cone33_facets() {
        let f = cone_functionals(&[vec![1, 0], vec![0, 1], vec![3, -3]], 2);
        assert_eq!(f, vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn flat_cone_gets_kernel_pair() {
        let f = cone_functionals(&[vec![1, 1]], 2);
        assert!(f.contains(&vec![1, -1]) && f.contains(&vec![-1, 1]));
    }

    #[test]
    fn rational_solve_in_span() {
        let c = solve_rational(&[vec![1, 0], vec![0, 1]], &[3, -2]).unwrap();
        assert_eq!(c, vec![crate::arith::q(3), crate::arith::q(-2)]);
        assert!(solve_rational(&[vec![1, 1]], &[1, 0]).is_none());
        assert_eq!(independent_subset(&[vec![1, 0], vec![2, 0], vec![0, 1]], 2), vec![0, 2]);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 4]]), -4);
    }
}
