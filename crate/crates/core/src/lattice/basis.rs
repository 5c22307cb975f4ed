//! Integer row reduction helpers for building lattices from generating sets.

/// Triangular basis of the lattice spanned by `gens` in `Z^n`, assuming the
/// span contains `modulus · Z^n`. All intermediate entries stay below
/// `modulus` in absolute value.
pub(crate) fn basis_mod(gens: &[Vec<i64>], n: usize, modulus: i64) -> Vec<Vec<i64>> {
    let m = modulus as i128;
    let mut pool: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.iter().map(|&v| (v as i128).rem_euclid(m)).collect())
        .filter(|g: &Vec<i128>| g.iter().any(|&v| v != 0))
        .collect();
    for j in 0..n {
        let mut e = vec![0i128; n];
        e[j] = m;
        pool.push(e);
    }
    let mut basis = Vec::with_capacity(n);
    for col in 0..n {
        loop {
            let mut idx: Vec<usize> = (0..pool.len()).filter(|&i| pool[i][col] != 0).collect();
            idx.sort_by_key(|&i| pool[i][col].abs());
            let Some(&p) = idx.first() else { break };
            if idx.len() == 1 {
                let mut row = pool.swap_remove(p);
                if row[col] < 0 {
                    row.iter_mut().for_each(|v| *v = -*v);
                }
                basis.push(row);
                break;
            }
            let pivot = pool[p].clone();
            for &i in &idx[1..] {
                let q = pool[i][col].div_euclid(pivot[col]);
                for c in col..n {
                    pool[i][c] -= q * pivot[c];
                }
                for c in col + 1..n {
                    pool[i][c] = pool[i][c].rem_euclid(m);
                }
            }
            pool.retain(|r| r.iter().any(|&v| v != 0));
        }
    }
    // reduce above-diagonal entries for a canonical, small basis
    for col in 0..n {
        let piv = basis[col][col];
        for r in 0..col {
            let q = basis[r][col].div_euclid(piv);
            if q != 0 {
                let prow = basis[col].clone();
                for c in col..n {
                    basis[r][c] -= q * prow[c];
                }
            }
        }
    }
    basis.into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect()
}

/// Rank over `Q` of a set of integer vectors.
pub(crate) fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col] == 0 {
                continue;
            }
            let a = pivot[col];
            let b = row[col];
            let mut g = 0i128;
            for c in 0..cols {
                row[c] = row[c] * a - pivot[c] * b;
                g = gcd(g, row[c]);
            }
            if g > 1 {
                row.iter_mut().for_each(|v| *v /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_two_sublattice() {
        // D2-type sublattice of Z^2 spanned by (1,1), (1,-1) contains 2Z^2
        let b = basis_mod(&[vec![1, 1], vec![1, -1]], 2, 2);
        assert_eq!(b[0][0] * b[1][1], 2);
    }

    #[test]
    fn ranks() {
        assert_eq!(integer_rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        assert_eq!(integer_rank(&[vec![0, 0]]), 0);
    }
}
