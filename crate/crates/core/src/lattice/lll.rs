//! LLL reduction of a Gram matrix. Gram–Schmidt data is kept in `f64`
//! and only steers the unimodular moves; the Gram matrix and the transform
//! are updated in exact integer arithmetic.

use super::Lattice;
use crate::error::Result;

/// Returns the reduced lattice and the transform `T` whose rows express the
/// new basis in the old one (`G' = T G T^t`).
pub fn lll_reduce(lattice: &Lattice) -> Result<(Lattice, Vec<Vec<i64>>)> {
    let n = lattice.rank();
    let mut g: Vec<Vec<i64>> = lattice.rows();
    let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let delta = 0.99;

    let gso = |g: &Vec<Vec<i64>>, upto: usize, mu: &mut Vec<Vec<f64>>, bn: &mut Vec<f64>| {
        for i in 0..upto {
            for j in 0..i {
                let mut v = g[i][j] as f64;
                for l in 0..j {
                    v -= mu[j][l] * mu[i][l] * bn[l];
                }
                mu[i][j] = v / bn[j];
            }
            let mut b = g[i][i] as f64;
            for l in 0..i {
                b -= mu[i][l] * mu[i][l] * bn[l];
            }
            bn[i] = b;
        }
    };

    let mut mu = vec![vec![0.0f64; n]; n];
    let mut bn = vec![0.0f64; n];
    gso(&g, n, &mut mu, &mut bn);
    let mut k = 1;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        assert!(guard < 10_000_000, "LLL failed to terminate");
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r == 0.0 {
                continue;
            }
            let r = r as i64;
            // b_k <- b_k - r b_j
            let gkj = g[k][j];
            let gjj = g[j][j];
            for i in 0..n {
                if i != k {
                    g[k][i] -= r * g[j][i];
                    g[i][k] = g[k][i];
                }
            }
            g[k][k] += -2 * r * gkj + r * r * gjj;
            for i in 0..n {
                t[k][i] -= r * t[j][i];
            }
            for l in 0..j {
                mu[k][l] -= r as f64 * mu[j][l];
            }
            mu[k][j] -= r as f64;
        }
        if bn[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1] {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            t.swap(k, k - 1);
            gso(&g, n, &mut mu, &mut bn);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    Ok((Lattice::from_rows(&g)?, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_skewed_a2() {
        // A2 in a bad basis: b1 = a1, b2 = 5 a1 + a2
        let a2 = [[2i64, -1], [-1, 2]];
        let basis = [[1i64, 0], [5, 1]];
        let rows: Vec<Vec<i64>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| (0..2).map(|i| (0..2).map(|j| x[i] * a2[i][j] * y[j]).sum::<i64>()).sum()).collect())
            .collect();
        let l = Lattice::from_rows(&rows).unwrap();
        let (red, t) = lll_reduce(&l).unwrap();
        assert!(red.entry(0, 0) == 2 && red.entry(1, 1) == 2);
        assert_eq!(red.determinant(), l.determinant());
        // transform consistency
        for i in 0..2 {
            for j in 0..2 {
                let v: i64 = (0..2).map(|a| (0..2).map(|b| t[i][a] * l.entry(a, b) * t[j][b]).sum::<i64>()).sum();
                assert_eq!(v, red.entry(i, j));
            }
        }
    }
}
