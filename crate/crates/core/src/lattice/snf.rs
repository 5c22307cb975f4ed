//! Smith normal form of a Gram matrix, with the left transform kept so
//! that classes in `L^∨ / L` can be reduced canonically.

use super::Lattice;

#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries `d_1 | d_2 | …`, all positive.
    pub diagonal: Vec<u64>,
    /// Unimodular `U` with `U G V = diag(d)`, row-major.
    pub left: Vec<i128>,
    rank: usize,
}

impl SmithForm {
    /// Canonical representative of the class of a pairing vector `p = G x`
    /// (with `x ∈ L^∨` coordinates) in `Z^n / G Z^n ≅ L^∨ / L`.
    pub fn class_of(&self, pairing: &[i64]) -> Vec<u64> {
        let n = self.rank;
        let mut out = Vec::new();
        for i in 0..n {
            let d = self.diagonal[i];
            if d == 1 {
                continue;
            }
            let v: i128 = (0..n).map(|j| self.left[i * n + j] * pairing[j] as i128).sum();
            out.push(v.rem_euclid(d as i128) as u64);
        }
        out
    }
}

pub fn smith_normal_form(lattice: &Lattice) -> SmithForm {
    let n = lattice.rank();
    let mut a: Vec<i128> = lattice.gram_flat().iter().map(|&v| v as i128).collect();
    let mut u: Vec<i128> = (0..n * n).map(|k| i128::from(k / n == k % n)).collect();

    let swap_rows = |m: &mut Vec<i128>, r1: usize, r2: usize| {
        if r1 != r2 {
            for c in 0..n {
                m.swap(r1 * n + c, r2 * n + c);
            }
        }
    };
    // row r1 -= f * row r2
    let row_sub = |m: &mut Vec<i128>, r1: usize, r2: usize, f: i128| {
        if f != 0 {
            for c in 0..n {
                let v = m[r2 * n + c];
                m[r1 * n + c] -= f * v;
            }
        }
    };

    for t in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let v = a[i * n + j];
                    if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi * n + bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            swap_rows(&mut a, t, pi);
            swap_rows(&mut u, t, pi);
            if pj != t {
                for r in 0..n {
                    a.swap(r * n + t, r * n + pj);
                }
            }
            let p = a[t * n + t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i * n + t].div_euclid(p);
                row_sub(&mut a, i, t, q);
                row_sub(&mut u, i, t, q);
                if a[i * n + t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t * n + j].div_euclid(p);
                if q != 0 {
                    for r in 0..n {
                        let v = a[r * n + t];
                        a[r * n + j] -= q * v;
                    }
                }
                if a[t * n + j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i * n + j] % p != 0));
            match bad {
                Some(i) => {
                    // add row i to row t and restart the pivot search
                    row_sub(&mut a, t, i, -1);
                    row_sub(&mut u, t, i, -1);
                }
                None => break,
            }
        }
        if a[t * n + t] < 0 {
            for c in 0..n {
                a[t * n + c] = -a[t * n + c];
                u[t * n + c] = -u[t * n + c];
            }
        }
    }
    let diagonal = (0..n).map(|i| a[i * n + i] as u64).collect();
    SmithForm { diagonal, left: u, rank: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{root_lattice, Family};

    #[test]
    fn a2_class_group() {
        let a2 = root_lattice(Family::A, 2).unwrap();
        let s = smith_normal_form(&a2);
        assert_eq!(s.diagonal.iter().product::<u64>(), 3);
        // a root has class 0; a fundamental weight (pairings (1,0)) does not
        let root = a2.pairing_vector(&[1, 0]);
        assert_eq!(s.class_of(&root), vec![0]);
        assert_ne!(s.class_of(&[1, 0]), vec![0]);
        assert_eq!(s.class_of(&[1, 0]), s.class_of(&[0, -1]));
    }

    #[test]
    fn d4_is_klein_four() {
        let s = smith_normal_form(&root_lattice(Family::D, 4).unwrap());
        let mut d: Vec<u64> = s.diagonal.into_iter().filter(|&d| d != 1).collect();
        d.sort();
        assert_eq!(d, vec![2, 2]);
    }
}
