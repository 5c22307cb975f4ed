//! Extended binary Golay code and the Leech lattice built from it.

use super::basis::basis_mod;
use super::{lll_reduce, short_vectors, CountByNorm, Lattice};
use crate::error::{Error, Result};

/// Generator of the cyclic [23, 12, 7] Golay code: 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11.
const CYCLIC_GENERATOR: u32 = 0b1100_0111_0101;

/// Twelve basis codewords of the extended code, as 24-bit masks (bit 23 = parity).
pub fn golay_basis() -> Vec<u32> {
    (0..12)
        .map(|shift| {
            let w = CYCLIC_GENERATOR << shift;
            w | ((w.count_ones() & 1) << 23)
        })
        .collect()
}

/// All 4096 codewords.
pub fn golay_codewords() -> Vec<u32> {
    let basis = golay_basis();
    (0u32..4096).map(|m| (0..12).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| acc ^ basis[i])).collect()
}

/// Leech lattice from the vectors `x ∈ Z^24` with `x ≡ 2c (mod 4)`-type
/// Golay congruences, scaled by `1/√8`: generated by `2c` for codewords `c`,
/// `4(e_i ± e_j)` and `(-3, 1, …, 1)`. Reduced with LLL and checked.
pub fn leech() -> Result<Lattice> {
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for c in golay_basis() {
        gens.push((0..24).map(|i| if c >> i & 1 == 1 { 2 } else { 0 }).collect());
    }
    for j in 1..24 {
        for sign in [1, -1] {
            let mut v = vec![0i64; 24];
            v[0] = 4;
            v[j] = 4 * sign;
            gens.push(v);
        }
    }
    let mut odd = vec![1i64; 24];
    odd[0] = -3;
    gens.push(odd);
    let basis = basis_mod(&gens, 24, 8);
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let mut rows = vec![vec![0i64; 24]; 24];
    for i in 0..24 {
        for j in 0..24 {
            let d = dot(&basis[i], &basis[j]);
            if d % 8 != 0 {
                return Err(Error::InvalidLattice("Leech generators are not integral".into()));
            }
            rows[i][j] = d / 8;
        }
    }
    let (lattice, _) = lll_reduce(&Lattice::from_rows(&rows)?)?;
    if lattice.determinant() != 1.into() {
        return Err(Error::InvalidLattice("Leech construction is not unimodular".into()));
    }
    let (roots, _) = short_vectors(&lattice, 2, CountByNorm::default())?;
    if roots.counts.contains_key(&2) {
        return Err(Error::InvalidLattice("Leech construction has roots".into()));
    }
    Ok(lattice)
}
