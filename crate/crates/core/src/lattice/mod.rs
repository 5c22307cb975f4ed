//! Positive-definite even lattices given by integral Gram matrices.
//!
//! The Lorentzian lattices of the theory are `U ⊕ U ⊕ L(-1)`; only the
//! positive-definite part `L` is stored here and signs are handled in
//! exponent bookkeeping by the series layer.
//!
//! Dual vectors are stored through their pairings with the basis of `L`:
//! `ℓ ∈ L^∨` iff `(ℓ, e_i) ∈ Z` for every basis vector. Since Jacobi theta
//! products produce exponents in `½ L^∨`, pairings are kept doubled.

mod basis;
mod cache;
mod enumerate;
mod golay;
mod lll;
mod niemeier;
mod snf;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use cache::{
    cached_tally, compute_tally, CacheEntryStatus, CacheReport, EnumerationCache, CACHE_DIR_ENV, CACHE_FORMAT_VERSION,
};
pub use enumerate::{
    short_vectors, short_vectors_with, CountByNorm, EnumBudget, EnumStats, EnumerationSink, PairConvention, PairingTally,
    VectorCollector,
};
pub use golay::{golay_basis, golay_codewords, leech};
pub use lll::lll_reduce;
pub use niemeier::{cusp_lattice, niemeier, CuspLabel, RootComponent, RootSystemData};
pub use snf::{smith_normal_form, SmithForm};

use crate::error::{Error, Result};

/// Even integral positive-definite lattice.
#[derive(Clone)]
pub struct Lattice {
    rank: usize,
    gram: Vec<i64>,
    inverse: Arc<OnceLock<Vec<BigRational>>>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.gram == other.gram
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("rank", &self.rank).field("gram", &self.rows()).finish()
    }
}

impl Lattice {
    /// Builds a lattice, checking symmetry and evenness. Positive definiteness
    /// is checked separately by [`Lattice::is_positive_definite`].
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        let mut gram = Vec::with_capacity(rank * rank);
        for row in rows {
            if row.len() != rank {
                return Err(Error::InvalidLattice("Gram matrix is not square".into()));
            }
            gram.extend_from_slice(row);
        }
        for i in 0..rank {
            if gram[i * rank + i] % 2 != 0 {
                return Err(Error::InvalidLattice(format!("diagonal entry {i} is odd")));
            }
            for j in 0..i {
                if gram[i * rank + j] != gram[j * rank + i] {
                    return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(Lattice { rank, gram, inverse: Arc::new(OnceLock::new()) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.rank + j]
    }

    pub fn gram_flat(&self) -> &[i64] {
        &self.gram
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.gram.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// SHA-256 over the rank and the row-major Gram entries.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.rank as u64).to_le_bytes());
        for v in &self.gram {
            h.update(v.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn short_digest(&self) -> String {
        self.digest()[..16].to_string()
    }

    /// `(x, y)` for integral coordinate vectors.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            let row = &self.gram[i * self.rank..(i + 1) * self.rank];
            acc += x[i] * row.iter().zip(y).map(|(a, b)| a * b).sum::<i64>();
        }
        acc
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        self.inner(x, x)
    }

    /// Pairing vector `G x` of a lattice vector.
    pub fn pairing_vector(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|i| self.gram[i * self.rank..(i + 1) * self.rank].iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_minors(&self.gram, self.rank).pop().unwrap_or_else(BigInt::one)
    }

    /// All leading principal minors positive.
    pub fn is_positive_definite(&self) -> bool {
        bareiss_minors(&self.gram, self.rank).iter().all(|m| m.is_positive())
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.entry(i, i) % 2 == 0)
    }

    /// Exact inverse Gram matrix, row-major.
    pub fn inverse(&self) -> &[BigRational] {
        self.inverse.get_or_init(|| invert(&self.gram, self.rank))
    }

    /// `(ℓ, ℓ)` for the dual vector with doubled pairing vector `pairing2`.
    pub fn dual_norm2(&self, pairing2: &[i64]) -> BigRational {
        let inv = self.inverse();
        let n = self.rank;
        let mut acc = BigRational::zero();
        for i in 0..n {
            if pairing2[i] == 0 {
                continue;
            }
            let mut row = BigRational::zero();
            for j in 0..n {
                if pairing2[j] != 0 {
                    row += &inv[i * n + j] * BigRational::from_integer(BigInt::from(pairing2[j]));
                }
            }
            acc += row * BigRational::from_integer(BigInt::from(pairing2[i]));
        }
        acc / BigRational::from_integer(BigInt::from(4))
    }
}

/// ADE family of an irreducible simply-laced root system.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        };
        write!(f, "{c}")
    }
}

/// Cartan matrix in Bourbaki numbering.
pub fn cartan_matrix(family: Family, rank: usize) -> Result<Vec<Vec<i64>>> {
    let valid = match family {
        Family::A => rank >= 1,
        Family::D => rank >= 4,
        Family::E => (6..=8).contains(&rank),
    };
    if !valid {
        return Err(Error::InvalidRootSystem(format!("{family}{rank}")));
    }
    let mut m = vec![vec![0i64; rank]; rank];
    let mut link = |a: usize, b: usize| {
        m[a][b] = -1;
        m[b][a] = -1;
    };
    match family {
        Family::A => (1..rank).for_each(|i| link(i - 1, i)),
        Family::D => {
            (1..rank - 1).for_each(|i| link(i - 1, i));
            link(rank - 3, rank - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            (3..rank).for_each(|i| link(i - 1, i));
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    Ok(m)
}

/// Root lattice of type `family_rank`, basis of simple roots.
pub fn root_lattice(family: Family, rank: usize) -> Result<Lattice> {
    Lattice::from_rows(&cartan_matrix(family, rank)?)
}

/// Orthogonal direct sum (block-diagonal Gram matrix).
pub fn direct_sum(parts: &[Lattice]) -> Result<Lattice> {
    if parts.is_empty() {
        return Err(Error::InvalidLattice("direct sum of an empty list".into()));
    }
    let rank: usize = parts.iter().map(Lattice::rank).sum();
    let mut rows = vec![vec![0i64; rank]; rank];
    let mut off = 0;
    for p in parts {
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                rows[off + i][off + j] = p.entry(i, j);
            }
        }
        off += p.rank();
    }
    Lattice::from_rows(&rows)
}

/// Invariant factors of `L^∨/L`, its exponent and order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<u64>,
    pub exponent: u64,
    pub determinant: u64,
}

pub fn discriminant_group(lattice: &Lattice) -> DiscriminantGroup {
    let snf = smith_normal_form(lattice);
    let invariant_factors: Vec<u64> = snf.diagonal.iter().copied().filter(|&d| d != 1).collect();
    let exponent = invariant_factors.iter().fold(1u64, |a, &b| a.lcm(&b));
    let determinant = invariant_factors.iter().product();
    DiscriminantGroup { invariant_factors, exponent, determinant }
}

/// `(s(L), n(L))`: generators of the ideals spanned by all `(λ, μ)` and all `(λ, λ)`.
pub fn ideal_generators(lattice: &Lattice) -> (i64, i64) {
    let s = lattice.gram.iter().fold(0i64, |a, &b| a.gcd(&b));
    let diag = (0..lattice.rank).fold(0i64, |a, i| a.gcd(&lattice.entry(i, i)));
    (s, diag.gcd(&(2 * s)))
}

/// Element of `½ L^∨`, stored as doubled pairings with the basis of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualVector {
    pub pairing2: Vec<i64>,
}

impl DualVector {
    pub fn zero(rank: usize) -> Self {
        DualVector { pairing2: vec![0; rank] }
    }

    pub fn from_lattice_vector(lattice: &Lattice, x: &[i64]) -> Self {
        DualVector { pairing2: lattice.pairing_vector(x).into_iter().map(|p| 2 * p).collect() }
    }

    /// Coordinates in the basis of `L`, `G^{-1} p`.
    pub fn coords(&self, lattice: &Lattice) -> Vec<BigRational> {
        let inv = lattice.inverse();
        let n = lattice.rank();
        (0..n)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..n {
                    acc += &inv[i * n + j] * BigRational::from_integer(BigInt::from(self.pairing2[j]));
                }
                acc / BigRational::from_integer(BigInt::from(2))
            })
            .collect()
    }

    /// Least common denominator of the coordinates.
    pub fn denominator_bound(&self, lattice: &Lattice) -> u64 {
        self.coords(lattice).iter().fold(BigInt::one(), |a, c| a.lcm(c.denom())).to_u64().unwrap_or(u64::MAX)
    }

    pub fn is_in_dual(&self) -> bool {
        self.pairing2.iter().all(|p| p % 2 == 0)
    }

    /// `(ℓ, x)` for an integral lattice vector `x`, doubled.
    pub fn pair2_with(&self, x: &[i64]) -> i64 {
        self.pairing2.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, lattice: &Lattice) -> BigRational {
        lattice.dual_norm2(&self.pairing2)
    }

    pub fn neg(&self) -> Self {
        DualVector { pairing2: self.pairing2.iter().map(|p| -p).collect() }
    }
}

/// Declares `ℓ > 0` when the first nonzero value among `(w_1, ℓ), (w_2, ℓ), …`
/// is positive, followed by the coordinates of `ℓ` themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingFunctional {
    /// Lattice vectors (integral coordinates) tried before the lexicographic fallback.
    pub weights: Vec<Vec<i64>>,
}

impl OrderingFunctional {
    pub fn lexicographic() -> Self {
        OrderingFunctional { weights: Vec::new() }
    }

    pub fn from_vectors(weights: Vec<Vec<i64>>) -> Self {
        OrderingFunctional { weights }
    }

    /// `Some(true)` for positive, `Some(false)` for negative, `None` for zero.
    pub fn is_positive(&self, ell: &[i64]) -> Option<bool> {
        for w in &self.weights {
            let v: i64 = w.iter().zip(ell).map(|(a, b)| a * b).sum();
            if v != 0 {
                return Some(v > 0);
            }
        }
        ell.iter().find(|&&c| c != 0).map(|&c| c > 0)
    }

    /// Like [`Self::is_positive`] but without the lexicographic fallback.
    pub fn strict_sign(&self, ell: &[i64]) -> Option<bool> {
        if self.weights.is_empty() {
            return self.is_positive(ell);
        }
        for w in &self.weights {
            let v: i64 = w.iter().zip(ell).map(|(a, b)| a * b).sum();
            if v != 0 {
                return Some(v > 0);
            }
        }
        None
    }
}

fn bareiss_minors(gram: &[i64], n: usize) -> Vec<BigInt> {
    let mut m: Vec<BigInt> = gram.iter().map(|&v| BigInt::from(v)).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    for k in 0..n {
        if m[k * n + k].is_zero() {
            // leading minor vanishes; pivot only to finish the determinant
            match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(k * n + c, r * n + c);
                    }
                    sign = -sign;
                    minors.push(BigInt::zero());
                }
                None => {
                    minors.extend(std::iter::repeat_n(BigInt::zero(), n - k));
                    return minors;
                }
            }
        } else {
            minors.push(&m[k * n + k] * sign);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = m[k * n + k].clone();
    }
    if let Some(last) = minors.last_mut() {
        *last = &m[(n - 1) * n + n - 1] * sign;
    }
    minors
}

fn invert(gram: &[i64], n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = gram.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    let mut inv: Vec<BigRational> =
        (0..n * n).map(|k| if k / n == k % n { BigRational::one() } else { BigRational::zero() }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r * n + col].is_zero()).expect("Gram matrix is singular");
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let p = a[col * n + col].clone();
        for c in 0..n {
            a[col * n + c] = &a[col * n + c] / &p;
            inv[col * n + c] = &inv[col * n + c] / &p;
        }
        for r in 0..n {
            if r == col || a[r * n + col].is_zero() {
                continue;
            }
            let f = a[r * n + col].clone();
            for c in 0..n {
                let t = &f * &a[col * n + c];
                a[r * n + c] -= t;
                let t = &f * &inv[col * n + c];
                inv[r * n + c] -= t;
            }
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_and_a2_grams() {
        assert_eq!(root_lattice(Family::A, 1).unwrap().rows(), vec![vec![2]]);
        assert_eq!(root_lattice(Family::A, 2).unwrap().rows(), vec![vec![2, -1], vec![-1, 2]]);
        assert!(root_lattice(Family::D, 3).is_err());
        assert!(root_lattice(Family::E, 9).is_err());
    }

    #[test]
    fn a2_from_hyperplane_construction() {
        // simple roots e1-e2, e2-e3 of Z^3 span A2
        let roots = [[1i64, -1, 0], [0, 1, -1]];
        let dot = |a: &[i64; 3], b: &[i64; 3]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
        let rows: Vec<Vec<i64>> = roots.iter().map(|a| roots.iter().map(|b| dot(a, b)).collect()).collect();
        assert_eq!(Lattice::from_rows(&rows).unwrap(), root_lattice(Family::A, 2).unwrap());
    }

    #[test]
    fn determinants_of_sums() {
        let a1 = root_lattice(Family::A, 1).unwrap();
        let four = direct_sum(&[a1.clone(), a1.clone(), a1.clone(), a1.clone()]).unwrap();
        assert_eq!(four.rank(), 4);
        assert_eq!(four.determinant(), BigInt::from(16));
        assert_eq!(direct_sum(std::slice::from_ref(&a1)).unwrap(), a1);
        let e8 = root_lattice(Family::E, 8).unwrap();
        let e8_3 = direct_sum(&[e8.clone(), e8.clone(), e8]).unwrap();
        assert_eq!(e8_3.rank(), 24);
        assert_eq!(e8_3.determinant(), BigInt::one());
        assert!(e8_3.is_positive_definite());
    }

    #[test]
    fn root_lattice_determinants() {
        for n in 1..8 {
            assert_eq!(root_lattice(Family::A, n).unwrap().determinant(), BigInt::from(n as i64 + 1));
        }
        for n in 4..10 {
            assert_eq!(root_lattice(Family::D, n).unwrap().determinant(), BigInt::from(4));
        }
        for (n, d) in [(6, 3), (7, 2), (8, 1)] {
            assert_eq!(root_lattice(Family::E, n).unwrap().determinant(), BigInt::from(d));
        }
    }

    #[test]
    fn discriminant_groups() {
        let a1 = root_lattice(Family::A, 1).unwrap();
        let d = discriminant_group(&a1);
        assert_eq!((d.invariant_factors.clone(), d.exponent, d.determinant), (vec![2], 2, 2));
        let four = direct_sum(&[a1.clone(), a1.clone(), a1.clone(), a1]).unwrap();
        let d = discriminant_group(&four);
        assert_eq!(d.invariant_factors, vec![2, 2, 2, 2]);
        assert_eq!(d.determinant, 16);
        let d4 = discriminant_group(&root_lattice(Family::D, 5).unwrap());
        assert_eq!(d4.invariant_factors, vec![4]);
    }

    #[test]
    fn ideal_generator_examples() {
        let a1 = root_lattice(Family::A, 1).unwrap();
        assert_eq!(ideal_generators(&a1), (2, 2));
        let four = direct_sum(&[a1.clone(), a1.clone(), a1.clone(), a1]).unwrap();
        assert_eq!(ideal_generators(&four), (2, 2));
        assert_eq!(ideal_generators(&root_lattice(Family::A, 2).unwrap()), (1, 2));
    }

    #[test]
    fn rejects_odd_or_asymmetric() {
        assert!(Lattice::from_rows(&[vec![1]]).is_err());
        assert!(Lattice::from_rows(&[vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn dual_vector_coordinates() {
        let a2 = root_lattice(Family::A, 2).unwrap();
        // fundamental weight: pairings (1, 0)
        let w = DualVector { pairing2: vec![2, 0] };
        let c = w.coords(&a2);
        assert_eq!(c[0], BigRational::new(2.into(), 3.into()));
        assert_eq!(c[1], BigRational::new(1.into(), 3.into()));
        assert_eq!(w.denominator_bound(&a2), 3);
        assert_eq!(w.norm(&a2), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn ordering_functional_signs() {
        let lex = OrderingFunctional::lexicographic();
        assert_eq!(lex.is_positive(&[0, 3, -1]), Some(true));
        assert_eq!(lex.is_positive(&[0, -3, 1]), Some(false));
        assert_eq!(lex.is_positive(&[0, 0, 0]), None);
        let w = OrderingFunctional::from_vectors(vec![vec![1, 1]]);
        assert_eq!(w.is_positive(&[-1, 2]), Some(true));
        assert_eq!(w.strict_sign(&[1, -1]), None);
    }
}
