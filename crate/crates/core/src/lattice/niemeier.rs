//! The 24-cusp atlas: Niemeier lattices as glued overlattices of their root
//! lattices, plus the Leech lattice.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::basis::{basis_mod, integer_rank};
use super::golay::{golay_basis, leech};
use super::{
    direct_sum, lll_reduce, root_lattice, short_vectors, DualVector, Family, Lattice, OrderingFunctional, VectorCollector,
};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CuspLabel {
    E8x3,
    E8D16,
    D24,
    D12x2,
    D8x3,
    D6x4,
    D4x6,
    A24,
    A12x2,
    A8x3,
    A6x4,
    A4x6,
    A3x8,
    A2x12,
    A1x24,
    E7A17,
    E7x2D10,
    E6x4,
    E6D7A11,
    A15D9,
    A9x2D6,
    A7x2D5,
    A5x4D4,
    Leech,
}

impl CuspLabel {
    pub const ALL: [CuspLabel; 24] = [
        CuspLabel::E8x3,
        CuspLabel::E8D16,
        CuspLabel::D24,
        CuspLabel::D12x2,
        CuspLabel::D8x3,
        CuspLabel::D6x4,
        CuspLabel::D4x6,
        CuspLabel::A24,
        CuspLabel::A12x2,
        CuspLabel::A8x3,
        CuspLabel::A6x4,
        CuspLabel::A4x6,
        CuspLabel::A3x8,
        CuspLabel::A2x12,
        CuspLabel::A1x24,
        CuspLabel::E7A17,
        CuspLabel::E7x2D10,
        CuspLabel::E6x4,
        CuspLabel::E6D7A11,
        CuspLabel::A15D9,
        CuspLabel::A9x2D6,
        CuspLabel::A7x2D5,
        CuspLabel::A5x4D4,
        CuspLabel::Leech,
    ];

    pub fn niemeier_labels() -> impl Iterator<Item = CuspLabel> {
        Self::ALL.into_iter().filter(|l| !l.is_leech())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CuspLabel::E8x3 => "3E8",
            CuspLabel::E8D16 => "E8+D16",
            CuspLabel::D24 => "D24",
            CuspLabel::D12x2 => "2D12",
            CuspLabel::D8x3 => "3D8",
            CuspLabel::D6x4 => "4D6",
            CuspLabel::D4x6 => "6D4",
            CuspLabel::A24 => "A24",
            CuspLabel::A12x2 => "2A12",
            CuspLabel::A8x3 => "3A8",
            CuspLabel::A6x4 => "4A6",
            CuspLabel::A4x6 => "6A4",
            CuspLabel::A3x8 => "8A3",
            CuspLabel::A2x12 => "12A2",
            CuspLabel::A1x24 => "24A1",
            CuspLabel::E7A17 => "E7+A17",
            CuspLabel::E7x2D10 => "2E7+D10",
            CuspLabel::E6x4 => "4E6",
            CuspLabel::E6D7A11 => "E6+D7+A11",
            CuspLabel::A15D9 => "A15+D9",
            CuspLabel::A9x2D6 => "2A9+D6",
            CuspLabel::A7x2D5 => "2A7+D5",
            CuspLabel::A5x4D4 => "4A5+D4",
            CuspLabel::Leech => "Leech",
        }
    }

    pub fn is_leech(self) -> bool {
        self == CuspLabel::Leech
    }

    /// Irreducible components, in the order used by the glue code.
    pub fn components(self) -> Vec<(Family, usize)> {
        use Family::{A, D, E};
        let rep = |f: Family, r: usize, k: usize| vec![(f, r); k];
        match self {
            CuspLabel::E8x3 => rep(E, 8, 3),
            CuspLabel::E8D16 => vec![(D, 16), (E, 8)],
            CuspLabel::D24 => vec![(D, 24)],
            CuspLabel::D12x2 => rep(D, 12, 2),
            CuspLabel::D8x3 => rep(D, 8, 3),
            CuspLabel::D6x4 => rep(D, 6, 4),
            CuspLabel::D4x6 => rep(D, 4, 6),
            CuspLabel::A24 => vec![(A, 24)],
            CuspLabel::A12x2 => rep(A, 12, 2),
            CuspLabel::A8x3 => rep(A, 8, 3),
            CuspLabel::A6x4 => rep(A, 6, 4),
            CuspLabel::A4x6 => rep(A, 4, 6),
            CuspLabel::A3x8 => rep(A, 3, 8),
            CuspLabel::A2x12 => rep(A, 2, 12),
            CuspLabel::A1x24 => rep(A, 1, 24),
            CuspLabel::E7A17 => vec![(A, 17), (E, 7)],
            CuspLabel::E7x2D10 => vec![(D, 10), (E, 7), (E, 7)],
            CuspLabel::E6x4 => rep(E, 6, 4),
            CuspLabel::E6D7A11 => vec![(A, 11), (D, 7), (E, 6)],
            CuspLabel::A15D9 => vec![(A, 15), (D, 9)],
            CuspLabel::A9x2D6 => vec![(A, 9), (A, 9), (D, 6)],
            CuspLabel::A7x2D5 => vec![(A, 7), (A, 7), (D, 5), (D, 5)],
            CuspLabel::A5x4D4 => vec![(A, 5), (A, 5), (A, 5), (A, 5), (D, 4)],
            CuspLabel::Leech => Vec::new(),
        }
    }

    /// Generators of the glue code: one class index per component.
    pub fn glue_generators(self) -> Vec<Vec<u8>> {
        // first entry fixed, remaining entries rotated cyclically
        let head_cyclic = |head: &[u8], tail: &[u8], foot: &[u8]| -> Vec<Vec<u8>> {
            (0..tail.len())
                .map(|s| {
                    let mut v = head.to_vec();
                    v.extend(tail[s..].iter().chain(&tail[..s]));
                    v.extend_from_slice(foot);
                    v
                })
                .collect()
        };
        match self {
            CuspLabel::E8x3 | CuspLabel::Leech => Vec::new(),
            CuspLabel::E8D16 => vec![vec![1, 0]],
            CuspLabel::D24 => vec![vec![1]],
            CuspLabel::D12x2 => vec![vec![1, 2], vec![2, 1]],
            CuspLabel::D8x3 => vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]],
            CuspLabel::D6x4 => {
                // even permutations of (0, 1, 2, 3)
                let mut out = Vec::new();
                let base = [0u8, 1, 2, 3];
                for a in 0..4 {
                    for b in 0..4 {
                        for c in 0..4 {
                            for d in 0..4 {
                                let p = [a, b, c, d];
                                let mut seen = [false; 4];
                                p.iter().for_each(|&i| seen[i] = true);
                                if seen.iter().all(|&s| s) && permutation_is_even(&p) {
                                    out.push(p.iter().map(|&i| base[i]).collect());
                                }
                            }
                        }
                    }
                }
                out
            }
            CuspLabel::D4x6 => {
                let mut g = vec![vec![1; 6]];
                g.extend(head_cyclic(&[0], &[0, 2, 3, 3, 2], &[]));
                // the glue code is linear over F4; multiplication by a cube root of unity cycles 1 -> 2 -> 3
                let rotated: Vec<Vec<u8>> =
                    g.iter().map(|w| w.iter().map(|&c| if c == 0 { 0 } else { c % 3 + 1 }).collect()).collect();
                g.extend(rotated);
                g
            }
            CuspLabel::A24 => vec![vec![5]],
            CuspLabel::A12x2 => vec![vec![1, 5]],
            CuspLabel::A8x3 => vec![vec![1, 1, 4], vec![1, 4, 1], vec![4, 1, 1]],
            CuspLabel::A6x4 => head_cyclic(&[1], &[2, 1, 6], &[]),
            CuspLabel::A4x6 => head_cyclic(&[1], &[0, 1, 4, 4, 1], &[]),
            CuspLabel::A3x8 => head_cyclic(&[3], &[2, 0, 0, 1, 0, 1, 1], &[]),
            CuspLabel::A2x12 => head_cyclic(&[2], &[1, 1, 2, 1, 1, 1, 2, 2, 2, 1, 2], &[]),
            CuspLabel::A1x24 => golay_basis().into_iter().map(|c| (0..24).map(|i| (c >> i & 1) as u8).collect()).collect(),
            CuspLabel::E7A17 => vec![vec![3, 1]],
            CuspLabel::E7x2D10 => vec![vec![1, 1, 0], vec![3, 0, 1]],
            CuspLabel::E6x4 => head_cyclic(&[1], &[0, 1, 2], &[]),
            CuspLabel::E6D7A11 => vec![vec![1, 1, 1]],
            CuspLabel::A15D9 => vec![vec![2, 1]],
            CuspLabel::A9x2D6 => vec![vec![2, 4, 0], vec![5, 0, 1], vec![0, 5, 3]],
            CuspLabel::A7x2D5 => vec![vec![1, 1, 1, 2], vec![1, 7, 2, 1]],
            CuspLabel::A5x4D4 => {
                let mut g = head_cyclic(&[2], &[0, 2, 4], &[0]);
                g.extend([vec![3, 3, 0, 0, 1], vec![3, 0, 3, 0, 2], vec![3, 0, 0, 3, 3]]);
                g
            }
        }
    }
}

fn permutation_is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

impl fmt::Display for CuspLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CuspLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = |t: &str| t.to_ascii_lowercase().replace(['_', ' '], "");
        Self::ALL
            .into_iter()
            .find(|l| norm(l.as_str()) == norm(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown cusp label {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootComponent {
    pub family: Family,
    pub rank: usize,
    pub roots: usize,
    pub coxeter: u64,
}

impl fmt::Display for RootComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Norm-2 vectors of a lattice with a positive system.
#[derive(Clone, Debug)]
pub struct RootSystemData {
    pub components: Vec<RootComponent>,
    /// Lattice coordinates of every root.
    pub all_roots: Vec<Vec<i64>>,
    /// Lattice coordinates of the positive roots.
    pub positive_roots: Vec<Vec<i64>>,
    /// Lattice coordinates of `2ρ`, the sum of the positive roots.
    pub rho2: Vec<i64>,
    pub rank: usize,
}

impl RootSystemData {
    /// Enumerates the roots of `lattice`, splits them into irreducible
    /// components and chooses the positive system that is lexicographic on
    /// pairing vectors.
    pub fn from_lattice(lattice: &Lattice) -> Result<Self> {
        let (collector, _) = short_vectors(lattice, 2, VectorCollector::default())?;
        let mut all_roots: Vec<Vec<i64>> = collector.vectors.into_iter().map(|(x, _)| x).collect();
        all_roots.sort();
        let lex = OrderingFunctional::lexicographic();
        let positive_roots: Vec<Vec<i64>> =
            all_roots.iter().filter(|x| lex.is_positive(&lattice.pairing_vector(x)) == Some(true)).cloned().collect();
        let n = positive_roots.len();
        // union-find on non-orthogonality
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut j = i;
            while p[j] != r {
                let next = p[j];
                p[j] = r;
                j = next;
            }
            r
        }
        let pairings: Vec<Vec<i64>> = positive_roots.iter().map(|x| lattice.pairing_vector(x)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let ip: i64 = pairings[i].iter().zip(&positive_roots[j]).map(|(a, b)| a * b).sum();
                if ip != 0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut components = Vec::new();
        for members in groups.values() {
            let vecs: Vec<Vec<i64>> = members.iter().map(|&i| positive_roots[i].clone()).collect();
            let rank = integer_rank(&vecs);
            components.push(classify(rank, 2 * members.len())?);
        }
        components.sort_by_key(|a| (a.family, a.rank));
        let mut rho2 = vec![0i64; lattice.rank()];
        for x in &positive_roots {
            for (r, v) in rho2.iter_mut().zip(x) {
                *r += v;
            }
        }
        Ok(RootSystemData { components, all_roots, positive_roots, rho2, rank: lattice.rank() })
    }

    /// Empty root system in a lattice of the given rank.
    pub fn empty(rank: usize) -> Self {
        RootSystemData { components: Vec::new(), all_roots: Vec::new(), positive_roots: Vec::new(), rho2: vec![0; rank], rank }
    }

    /// Common Coxeter number of all components.
    pub fn coxeter_number(&self) -> Result<u64> {
        let first =
            self.components.first().ok_or_else(|| Error::InvalidRootSystem("empty root system has no Coxeter number".into()))?;
        if let Some(c) = self.components.iter().find(|c| c.coxeter != first.coxeter) {
            return Err(Error::InvalidRootSystem(format!(
                "components {first} and {c} have Coxeter numbers {} and {}",
                first.coxeter, c.coxeter
            )));
        }
        Ok(first.coxeter)
    }

    pub fn root_count(&self) -> usize {
        self.all_roots.len()
    }

    pub fn rho(&self, lattice: &Lattice) -> DualVector {
        DualVector { pairing2: lattice.pairing_vector(&self.rho2) }
    }

    /// Ordering by `(·, 2ρ)` then lexicographic; agrees with the chosen positive system on roots.
    pub fn ordering(&self) -> OrderingFunctional {
        if self.positive_roots.is_empty() {
            OrderingFunctional::lexicographic()
        } else {
            OrderingFunctional::from_vectors(vec![self.rho2.clone()])
        }
    }

    /// Component label like `4A5+D4` (components grouped by type).
    pub fn type_string(&self) -> String {
        let mut parts: Vec<(String, usize)> = Vec::new();
        for c in &self.components {
            let name = c.to_string();
            match parts.iter_mut().find(|(n, _)| *n == name) {
                Some((_, k)) => *k += 1,
                None => parts.push((name, 1)),
            }
        }
        parts.into_iter().map(|(n, k)| if k == 1 { n } else { format!("{k}{n}") }).collect::<Vec<_>>().join("+")
    }
}

fn classify(rank: usize, roots: usize) -> Result<RootComponent> {
    let candidates = [
        (Family::A, rank * (rank + 1)),
        (Family::D, if rank >= 4 { 2 * rank * (rank - 1) } else { 0 }),
        (
            Family::E,
            match rank {
                6 => 72,
                7 => 126,
                8 => 240,
                _ => 0,
            },
        ),
    ];
    let family = candidates
        .iter()
        .find(|(_, n)| *n == roots)
        .map(|(f, _)| *f)
        .ok_or_else(|| Error::InvalidRootSystem(format!("no ADE type of rank {rank} with {roots} roots")))?;
    Ok(RootComponent { family, rank, roots, coxeter: (roots / rank) as u64 })
}

/// Glue class `class` of a component as an index into its fundamental weights.
fn glue_weight(family: Family, rank: usize, class: u8) -> Result<Option<usize>> {
    let c = class as usize;
    if c == 0 {
        return Ok(None);
    }
    let idx = match (family, rank) {
        (Family::A, n) if c <= n => c - 1,
        (Family::D, n) => match c {
            1 => n - 1,
            2 => 0,
            3 => n - 2,
            _ => return Err(Error::InvalidRootSystem(format!("D{n} glue class {c}"))),
        },
        (Family::E, 6) if c <= 2 => [0, 5][c - 1],
        (Family::E, 7) if c == 1 => 6,
        _ => return Err(Error::InvalidRootSystem(format!("{family}{rank} glue class {c}"))),
    };
    Ok(Some(idx))
}

/// Niemeier lattice with root system `label`, reduced by LLL, with its roots.
pub fn niemeier(label: CuspLabel) -> Result<(Lattice, RootSystemData)> {
    if label.is_leech() {
        return Err(Error::InvalidArgument("the Leech lattice has no root system; use leech()".into()));
    }
    let comps = label.components();
    let parts: Vec<Lattice> = comps.iter().map(|&(f, r)| root_lattice(f, r)).collect::<Result<_>>()?;
    let root_sum = direct_sum(&parts)?;
    let n = root_sum.rank();
    let denom: i64 = parts.iter().fold(1i64, |acc, p| acc.lcm(&p.determinant().to_i64().unwrap_or(1)));

    // fundamental weights (rows of the inverse Cartan matrix) scaled by `denom`
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = denom;
        gens.push(e);
    }
    for glue in label.glue_generators() {
        if glue.len() != comps.len() {
            return Err(Error::InvalidRootSystem(format!("{label}: glue word of wrong length")));
        }
        let mut row = vec![0i64; n];
        let mut off = 0;
        for (k, (&(f, r), part)) in comps.iter().zip(&parts).enumerate() {
            if let Some(w) = glue_weight(f, r, glue[k])? {
                let inv = part.inverse();
                for j in 0..r {
                    let v = &inv[w * r + j] * num_rational::BigRational::from_integer(denom.into());
                    if !v.is_integer() {
                        return Err(Error::InvalidRootSystem("weight denominator exceeds bound".into()));
                    }
                    row[off + j] = v.to_integer().to_i64().expect("small weight coordinate");
                }
            }
            off += r;
        }
        gens.push(row);
    }
    let basis = basis_mod(&gens, n, denom);
    let d2 = denom * denom;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        let bi = root_sum.pairing_vector(&basis[i]);
        for j in 0..n {
            let v: i64 = bi.iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
            if v % d2 != 0 {
                return Err(Error::InvalidLattice(format!("{label}: glue is not integral")));
            }
            rows[i][j] = v / d2;
        }
    }
    let raw = Lattice::from_rows(&rows).map_err(|e| Error::InvalidLattice(format!("{label}: {e}")))?;
    let (lattice, _) = lll_reduce(&raw)?;
    if lattice.determinant() != 1.into() {
        return Err(Error::InvalidLattice(format!("{label}: determinant {} (glue incomplete)", lattice.determinant())));
    }
    let roots = RootSystemData::from_lattice(&lattice)?;
    let mut expected: Vec<(Family, usize)> = comps.clone();
    expected.sort();
    let found: Vec<(Family, usize)> = roots.components.iter().map(|c| (c.family, c.rank)).collect();
    if found != expected {
        return Err(Error::InvalidLattice(format!(
            "{label}: root system of the overlattice is {} (glue adds roots)",
            roots.type_string()
        )));
    }
    roots.coxeter_number()?;
    Ok((lattice, roots))
}

/// Lattice and root data for any cusp (empty roots for Leech).
pub fn cusp_lattice(label: CuspLabel) -> Result<(Lattice, RootSystemData)> {
    if label.is_leech() {
        Ok((leech()?, RootSystemData::empty(24)))
    } else {
        niemeier(label)
    }
}
