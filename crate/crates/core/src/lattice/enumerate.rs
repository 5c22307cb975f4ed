//! Fincke–Pohst enumeration of short lattice vectors.
//!
//! The quadratic-form decomposition lives in `f64` and is used with a small
//! slack only to bound the search; every emitted vector is filtered on its
//! exact integer norm, computed from the incrementally maintained pairing
//! vector `G x`. The enumeration tree is split below the top levels and the
//! subtrees run on the rayon pool; sinks are merged afterwards, so any
//! commutative sink gives identical results for any number of workers.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::Lattice;
use crate::error::{Error, Result};

/// How a sink wants `±x` pairs delivered.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PairConvention {
    /// Every nonzero vector is visited.
    Full,
    /// Only the representative whose first nonzero coordinate (from the top
    /// index down) is positive is visited; the sink accounts for `-x`.
    Half,
}

pub trait EnumerationSink: Send + Sync + Sized {
    fn convention(&self) -> PairConvention;
    /// `x` in lattice coordinates, `pairing = G x`, `norm = (x, x) > 0`.
    fn visit(&mut self, x: &[i64], pairing: &[i64], norm: i64);
    fn visit_zero(&mut self);
    fn fork(&self) -> Self;
    fn merge(&mut self, other: Self);
}

#[derive(Clone, Debug, Default)]
pub struct EnumBudget {
    pub max_nodes: Option<u64>,
    pub max_vectors: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumStats {
    pub nodes: u64,
    pub vectors: u64,
    pub max_norm: i64,
}

/// Norm histogram.
#[derive(Clone, Debug, Default)]
pub struct CountByNorm {
    pub counts: BTreeMap<i64, u64>,
}

impl EnumerationSink for CountByNorm {
    fn convention(&self) -> PairConvention {
        PairConvention::Half
    }
    fn visit(&mut self, _x: &[i64], _p: &[i64], norm: i64) {
        *self.counts.entry(norm).or_default() += 2;
    }
    fn visit_zero(&mut self) {
        *self.counts.entry(0).or_default() += 1;
    }
    fn fork(&self) -> Self {
        CountByNorm::default()
    }
    fn merge(&mut self, other: Self) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
    }
}

/// Collects all vectors (both signs) in lattice coordinates.
#[derive(Clone, Debug, Default)]
pub struct VectorCollector {
    pub vectors: Vec<(Vec<i64>, i64)>,
}

impl EnumerationSink for VectorCollector {
    fn convention(&self) -> PairConvention {
        PairConvention::Full
    }
    fn visit(&mut self, x: &[i64], _p: &[i64], norm: i64) {
        self.vectors.push((x.to_vec(), norm));
    }
    fn visit_zero(&mut self) {}
    fn fork(&self) -> Self {
        VectorCollector::default()
    }
    fn merge(&mut self, other: Self) {
        self.vectors.extend(other.vectors);
    }
}

/// Counts vectors by `(norm, key)` where the key is either the full pairing
/// vector `G x` or its projection `((x, u_1), …, (x, u_k))`.
#[derive(Clone, Debug, Default)]
pub struct PairingTally {
    pub projection: Option<Vec<Vec<i64>>>,
    pub counts: HashMap<(i64, Vec<i64>), u64>,
}

impl PairingTally {
    pub fn full() -> Self {
        PairingTally { projection: None, counts: HashMap::new() }
    }

    /// `vectors` are lattice coordinates of `u_1, …, u_k`.
    pub fn projected(vectors: Vec<Vec<i64>>) -> Self {
        PairingTally { projection: Some(vectors), counts: HashMap::new() }
    }

    fn key(&self, pairing: &[i64]) -> Vec<i64> {
        match &self.projection {
            None => pairing.to_vec(),
            Some(us) => us.iter().map(|u| u.iter().zip(pairing).map(|(a, b)| a * b).sum()).collect(),
        }
    }

    /// Sorted `(norm, key, count)` triples.
    pub fn sorted(&self) -> Vec<(i64, Vec<i64>, u64)> {
        let mut v: Vec<_> = self.counts.iter().map(|((n, k), c)| (*n, k.clone(), *c)).collect();
        v.sort();
        v
    }

    pub fn key_len(&self, rank: usize) -> usize {
        self.projection.as_ref().map_or(rank, Vec::len)
    }
}

impl EnumerationSink for PairingTally {
    fn convention(&self) -> PairConvention {
        PairConvention::Half
    }
    fn visit(&mut self, _x: &[i64], pairing: &[i64], norm: i64) {
        let k = self.key(pairing);
        let neg: Vec<i64> = k.iter().map(|v| -v).collect();
        *self.counts.entry((norm, k)).or_default() += 1;
        *self.counts.entry((norm, neg)).or_default() += 1;
    }
    fn visit_zero(&mut self) {
        let len = self.projection.as_ref().map(Vec::len);
        let k = match len {
            Some(l) => vec![0; l],
            None => Vec::new(),
        };
        // the full-key zero vector length is fixed by the caller through `fix_zero_key`
        *self.counts.entry((0, k)).or_default() += 1;
    }
    fn fork(&self) -> Self {
        PairingTally { projection: self.projection.clone(), counts: HashMap::new() }
    }
    fn merge(&mut self, other: Self) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
    }
}

impl PairingTally {
    pub(crate) fn fix_zero_key(&mut self, rank: usize) {
        if self.projection.is_none() {
            if let Some(c) = self.counts.remove(&(0, Vec::new())) {
                *self.counts.entry((0, vec![0; rank])).or_default() += c;
            }
        }
    }
}

pub fn short_vectors<S: EnumerationSink>(lattice: &Lattice, max_norm: i64, sink: S) -> Result<(S, EnumStats)> {
    short_vectors_with(lattice, max_norm, sink, &EnumBudget::default())
}

pub fn short_vectors_with<S: EnumerationSink>(
    lattice: &Lattice,
    max_norm: i64,
    mut sink: S,
    budget: &EnumBudget,
) -> Result<(S, EnumStats)> {
    if max_norm < 0 {
        return Err(Error::InvalidArgument(format!("negative norm bound {max_norm}")));
    }
    if lattice.is_even() && max_norm % 2 != 0 {
        return Err(Error::InvalidArgument(format!("odd norm bound {max_norm} for an even lattice")));
    }
    let en = Enumerator::new(lattice, max_norm, sink.convention() == PairConvention::Half, budget)?;
    sink.visit_zero();
    let n = en.n;
    let split = n.min(3);
    let mut prefixes = Vec::new();
    {
        let mut x = vec![0i64; n];
        en.collect_prefixes(n - 1, n - split, &mut x, 0.0, true, &mut prefixes);
    }
    let results: Vec<Result<(S, u64, u64)>> = prefixes
        .par_iter()
        .map(|(top, partial, all_zero)| {
            let mut local = sink.fork();
            let mut x = vec![0i64; n];
            x[n - split..].copy_from_slice(top);
            let mut y = lattice.pairing_vector(&x);
            let mut counters = Counters::default();
            if split == n {
                if !*all_zero {
                    en.leaf(&x, &y, &mut local, &mut counters);
                }
            } else {
                en.recurse(n - split - 1, &mut x, &mut y, *partial, *all_zero, &mut local, &mut counters);
            }
            en.flush(&mut counters);
            if en.exceeded.load(Ordering::Relaxed) {
                return Err(Error::BudgetExceeded(format!("enumeration to norm {max_norm} exceeded budget {:?}", budget)));
            }
            Ok((local, counters.total_nodes, counters.total_vectors))
        })
        .collect();
    let mut stats = EnumStats { max_norm, ..Default::default() };
    for r in results {
        let (local, nodes, vectors) = r?;
        sink.merge(local);
        stats.nodes += nodes;
        stats.vectors += vectors;
    }
    Ok((sink, stats))
}

#[derive(Default)]
struct Counters {
    nodes: u64,
    vectors: u64,
    total_nodes: u64,
    total_vectors: u64,
}

struct Enumerator<'a> {
    n: usize,
    lattice: &'a Lattice,
    /// upper-triangular form: diagonal in `qd`, off-diagonal `q[i][j]`, `j > i`
    q: Vec<Vec<f64>>,
    qd: Vec<f64>,
    bound: f64,
    max_norm: i64,
    half: bool,
    budget: EnumBudget,
    nodes: AtomicU64,
    vectors: AtomicU64,
    exceeded: AtomicBool,
}

impl<'a> Enumerator<'a> {
    fn new(lattice: &'a Lattice, max_norm: i64, half: bool, budget: &EnumBudget) -> Result<Self> {
        let n = lattice.rank();
        // Q(x) = sum_i qd_i (x_i + sum_{j>i} q_ij x_j)^2
        let mut a: Vec<Vec<f64>> = lattice.rows().iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                a[j][i] = a[i][j];
                a[i][j] /= a[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    a[k][l] -= a[k][i] * a[i][l];
                }
            }
            if a[i][i] <= 0.0 {
                return Err(Error::InvalidLattice("Gram matrix is not positive definite".into()));
            }
        }
        let qd: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        let q = a;
        let bound = max_norm as f64 + 1e-6 * (1.0 + max_norm as f64);
        Ok(Enumerator {
            n,
            lattice,
            q,
            qd,
            bound,
            max_norm,
            half,
            budget: budget.clone(),
            nodes: AtomicU64::new(0),
            vectors: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
        })
    }

    fn range(&self, level: usize, x: &[i64], partial: f64, all_zero: bool) -> Option<(i64, i64, f64)> {
        let rem = self.bound - partial;
        if rem < 0.0 {
            return None;
        }
        let c: f64 = -(level + 1..self.n).map(|j| self.q[level][j] * x[j] as f64).sum::<f64>();
        let r = (rem / self.qd[level]).sqrt();
        let mut lo = (c - r - 1e-9).ceil() as i64;
        let hi = (c + r + 1e-9).floor() as i64;
        if self.half && all_zero {
            lo = lo.max(0);
        }
        (lo <= hi).then_some((lo, hi, c))
    }

    fn collect_prefixes(
        &self,
        level: usize,
        stop: usize,
        x: &mut Vec<i64>,
        partial: f64,
        all_zero: bool,
        out: &mut Vec<(Vec<i64>, f64, bool)>,
    ) {
        let Some((lo, hi, c)) = self.range(level, x, partial, all_zero) else { return };
        for v in lo..=hi {
            let p = partial + self.qd[level] * (v as f64 - c).powi(2);
            if p > self.bound {
                continue;
            }
            x[level] = v;
            let az = all_zero && v == 0;
            if level == stop {
                out.push((x[stop..].to_vec(), p, az));
            } else {
                self.collect_prefixes(level - 1, stop, x, p, az, out);
            }
        }
        x[level] = 0;
    }

    fn set(&self, level: usize, v: i64, x: &mut [i64], y: &mut [i64]) {
        let d = v - x[level];
        if d != 0 {
            let n = self.n;
            let g = self.lattice.gram_flat();
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += d * g[k * n + level];
            }
            x[level] = v;
        }
    }

    fn leaf<S: EnumerationSink>(&self, x: &[i64], y: &[i64], sink: &mut S, c: &mut Counters) {
        let norm: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        if norm > 0 && norm <= self.max_norm {
            c.vectors += 1;
            sink.visit(x, y, norm);
        }
    }

    fn flush(&self, c: &mut Counters) {
        let nodes = self.nodes.fetch_add(c.nodes, Ordering::Relaxed) + c.nodes;
        let vecs = self.vectors.fetch_add(c.vectors, Ordering::Relaxed) + c.vectors;
        c.total_nodes += c.nodes;
        c.total_vectors += c.vectors;
        c.nodes = 0;
        c.vectors = 0;
        if self.budget.max_nodes.is_some_and(|m| nodes > m) || self.budget.max_vectors.is_some_and(|m| vecs > m) {
            self.exceeded.store(true, Ordering::Relaxed);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<S: EnumerationSink>(
        &self,
        level: usize,
        x: &mut [i64],
        y: &mut [i64],
        partial: f64,
        all_zero: bool,
        sink: &mut S,
        counters: &mut Counters,
    ) {
        if self.exceeded.load(Ordering::Relaxed) {
            return;
        }
        counters.nodes += 1;
        if counters.nodes >= 1 << 14 {
            self.flush(counters);
        }
        let Some((lo, hi, c)) = self.range(level, x, partial, all_zero) else { return };
        for v in lo..=hi {
            let p = partial + self.qd[level] * (v as f64 - c).powi(2);
            if p > self.bound {
                continue;
            }
            self.set(level, v, x, y);
            let az = all_zero && v == 0;
            if level == 0 {
                if !az {
                    self.leaf(x, y, sink, counters);
                }
            } else {
                self.recurse(level - 1, x, y, p, az, sink, counters);
            }
        }
        self.set(level, 0, x, y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{direct_sum, root_lattice, Family};

    /// Independent oracle: every coordinate vector in a box.
    fn brute_force(l: &Lattice, max_norm: i64, radius: i64) -> BTreeMap<i64, u64> {
        let n = l.rank();
        let mut counts = BTreeMap::new();
        let mut x = vec![-radius; n];
        loop {
            let nv = l.norm(&x);
            if nv <= max_norm {
                *counts.entry(nv).or_insert(0) += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return counts;
                }
                x[i] += 1;
                if x[i] > radius {
                    x[i] = -radius;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn a1_roots() {
        let a1 = root_lattice(Family::A, 1).unwrap();
        let (s, _) = short_vectors(&a1, 2, CountByNorm::default()).unwrap();
        assert_eq!(s.counts.get(&2), Some(&2));
        assert_eq!(s.counts.get(&0), Some(&1));
    }

    #[test]
    fn e8_roots_match_box_search() {
        let e8 = root_lattice(Family::E, 8).unwrap();
        let (s, _) = short_vectors(&e8, 2, CountByNorm::default()).unwrap();
        assert_eq!(s.counts.get(&2), Some(&240));
        // simple-root coordinates of E8 roots are bounded by the highest root (max coefficient 6)
        let (full, _) = short_vectors(&e8, 2, VectorCollector::default()).unwrap();
        assert_eq!(full.vectors.len(), 240);
        assert!(full.vectors.iter().all(|(x, _)| x.iter().all(|c| c.abs() <= 6)));
    }

    #[test]
    fn rejects_odd_bound() {
        let a1 = root_lattice(Family::A, 1).unwrap();
        assert!(short_vectors(&a1, 3, CountByNorm::default()).is_err());
    }

    #[test]
    fn small_lattices_match_brute_force() {
        let a1 = root_lattice(Family::A, 1).unwrap();
        let cases = vec![
            root_lattice(Family::A, 2).unwrap(),
            root_lattice(Family::A, 3).unwrap(),
            root_lattice(Family::D, 4).unwrap(),
            direct_sum(&[a1.clone(), a1.clone(), a1.clone(), a1.clone()]).unwrap(),
            direct_sum(&[root_lattice(Family::A, 2).unwrap(), a1]).unwrap(),
        ];
        for l in cases {
            for max in [2, 4, 6, 8] {
                let (s, _) = short_vectors(&l, max, CountByNorm::default()).unwrap();
                assert_eq!(s.counts, brute_force(&l, max, 6), "{l:?} norm {max}");
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let e8 = root_lattice(Family::E, 8).unwrap();
        let budget = EnumBudget { max_nodes: Some(10), max_vectors: None };
        let r = short_vectors_with(&e8, 8, CountByNorm::default(), &budget);
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn tally_symmetric_under_negation() {
        let d4 = root_lattice(Family::D, 4).unwrap();
        let (t, _) = short_vectors(&d4, 4, PairingTally::full()).unwrap();
        for ((n, k), c) in &t.counts {
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            assert_eq!(t.counts.get(&(*n, neg)), Some(c));
        }
    }
}
