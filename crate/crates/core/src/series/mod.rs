//! Sparse truncated Fourier series in `q`, `r^ℓ` and `s`.
//!
//! Exponents of `q` and `s` are stored multiplied by 24. The `r`-exponent is
//! stored doubled, either as the full pairing vector `2(ℓ, e_i)` or, for a
//! specialized context, as the doubled pairings `2(ℓ, u_j)`.
//!
//! Every series carries the region of exponents on which its coefficients are
//! known exactly (its [`Precision`]). The region is slanted: a key is known
//! when `s24 <= s_max24` and `q24 + slope * s24 <= grade_max`. A positive
//! slope lets factors like `(1 - q^{-1} s)` be multiplied without loss.

mod json;
mod modular;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::scalar::Coefficient;

pub use json::{SeriesJson, TermJson};
pub use modular::{delta, delta_inverse, eta, eta_power};

pub type Ell = SmallVec<[i64; 4]>;

/// Exponent triple. Field order gives the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub s24: i64,
    pub q24: i64,
    pub ell2: Ell,
}

impl Key {
    pub fn new(q24: i64, ell2: &[i64], s24: i64) -> Self {
        Key { s24, q24, ell2: Ell::from_slice(ell2) }
    }

    pub fn scalar(q24: i64, s24: i64, dim: usize) -> Self {
        Key { s24, q24, ell2: smallvec::smallvec![0; dim] }
    }

    pub fn add(&self, other: &Key) -> Key {
        Key {
            s24: self.s24 + other.s24,
            q24: self.q24 + other.q24,
            ell2: self.ell2.iter().zip(&other.ell2).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Key) -> Key {
        Key {
            s24: self.s24 - other.s24,
            q24: self.q24 - other.q24,
            ell2: self.ell2.iter().zip(&other.ell2).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Key {
        Key { s24: self.s24 * k, q24: self.q24 * k, ell2: self.ell2.iter().map(|a| a * k).collect() }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({}/24) r^({:?}/2) s^({}/24)", self.q24, self.ell2.as_slice(), self.s24)
    }
}

/// User-facing truncation: keep `s <= s_max` and, on the slice `s = s_max`,
/// `q <= q_max`; lower slices keep `slope` more powers of `q` per unit of `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub q_max24: i64,
    pub s_max24: Option<i64>,
    pub slope: i64,
    /// Lattice vectors `u_j` (coordinates) for `r^ℓ ↦ ∏ ζ_j^{(ℓ, u_j)}`.
    pub specialization: Option<Vec<Vec<i64>>>,
}

impl TruncationPolicy {
    /// `q <= q_max` with no `s` variable.
    pub fn q_only(q_max: i64) -> Self {
        TruncationPolicy { q_max24: 24 * q_max, s_max24: None, slope: 0, specialization: None }
    }

    pub fn with_specialization(mut self, u: Vec<Vec<i64>>) -> Self {
        self.specialization = Some(u);
        self
    }

    /// Largest grade `q24 + slope * s24` retained.
    pub fn grade_bound(&self) -> i64 {
        self.q_max24 + self.slope * self.s_max24.unwrap_or(0)
    }

    pub fn precision(&self) -> Precision {
        Precision { s_max24: self.s_max24, grade_max: Some(self.grade_bound()), slope: self.slope, s_floor: 0 }
    }

    /// Precision of an `s`-free factor (a Jacobi form) entering a product with this policy.
    pub fn jacobi_precision(&self) -> Precision {
        Precision { s_max24: None, grade_max: Some(self.grade_bound()), slope: self.slope, s_floor: 0 }
    }
}

/// Region of exactly known coefficients. `None` bounds are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub s_max24: Option<i64>,
    pub grade_max: Option<i64>,
    pub slope: i64,
    /// Lower bound on the `s`-exponents of the true series.
    pub s_floor: i64,
}

fn opt_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Precision {
    pub fn exact() -> Self {
        Precision { s_max24: None, grade_max: None, slope: 0, s_floor: 0 }
    }

    pub fn q_bound(q_max24: i64) -> Self {
        Precision { s_max24: None, grade_max: Some(q_max24), slope: 0, s_floor: 0 }
    }

    pub fn grade(&self, key: &Key) -> i64 {
        key.q24 + self.slope * key.s24
    }

    pub fn contains(&self, key: &Key) -> bool {
        self.s_max24.is_none_or(|s| key.s24 <= s) && self.grade_max.is_none_or(|g| self.grade(key) <= g)
    }

    pub fn intersect(&self, other: &Precision) -> Precision {
        Precision {
            s_max24: opt_min(self.s_max24, other.s_max24),
            grade_max: opt_min(self.grade_max, other.grade_max),
            slope: self.slope,
            s_floor: self.s_floor.min(other.s_floor),
        }
    }

    fn is_slope_free(&self) -> bool {
        self.s_max24.is_none() && self.grade_max.is_none()
    }
}

/// The lattice and, optionally, the specialization vectors defining `r`-exponents.
#[derive(Clone, Debug)]
pub struct Context {
    pub lattice: Lattice,
    pub specialization: Option<Vec<Vec<i64>>>,
    digest: String,
}

impl Context {
    pub fn new(lattice: Lattice, specialization: Option<Vec<Vec<i64>>>) -> Arc<Self> {
        let mut digest = lattice.digest();
        if let Some(u) = &specialization {
            digest.push_str(&format!("|{u:?}"));
        }
        Arc::new(Context { lattice, specialization, digest })
    }

    pub fn full(lattice: &Lattice) -> Arc<Self> {
        Self::new(lattice.clone(), None)
    }

    pub fn dim(&self) -> usize {
        self.specialization.as_ref().map_or(self.lattice.rank(), Vec::len)
    }

    pub fn same(&self, other: &Context) -> bool {
        self.digest == other.digest
    }

    /// Doubled exponent key of the dual vector with doubled pairing vector `p`.
    pub fn ell_of(&self, pairing2: &[i64]) -> Ell {
        match &self.specialization {
            None => Ell::from_slice(pairing2),
            Some(us) => us.iter().map(|u| u.iter().zip(pairing2).map(|(a, b)| a * b).sum()).collect(),
        }
    }
}

/// Sparse truncated series with coefficients in `C`.
#[derive(Clone, Debug)]
pub struct MultiSeries<C> {
    ctx: Option<Arc<Context>>,
    precision: Precision,
    terms: HashMap<Key, C>,
}

impl<C: Coefficient> PartialEq for MultiSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.precision == other.precision && self.terms == other.terms && self.same_context(other)
    }
}

impl<C: Coefficient> MultiSeries<C> {
    pub fn zero(ctx: Option<Arc<Context>>, precision: Precision) -> Self {
        MultiSeries { ctx, precision, terms: HashMap::new() }
    }

    pub fn one(ctx: Option<Arc<Context>>) -> Self {
        Self::monomial(ctx, 0, &[], 0, C::one())
    }

    /// Exact monomial `c q^{q24/24} r^{ell2/2} s^{s24/24}`; an empty `ell2` means `ℓ = 0`.
    pub fn monomial(ctx: Option<Arc<Context>>, q24: i64, ell2: &[i64], s24: i64, c: C) -> Self {
        let dim = ctx.as_ref().map_or(0, |c| c.dim());
        let mut key = Key::scalar(q24, s24, dim);
        if !ell2.is_empty() {
            key.ell2 = Ell::from_slice(ell2);
        }
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        MultiSeries { ctx, precision: Precision { s_floor: s24, ..Precision::exact() }, terms }
    }

    pub fn from_terms(ctx: Option<Arc<Context>>, precision: Precision, terms: impl IntoIterator<Item = (Key, C)>) -> Self {
        let mut s = Self::zero(ctx, precision);
        for (k, c) in terms {
            s.add_term(k, &c);
        }
        s
    }

    pub fn context(&self) -> Option<&Arc<Context>> {
        self.ctx.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.ctx.as_ref().map_or(0, |c| c.dim())
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.terms.iter()
    }

    /// Terms sorted by key.
    pub fn sorted_terms(&self) -> Vec<(&Key, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn into_terms(self) -> HashMap<Key, C> {
        self.terms
    }

    /// Adds `c` at `key` if the key lies in the known region.
    pub fn add_term(&mut self, key: Key, c: &C) {
        if c.is_zero() || !self.precision.contains(&key) {
            return;
        }
        match self.terms.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn same_context(&self, other: &Self) -> bool {
        match (&self.ctx, &other.ctx) {
            (Some(a), Some(b)) => a.same(b),
            _ => true,
        }
    }

    fn joint_context(&self, other: &Self) -> Result<Option<Arc<Context>>> {
        match (&self.ctx, &other.ctx) {
            (Some(a), Some(b)) if !a.same(b) => {
                Err(Error::ContextMismatch(format!("rank {} vs rank {} (or different specialization)", a.dim(), b.dim())))
            }
            (Some(a), _) => Ok(Some(a.clone())),
            (None, b) => Ok(b.clone()),
        }
    }

    /// Embeds a scalar (`r`-free) series into a lattice context.
    pub fn with_context(mut self, ctx: Arc<Context>) -> Result<Self> {
        if let Some(c) = &self.ctx {
            if !c.same(&ctx) {
                return Err(Error::ContextMismatch("series already has a different context".into()));
            }
            return Ok(self);
        }
        let dim = ctx.dim();
        self.terms = self
            .terms
            .into_iter()
            .map(|(mut k, c)| {
                if k.ell2.is_empty() {
                    k.ell2 = smallvec::smallvec![0; dim];
                }
                (k, c)
            })
            .collect();
        self.ctx = Some(ctx);
        Ok(self)
    }

    /// Re-expresses the known region with another slope. Only possible when
    /// the region has no `s` bound and all terms sit on one `s`-slice.
    pub fn with_slope(mut self, slope: i64) -> Result<Self> {
        if self.precision.slope == slope || self.precision.is_slope_free() {
            self.precision.slope = slope;
            return Ok(self);
        }
        if self.precision.s_max24.is_some() {
            return Err(Error::ContextMismatch(format!(
                "cannot change slope {} to {slope} on an s-bounded series",
                self.precision.slope
            )));
        }
        let slices: std::collections::BTreeSet<i64> = self.terms.keys().map(|k| k.s24).collect();
        let s0 = match slices.len() {
            0 => self.precision.s_floor,
            1 => *slices.iter().next().unwrap(),
            _ => return Err(Error::ContextMismatch("cannot change slope on a series with several s-slices".into())),
        };
        if s0 != self.precision.s_floor {
            return Err(Error::ContextMismatch("cannot change slope: s-slice differs from s floor".into()));
        }
        let old = self.precision.slope;
        self.precision.grade_max = self.precision.grade_max.map(|g| g - old * s0 + slope * s0);
        self.precision.slope = slope;
        Ok(self)
    }

    fn aligned_precisions(&self, other: &Self) -> Result<(Self, Self)> {
        let (a, b) = (self.precision, other.precision);
        if a.slope == b.slope || a.is_slope_free() || b.is_slope_free() {
            let slope = if a.is_slope_free() { b.slope } else { a.slope };
            return Ok((self.clone().with_slope(slope)?, other.clone().with_slope(slope)?));
        }
        if a.s_max24.is_none() {
            return Ok((self.clone().with_slope(b.slope)?, other.clone()));
        }
        Ok((self.clone(), other.clone().with_slope(a.slope)?))
    }

    /// Declares that the true series has no terms with `s24 < floor`
    /// (for instance after cancelling a constant term). Checked on stored terms.
    pub fn assume_s_floor(mut self, floor: i64) -> Result<Self> {
        if let Some(k) = self.terms.keys().find(|k| k.s24 < floor) {
            return Err(Error::Valuation(format!("stored term {k} lies below s24 = {floor}")));
        }
        self.precision.s_floor = floor;
        Ok(self)
    }

    /// Restricts the known region (dropping terms outside).
    pub fn truncate(&self, precision: &Precision) -> Result<Self> {
        let mut p = *precision;
        p.s_floor = self.precision.s_floor;
        let me = self.clone().with_slope(precision.slope)?;
        let p = me.precision.intersect(&p);
        let terms = me.terms.into_iter().filter(|(k, _)| p.contains(k)).collect();
        Ok(MultiSeries { ctx: me.ctx, precision: p, terms })
    }

    pub fn truncate_to(&self, policy: &TruncationPolicy) -> Result<Self> {
        self.truncate(&policy.precision())
    }

    /// Minimal grade over stored terms.
    pub fn grade_valuation(&self) -> Option<i64> {
        self.terms.keys().map(|k| self.precision.grade(k)).min()
    }

    pub fn q_valuation(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.q24).min()
    }

    pub fn s_valuation(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.s24).min()
    }

    /// Lower bound for the grade of every term of the true series.
    fn grade_floor(&self) -> Option<i64> {
        let stored = self.grade_valuation();
        match (stored, self.precision.grade_max) {
            (Some(v), Some(g)) => Some(v.min(g + 1)),
            (Some(v), None) => Some(v),
            (None, Some(g)) => Some(g + 1),
            (None, None) => None,
        }
    }

    /// Exact lookup; errors when the key is outside the known region.
    pub fn coefficient(&self, key: &Key) -> Result<C> {
        if key.ell2.len() != self.dim() && !(key.ell2.is_empty() && self.dim() == 0) {
            return Err(Error::ContextMismatch(format!(
                "key of dimension {} for a series of dimension {}",
                key.ell2.len(),
                self.dim()
            )));
        }
        if !self.precision.contains(key) {
            return Err(Error::OutsideTruncation(format!("{key} is outside {:?}", self.precision)));
        }
        Ok(self.terms.get(key).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient at `q^{q24/24} s^{s24/24}` with `ℓ = 0`.
    pub fn coefficient_qs(&self, q24: i64, s24: i64) -> Result<C> {
        self.coefficient(&Key::scalar(q24, s24, self.dim()))
    }

    /// The sub-series at a fixed `s`-exponent, as an `s`-free series
    /// (its `q`-precision is the precision on that slice).
    pub fn fj_slice(&self, s24: i64) -> Result<Self> {
        if self.precision.s_max24.is_some_and(|s| s24 > s) {
            return Err(Error::OutsideTruncation(format!("slice s24 = {s24} beyond {:?}", self.precision.s_max24)));
        }
        let q_max = self.precision.grade_max.map(|g| g - self.precision.slope * s24);
        let terms =
            self.terms.iter().filter(|(k, _)| k.s24 == s24).map(|(k, c)| (Key { s24: 0, ..k.clone() }, c.clone())).collect();
        Ok(MultiSeries {
            ctx: self.ctx.clone(),
            precision: Precision { s_max24: None, grade_max: q_max, slope: 0, s_floor: 0 },
            terms,
        })
    }

    /// Multiplies by the exact monomial `q^{dq} r^{dℓ} s^{ds}` (shifting keys and region).
    pub fn shift(&self, dq24: i64, dell2: &[i64], ds24: i64) -> Self {
        let mut d = Key::scalar(dq24, ds24, self.dim());
        if !dell2.is_empty() {
            d.ell2 = Ell::from_slice(dell2);
        }
        let p = &self.precision;
        let precision = Precision {
            s_max24: p.s_max24.map(|s| s + ds24),
            grade_max: p.grade_max.map(|g| g + dq24 + p.slope * ds24),
            slope: p.slope,
            s_floor: p.s_floor + ds24,
        };
        MultiSeries { ctx: self.ctx.clone(), precision, terms: self.terms.iter().map(|(k, c)| (k.add(&d), c.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        MultiSeries {
            ctx: self.ctx.clone(),
            precision: self.precision,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.ctx.clone(), self.precision);
        if !c.is_zero() {
            for (k, v) in &self.terms {
                out.terms.insert(k.clone(), v.mul_ref(c));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let ctx = self.joint_context(other)?;
        let (a, b) = self.aligned_precisions(other)?;
        let a = match &ctx {
            Some(c) => a.with_context(c.clone())?,
            None => a,
        };
        let b = match &ctx {
            Some(c) => b.with_context(c.clone())?,
            None => b,
        };
        let precision = a.precision.intersect(&b.precision);
        let mut out = MultiSeries::zero(ctx, precision);
        for (k, c) in a.terms.into_iter().chain(b.terms) {
            out.add_term(k, &c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Converts coefficients into another ring; fails if one is not representable.
    pub fn convert<D: Coefficient>(&self) -> Result<MultiSeries<D>> {
        let mut terms = HashMap::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let r = c.to_rational();
            let num = D::from_bigint(r.numer().clone());
            let den = D::from_bigint(r.denom().clone());
            let v = num
                .div_exact(&den)
                .ok_or_else(|| Error::NonDivisible(format!("coefficient {r} at {k} is not in the target ring")))?;
            terms.insert(k.clone(), v);
        }
        Ok(MultiSeries { ctx: self.ctx.clone(), precision: self.precision, terms })
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Coefficient::is_integral)
    }

    /// Ring homomorphism `r^ℓ ↦ ∏ ζ_j^{(ℓ, u_j)}` on a full (unspecialized) series.
    pub fn specialize(&self, u: &[Vec<i64>]) -> Result<Self> {
        let Some(ctx) = &self.ctx else {
            return Ok(self.clone());
        };
        if ctx.specialization.is_some() {
            return Err(Error::ContextMismatch("series is already specialized".into()));
        }
        let new_ctx = Context::new(ctx.lattice.clone(), Some(u.to_vec()));
        let mut out = MultiSeries::zero(Some(new_ctx.clone()), self.precision);
        for (k, c) in &self.terms {
            let key = Key { s24: k.s24, q24: k.q24, ell2: new_ctx.ell_of(&k.ell2) };
            out.add_term(key, c);
        }
        Ok(out)
    }

    /// First key (in key order) where the two series differ on their common known region,
    /// with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(Key, C, C)>> {
        if !self.same_context(other) {
            return Err(Error::ContextMismatch("comparing series over different contexts".into()));
        }
        let (a, b) = self.aligned_precisions(other)?;
        let common = a.precision.intersect(&b.precision);
        let mut keys: Vec<&Key> = a.terms.keys().chain(b.terms.keys()).filter(|k| common.contains(k)).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let x = a.terms.get(k).cloned().unwrap_or_else(C::zero);
            let y = b.terms.get(k).cloned().unwrap_or_else(C::zero);
            if x != y {
                return Ok(Some((k.clone(), x, y)));
            }
        }
        Ok(None)
    }

    /// Equality on the common known region.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }
}
