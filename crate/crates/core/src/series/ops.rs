//! Multiplication, exact division, exponential and logarithm.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{opt_min, Ell, Key, MultiSeries, Precision};
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

/// Term pairs above which multiplication is split across the rayon pool.
const PARALLEL_THRESHOLD: usize = 1 << 14;

impl<C: Coefficient> MultiSeries<C> {
    /// Truncated product. The known region of the result is the largest one
    /// determined by the operands' regions and valuations.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let ctx = self.joint_context(other)?;
        let (mut a, mut b) = self.aligned_precisions(other)?;
        if let Some(c) = &ctx {
            a = a.with_context(c.clone())?;
            b = b.with_context(c.clone())?;
        }
        let (pa, pb) = (a.precision, b.precision);
        let s_max24 = opt_min(pa.s_max24.map(|s| s + pb.s_floor), pb.s_max24.map(|s| s + pa.s_floor));
        let grade_max = match (a.grade_floor(), b.grade_floor()) {
            (Some(fa), Some(fb)) => opt_min(pa.grade_max.map(|g| g + fb), pb.grade_max.map(|g| g + fa)),
            // one operand is an exact zero
            _ => None,
        };
        let precision = Precision { s_max24, grade_max, slope: pa.slope, s_floor: pa.s_floor + pb.s_floor };
        let mut out = MultiSeries::zero(ctx, precision);
        if a.terms.is_empty() || b.terms.is_empty() {
            return Ok(out);
        }
        let slope = pa.slope;
        let mut bt: Vec<(&Key, &C, i64)> = b.terms.iter().map(|(k, c)| (k, c, k.q24 + slope * k.s24)).collect();
        bt.sort_by_key(|t| t.2);
        let at: Vec<(&Key, &C)> = a.terms.iter().collect();
        let chunk = |part: &[(&Key, &C)]| -> HashMap<Key, C> {
            let mut acc: HashMap<Key, C> = HashMap::new();
            for (ka, ca) in part {
                let ga = ka.q24 + slope * ka.s24;
                for (kb, cb, gb) in &bt {
                    if grade_max.is_some_and(|g| ga + gb > g) {
                        break;
                    }
                    let k = ka.add(kb);
                    if !precision.contains(&k) {
                        continue;
                    }
                    let v = ca.mul_ref(cb);
                    match acc.get_mut(&k) {
                        Some(e) => *e += &v,
                        None => {
                            acc.insert(k, v);
                        }
                    }
                }
            }
            acc
        };
        let partials: Vec<HashMap<Key, C>> = if at.len() * bt.len() > PARALLEL_THRESHOLD && at.len() > 1 {
            let size = at.len().div_ceil(rayon::current_num_threads() * 4).max(1);
            at.par_chunks(size).map(chunk).collect()
        } else {
            vec![chunk(&at)]
        };
        for part in partials {
            for (k, c) in part {
                out.add_term(k, &c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut result = MultiSeries::one(self.ctx.clone());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact quotient `self / den` for `s`-unbounded operands whose terms each
    /// sit on one `s`-slice. Division runs layer by layer in `q`; each layer
    /// is a Laurent polynomial in the `r`-variables divided by the lowest
    /// layer of `den` under the graded-lexicographic order.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        let ctx = self.joint_context(den)?;
        if den.terms.is_empty() {
            return Err(Error::NonDivisible("division by a series with no known nonzero term".into()));
        }
        if self.precision.s_max24.is_some() || den.precision.s_max24.is_some() {
            return Err(Error::Unsupported("exact division of s-bounded series".into()));
        }
        let single_slice = |x: &Self, what: &str| -> Result<Option<i64>> {
            let mut it = x.terms.keys().map(|k| k.s24);
            let first = it.next();
            if let Some(s) = first {
                if it.any(|t| t != s) {
                    return Err(Error::Unsupported(format!("{what} spans several s-slices")));
                }
            }
            Ok(first)
        };
        let s_den = single_slice(den, "denominator")?.unwrap_or(0);
        let s_num = single_slice(self, "numerator")?.unwrap_or(s_den);
        let (mut num, mut den) = (self.clone().with_slope(0)?, den.clone().with_slope(0)?);
        if let Some(c) = &ctx {
            num = num.with_context(c.clone())?;
            den = den.with_context(c.clone())?;
        }
        let layers = |x: &Self| -> BTreeMap<i64, HashMap<Ell, C>> {
            let mut m: BTreeMap<i64, HashMap<Ell, C>> = BTreeMap::new();
            for (k, c) in &x.terms {
                m.entry(k.q24).or_default().insert(k.ell2.clone(), c.clone());
            }
            m
        };
        let den_layers = layers(&den);
        let (&q0, d0) = den_layers.iter().next().expect("nonempty");
        let mut rem = layers(&num);
        let vq_q = rem.keys().next().map(|q| q - q0);
        let g_n = num.precision.grade_max;
        let g_d = den.precision.grade_max;
        let bound = match vq_q {
            Some(v) => opt_min(g_n.map(|g| g - q0), g_d.map(|g| g - q0 + v)),
            None => g_n.map(|g| g - q0),
        };
        // exact operands: the quotient, if a polynomial, ends at max(num) - max(den)
        let poly_end = match bound {
            Some(_) => None,
            None => {
                let max_n = rem.keys().next_back().copied().unwrap_or(q0);
                let max_d = *den_layers.keys().next_back().unwrap();
                Some(max_n - max_d)
            }
        };
        let precision = Precision { s_max24: None, grade_max: bound, slope: 0, s_floor: s_num - s_den };
        let mut out = MultiSeries::zero(ctx, precision);
        while let Some((&qr, _)) = rem.iter().next() {
            let t = qr - q0;
            if bound.is_some_and(|b| t > b) {
                break;
            }
            if poly_end.is_some_and(|e| t > e) {
                return Err(Error::NonDivisible(format!("nonzero remainder at q24 = {qr} beyond the polynomial quotient")));
            }
            let layer = rem.remove(&qr).unwrap();
            let part = poly_div(&layer, d0).ok_or_else(|| {
                Error::NonDivisible(format!("layer q24 = {qr} is not divisible by the leading layer of the denominator"))
            })?;
            for (dq, dl) in den_layers.iter().skip(1) {
                let target = t + dq;
                if bound.is_some_and(|b| target - q0 > b) {
                    break;
                }
                let entry = rem.entry(target).or_default();
                for (e1, c1) in &part {
                    for (e2, c2) in dl {
                        let e: Ell = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                        let v = c1.mul_ref(c2);
                        match entry.get_mut(&e) {
                            Some(x) => {
                                *x -= &v;
                                if x.is_zero() {
                                    entry.remove(&e);
                                }
                            }
                            None => {
                                entry.insert(e, -v);
                            }
                        }
                    }
                }
                if entry.is_empty() {
                    rem.remove(&target);
                }
            }
            for (e, c) in part {
                out.add_term(Key { s24: s_num - s_den, q24: t, ell2: e }, &c);
            }
        }
        Ok(out)
    }

    fn check_exp_input(&self, what: &str) -> Result<i64> {
        if self.precision.s_floor <= 0 {
            return Err(Error::Valuation(format!("{what} needs positive s-valuation, got s24 floor {}", self.precision.s_floor)));
        }
        let s_max = self.precision.s_max24.ok_or_else(|| Error::Valuation(format!("{what} needs an s-bounded series")))?;
        Ok((s_max / self.precision.s_floor).max(0))
    }

    /// `exp(x)` for `x` of positive `s`-valuation.
    pub fn exp_series(&self) -> Result<Self> {
        let n_max = self.check_exp_input("exp")?;
        let mut result = MultiSeries::one(self.ctx.clone());
        let mut power = MultiSeries::one(self.ctx.clone());
        let mut fact: i64 = 1;
        for n in 1..=n_max {
            power = power.mul(self)?;
            fact = fact.checked_mul(n).ok_or_else(|| Error::Unsupported("exp order too large".into()))?;
            let c = C::from_ratio(1, fact).ok_or_else(|| Error::NonDivisible(format!("1/{fact} in coefficient ring")))?;
            result = result.add(&power.scale(&c))?;
        }
        result.truncate(&self.precision_like())
    }

    /// `log(1 + x)` for `x` of positive `s`-valuation.
    pub fn log1p_series(&self) -> Result<Self> {
        let n_max = self.check_exp_input("log1p")?;
        let floor = Precision { s_floor: self.precision.s_floor, ..Precision::exact() };
        let mut result = MultiSeries::zero(self.ctx.clone(), floor);
        let mut power = MultiSeries::one(self.ctx.clone());
        for n in 1..=n_max {
            power = power.mul(self)?;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            let c = C::from_ratio(sign, n).ok_or_else(|| Error::NonDivisible(format!("1/{n} in coefficient ring")))?;
            result = result.add(&power.scale(&c))?;
        }
        result.truncate(&self.precision_like())
    }

    fn precision_like(&self) -> Precision {
        Precision { s_floor: 0, ..self.precision }
    }
}

/// Exact Laurent-polynomial division, `None` if not divisible.
pub(crate) fn poly_div<C: Coefficient>(num: &HashMap<Ell, C>, den: &HashMap<Ell, C>) -> Option<HashMap<Ell, C>> {
    if num.is_empty() {
        return Some(HashMap::new());
    }
    if den.len() == 1 {
        let (e, c) = den.iter().next().unwrap();
        let mut out = HashMap::with_capacity(num.len());
        for (k, v) in num {
            let q: Ell = k.iter().zip(e).map(|(a, b)| a - b).collect();
            out.insert(q, v.div_exact(c)?);
        }
        return Some(out);
    }
    let dim = den.keys().next().unwrap().len();
    let range = |m: &HashMap<Ell, C>, i: usize| {
        let it = m.keys().map(|k| k[i]);
        (it.clone().min().unwrap(), it.max().unwrap())
    };
    let mut lo = vec![0i64; dim];
    let mut hi = vec![0i64; dim];
    for i in 0..dim {
        let (nl, nh) = range(num, i);
        let (dl, dh) = range(den, i);
        lo[i] = nl - dl;
        hi[i] = nh - dh;
        if lo[i] > hi[i] {
            return None;
        }
    }
    let order = |e: &Ell| (e.iter().sum::<i64>(), e.clone());
    let (lead_e, lead_c) = den.iter().max_by(|a, b| order(a.0).cmp(&order(b.0))).unwrap();
    let mut rem: BTreeMap<(i64, Ell), C> = num.iter().map(|(k, v)| (order(k), v.clone())).collect();
    let mut out: HashMap<Ell, C> = HashMap::new();
    while let Some(((_, m), c)) = rem.pop_last() {
        let t: Ell = m.iter().zip(lead_e).map(|(a, b)| a - b).collect();
        if (0..dim).any(|i| t[i] < lo[i] || t[i] > hi[i]) {
            return None;
        }
        let coef = c.div_exact(lead_c)?;
        for (e, dc) in den {
            if e == lead_e {
                continue;
            }
            let k: Ell = t.iter().zip(e).map(|(a, b)| a + b).collect();
            let key = order(&k);
            let v = coef.mul_ref(dc);
            match rem.get_mut(&key) {
                Some(x) => {
                    *x -= &v;
                    if x.is_zero() {
                        rem.remove(&key);
                    }
                }
                None => {
                    rem.insert(key, -v);
                }
            }
        }
        out.insert(t, coef);
    }
    Some(out)
}
