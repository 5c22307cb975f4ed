//! Borcherds products of weight-0 index-1 Jacobi forms, expanded at a
//! one-dimensional cusp as series in `q`, `r` and `s`.

mod product;
mod verify;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jacobi::{design_constants, CharacterData, JacobiExpansion, WeylData};
use crate::lattice::ideal_generators;
use crate::scalar::{sigma, Coefficient};
use crate::series::{Context, Key, Precision};
use crate::Series;

pub use product::{corollary32_terms, product_direct, product_hecke};
pub use verify::{compare_products, v_swap_check, verify_theorem12, Thm12Options};

/// A Borcherds product with its source form and expansion.
#[derive(Clone, Debug)]
pub struct BorcherdsProduct {
    pub source: JacobiExpansion,
    pub weyl: WeylData,
    /// Twice the weight, equal to `f(0,0)`.
    pub weight2: i64,
    pub character: CharacterData,
    pub expansion: Series,
}

impl BorcherdsProduct {
    /// `24 C`.
    pub fn c24(&self) -> i64 {
        scaled24(&self.weyl.c).expect("checked at construction")
    }

    /// Fourier–Jacobi slice at `s^{C + j}`.
    pub fn slice(&self, j: i64) -> Result<Series> {
        self.expansion.fj_slice(self.c24() + 24 * j)
    }

    pub fn fourier_jacobi(&self) -> Result<FJExpansion> {
        let c24 = self.c24();
        let s_max = self.expansion.precision().s_max24.ok_or_else(|| Error::Unsupported("s-unbounded product".into()))?;
        let mut slices = Vec::new();
        let mut s = c24;
        while s <= s_max {
            slices.push((s, self.expansion.fj_slice(s)?));
            s += 24;
        }
        Ok(FJExpansion { slices })
    }
}

/// Fourier–Jacobi slices `(s24, coefficient series)`, ordered by `s24`.
#[derive(Clone, Debug)]
pub struct FJExpansion {
    pub slices: Vec<(i64, Series)>,
}

impl FJExpansion {
    pub fn slice(&self, s24: i64) -> Option<&Series> {
        self.slices.iter().find(|(s, _)| *s == s24).map(|(_, x)| x)
    }

    /// Reassembles the slices into one series.
    pub fn assemble(&self, precision: Precision) -> Result<Series> {
        let ctx = self.slices.first().and_then(|(_, s)| s.context().cloned());
        let mut out = Series::zero(ctx, precision);
        for (s24, slice) in &self.slices {
            for (k, c) in slice.terms() {
                out.add_term(Key { s24: *s24, ..k.clone() }, c);
            }
        }
        Ok(out)
    }
}

pub(crate) fn scaled24(r: &BigRational) -> Result<i64> {
    let v = r * BigRational::from_i64(24);
    if !v.is_integer() {
        return Err(Error::Unsupported(format!("{r} is not a multiple of 1/24")));
    }
    i64::try_from(v.to_integer()).map_err(|_| Error::Unsupported("exponent too large".into()))
}

pub(crate) fn require_source(phi: &JacobiExpansion) -> Result<()> {
    if phi.weight2 != 0 || phi.index24 != 24 {
        return Err(Error::InvalidArgument("Borcherds products take weight-0 index-1 forms".into()));
    }
    let rows = phi.full_low_rows()?;
    if let Some((k, c)) = rows.terms().find(|(_, c)| !c.is_integer()) {
        return Err(Error::InvalidArgument(format!("non-integral coefficient {c} at {k} on the nonpositive-norm part")));
    }
    Ok(())
}

/// `χ` data: `v_η^{24A}`, the Heisenberg descriptor and `D = Σ_{n<0} σ₀(−n) f(n,0)` mod 2.
pub fn character_data(phi: &JacobiExpansion) -> Result<CharacterData> {
    let weyl = design_constants(phi)?;
    let rows = phi.full_low_rows()?;
    let mut d = BigRational::zero();
    for (k, f) in rows.terms() {
        if k.q24 < 0 && k.ell2.iter().all(|v| *v == 0) {
            d += f * BigRational::from_integer(sigma(0, (-k.q24 / 24) as u64));
        }
    }
    if !d.is_integer() {
        return Err(Error::InvalidArgument(format!("swap exponent D = {d} is not an integer")));
    }
    let (_, n) = ideal_generators(&phi.lattice);
    let cn = &weyl.c * BigRational::from_i64(n);
    let trivial = cn.is_integer() && cn.to_integer().is_even();
    let a24 = scaled24(&weyl.a)?;
    Ok(CharacterData {
        eta_power: a24.rem_euclid(24) as u8,
        heisenberg_binary: !trivial,
        v_swap_parity: Some(if d.to_integer().is_even() { 0 } else { 1 }),
    })
}

/// Multiplicity of the rational quadratic divisor of the vector with
/// coefficient index `(n, ℓ)` (`2n − (ℓ,ℓ) < 0`): with `(n, ℓ) = (d₀² n₀, d₀ ℓ₀)`
/// and `(n₀, ℓ₀)` primitive, `Σ_{d≥1} f(d² n₀, d ℓ₀)` over the finitely many
/// `d` whose hyperbolic norm stays within the support of `f`.
pub fn divisor_multiplicity(phi: &JacobiExpansion, n: i64, ell2: &[i64]) -> Result<BigInt> {
    if phi.is_specialized() {
        return Err(Error::Unsupported("divisor multiplicities need unspecialized coefficients".into()));
    }
    let lattice = &phi.lattice;
    let hyp = |n: i64, e: &[i64]| BigRational::from_i64(2 * n) - lattice.dual_norm2(e);
    if hyp(n, ell2) >= BigRational::zero() {
        return Err(Error::InvalidArgument("divisor vector must have negative norm".into()));
    }
    if ell2.iter().any(|v| v % 2 != 0) {
        return Err(Error::InvalidArgument("ℓ must lie in L^∨".into()));
    }
    let g = ell2.iter().fold(0i64, |a, &b| a.gcd(&(b / 2)));
    let bound = if g == 0 { n.unsigned_abs().isqrt() as i64 } else { g };
    let d0 = (1..=bound.max(1)).rev().find(|d| g % d == 0 && n % (d * d) == 0).unwrap_or(1);
    let n0 = n / (d0 * d0);
    let l0: Vec<i64> = ell2.iter().map(|v| v / d0).collect();
    // the most negative hyperbolic norm on the support
    let min_norm = phi.series.terms().map(|(k, _)| hyp(k.q24.div_euclid(24), &k.ell2)).min().unwrap_or_else(BigRational::zero);
    let base = hyp(n0, &l0);
    let q_max = phi.q_max24().unwrap_or(i64::MAX);
    let mut total = BigInt::zero();
    let mut d = 1i64;
    loop {
        let norm = &base * BigRational::from_i64(d * d);
        if norm < min_norm {
            break;
        }
        let q24 = 24 * d * d * n0;
        if q24 > q_max {
            return Err(Error::InsufficientSourceOrder {
                q24,
                deficiency: norm.to_string(),
                detail: "divisor multiplicity term".into(),
            });
        }
        let e: Vec<i64> = l0.iter().map(|v| v * d).collect();
        let f = phi.coefficient(q24, &e)?;
        if !f.is_integer() {
            return Err(Error::InvalidArgument(format!("non-integral f = {f} on a divisor")));
        }
        total += f.to_integer();
        d += 1;
    }
    Ok(total)
}

/// `−φ_{m+1}/φ_m` for consecutive Fourier–Jacobi slices.
pub fn fj_criterion(slice_m: &Series, slice_m1: &Series) -> Result<Series> {
    slice_m1.neg().exact_div(slice_m)
}

/// The context a product over `phi` lives in under `policy`.
pub(crate) fn target_context(phi: &JacobiExpansion, spec: Option<&Vec<Vec<i64>>>) -> Result<Arc<Context>> {
    let own = phi.context()?;
    match (&own.specialization, spec) {
        (Some(a), Some(b)) if a != b => Err(Error::ContextMismatch("form is specialized differently from the policy".into())),
        (Some(_), _) => Ok(own.clone()),
        (None, Some(u)) => Ok(Context::new(phi.lattice.clone(), Some(u.clone()))),
        (None, None) => Ok(own.clone()),
    }
}
