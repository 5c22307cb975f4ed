//! Theta blocks `η^{f(0,0)} ∏_{ℓ>0} (ϑ(τ,(ℓ,z))/η)^{f(0,ℓ)}` and affine
//! denominators `Δ ∏_{v∈R₊} ϑ(τ,(v,z))/η`.
//!
//! Both are products of factors with known `q`-valuation. To get the product
//! to `q24 <= T` each factor is expanded to `T − V + v_i`, where `V` is the
//! total valuation and `v_i` that of the factor.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::design::{design_constants, WeylData};
use super::theta::{theta_over_eta_product, theta_pullback_sum};
use super::{CharacterData, JacobiExpansion};
use crate::error::{Error, Result};
use crate::lattice::{ideal_generators, DualVector, Lattice, RootSystemData};
use crate::scalar::{binomial, Coefficient};
use crate::series::{eta_power, Context, Ell, Key, MultiSeries, Precision, TruncationPolicy};
use crate::Series;

/// Context of the output: the form's own, or the policy's specialization of it.
fn output_context(lattice: &Lattice, own: Option<&Arc<Context>>, policy: &TruncationPolicy) -> Arc<Context> {
    match own {
        Some(c) if c.specialization.is_some() => c.clone(),
        _ => Context::new(lattice.clone(), policy.specialization.clone()),
    }
}

fn exponent_of(f: &BigRational) -> Result<i64> {
    if !f.is_integer() {
        return Err(Error::InvalidArgument(format!("theta block needs integral f(0, ℓ), got {f}")));
    }
    i64::try_from(f.to_integer()).map_err(|_| Error::Unsupported("theta block exponent too large".into()))
}

fn product_of_thetas<C: Coefficient>(
    ctx: &Arc<Context>,
    groups: &BTreeMap<Ell, i64>,
    eta_exp: i64,
    target: i64,
) -> Result<MultiSeries<C>> {
    let total: i64 = eta_exp + 3 * groups.values().sum::<i64>();
    let mut acc: MultiSeries<C> = eta_power(eta_exp, target - total + eta_exp);
    acc = acc.with_context(ctx.clone())?;
    for (key, &k) in groups {
        let theta: MultiSeries<C> = theta_pullback_sum(ctx, key, target - total + 3)?;
        acc = acc.mul(&theta.pow(k as u32)?)?;
    }
    Ok(acc)
}

/// The theta block of a weight-0 index-1 form to `q24 <= policy.q_max24`,
/// specialized when the policy asks for it.
pub fn theta_block_series<C: Coefficient>(
    phi: &JacobiExpansion,
    policy: &TruncationPolicy,
) -> Result<(MultiSeries<C>, WeylData)> {
    let weyl = design_constants(phi)?;
    let row = phi.zero_row()?;
    let ctx = output_context(&phi.lattice, phi.series.context(), policy);
    let mut f00 = 0i64;
    let mut positive_sum = 0i64;
    let mut num: BTreeMap<Ell, i64> = BTreeMap::new();
    let mut den: BTreeMap<Ell, i64> = BTreeMap::new();
    for (p2, f) in &row {
        let f = exponent_of(f)?;
        match phi.ordering.is_positive(p2) {
            None => f00 += f,
            Some(false) => {}
            Some(true) => {
                positive_sum += f;
                let key = ctx.ell_of(p2);
                if key.iter().all(|v| *v == 0) {
                    return Err(Error::InvalidArgument(format!("specialization is orthogonal to ℓ with pairings {p2:?}")));
                }
                if f > 0 {
                    *num.entry(key).or_default() += f;
                } else if f < 0 {
                    *den.entry(key).or_default() -= f;
                }
            }
        }
    }
    let eta_exp = f00 - positive_sum;
    let t = policy.q_max24;
    let v_num = eta_exp + 3 * num.values().sum::<i64>();
    let v_den = 3 * den.values().sum::<i64>();
    let series = if den.is_empty() {
        product_of_thetas(&ctx, &num, eta_exp, t)?
    } else {
        let g_num = t + v_den;
        let g_den = t + 2 * v_den - v_num;
        let n: MultiSeries<C> = product_of_thetas(&ctx, &num, eta_exp, g_num)?;
        let d: MultiSeries<C> = product_of_thetas(&ctx, &den, 0, g_den)?;
        n.exact_div(&d)?
    };
    Ok((series.truncate(&Precision::q_bound(t))?, weyl))
}

fn index24_of(c: &BigRational) -> Result<i64> {
    let v = c * BigRational::from_integer(BigInt::from(24));
    if !v.is_integer() {
        return Err(Error::Unsupported(format!("index {c} is not a multiple of 1/24")));
    }
    i64::try_from(v.to_integer()).map_err(|_| Error::Unsupported("index too large".into()))
}

/// Theta block as a Jacobi expansion of weight `f(0,0)/2` and index `C`, with its Weyl data.
pub fn theta_block(phi: &JacobiExpansion, policy: &TruncationPolicy) -> Result<(JacobiExpansion, WeylData)> {
    let (series, weyl) = theta_block_series::<BigRational>(phi, policy)?;
    let row = phi.zero_row()?;
    let f00 = row.iter().find(|(p, _)| p.iter().all(|v| *v == 0)).map(|(_, f)| f.clone()).unwrap_or_else(BigRational::zero);
    let sum_f: BigRational = row.iter().map(|(_, f)| f.clone()).sum();
    let (_, n_l) = ideal_generators(&phi.lattice);
    let cn = &weyl.c * BigRational::from_integer(BigInt::from(n_l));
    let heisenberg_trivial = cn.is_integer() && (cn.to_integer() % 2) == BigInt::zero();
    let block = JacobiExpansion {
        weight2: exponent_of(&f00)?,
        index24: index24_of(&weyl.c)?,
        lattice: phi.lattice.clone(),
        series,
        character: CharacterData::new(exponent_of(&sum_f)?, !heisenberg_trivial),
        ordering: phi.ordering.clone(),
        low_rows: None,
    };
    Ok((block, weyl))
}

/// `Δ = q ∏ (1 − q^n)^{24}` by direct binomial expansion.
fn delta_product<C: Coefficient>(q_max24: i64) -> MultiSeries<C> {
    let g = q_max24 - 24;
    let mut acc: MultiSeries<C> = MultiSeries::one(None).truncate(&Precision::q_bound(g)).expect("slope-free");
    let mut n = 1i64;
    while 24 * n <= g {
        let mut factor = MultiSeries::zero(None, Precision::exact());
        for k in 0..=24u32 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            factor.add_term(Key::scalar(24 * n * i64::from(k), 0, 0), &C::from_bigint(binomial(24, k) * sign));
        }
        acc = acc.mul(&factor).expect("scalar product");
        n += 1;
    }
    acc.shift(24, &[], 0)
}

/// The affine Weyl–Kac denominator `Δ ∏_{v∈R₊} ϑ(τ,(v,z))/η` from the positive roots.
pub fn affine_denominator_series<C: Coefficient>(
    lattice: &Lattice,
    roots: &RootSystemData,
    policy: &TruncationPolicy,
) -> Result<MultiSeries<C>> {
    let ctx = Context::new(lattice.clone(), policy.specialization.clone());
    let mut groups: BTreeMap<Ell, i64> = BTreeMap::new();
    for v in &roots.positive_roots {
        let key = ctx.ell_of(&DualVector::from_lattice_vector(lattice, v).pairing2);
        if key.iter().all(|x| *x == 0) {
            return Err(Error::InvalidArgument(format!("specialization is orthogonal to the root {v:?}")));
        }
        *groups.entry(key).or_default() += 1;
    }
    let t = policy.q_max24;
    let total = 24 + 2 * roots.positive_roots.len() as i64;
    if t < total {
        return Err(Error::OutsideTruncation(format!("q24 bound {t} is below the leading exponent {total}")));
    }
    let mut acc = delta_product::<C>(t - total + 24).with_context(ctx.clone())?;
    for (key, &k) in &groups {
        let f: MultiSeries<C> = theta_over_eta_product(&ctx, key, t - total + 2)?;
        acc = acc.mul(&f.pow(k as u32)?)?;
    }
    acc.truncate(&Precision::q_bound(t))
}

pub fn affine_denominator(lattice: &Lattice, roots: &RootSystemData, policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    let series: Series = affine_denominator_series(lattice, roots, policy)?;
    let index24 = if roots.positive_roots.is_empty() { 0 } else { 24 * roots.coxeter_number()? as i64 };
    Ok(JacobiExpansion {
        weight2: lattice.rank() as i64,
        index24,
        lattice: lattice.clone(),
        series,
        character: CharacterData::new(24 + 2 * roots.positive_roots.len() as i64, false),
        ordering: roots.ordering(),
        low_rows: None,
    })
}
