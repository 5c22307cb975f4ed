//! The odd Jacobi theta function `ϑ(τ, z)` and its pullbacks `ϑ(τ, (ℓ, z))`,
//! by its Fourier series and independently by the triple product.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{kronecker_minus4, Coefficient};
use crate::series::{Context, Ell, Key, MultiSeries, Precision};

fn half_key(ell2: &[i64]) -> Result<Ell> {
    if ell2.iter().any(|v| v % 2 != 0) {
        return Err(Error::InvalidArgument(format!("theta pullback needs ℓ in the dual lattice, got doubled key {ell2:?}")));
    }
    Ok(ell2.iter().map(|v| v / 2).collect())
}

/// `Σ_n (−4/n) q^{n²/8} r^{nℓ/2}`, known for `q24 <= q_max24`. `ell2` is the
/// context key of `ℓ`.
pub fn theta_pullback_sum<C: Coefficient>(ctx: &Arc<Context>, ell2: &[i64], q_max24: i64) -> Result<MultiSeries<C>> {
    let half = half_key(ell2)?;
    let mut out = MultiSeries::zero(Some(ctx.clone()), Precision::q_bound(q_max24));
    let mut n: i64 = 1;
    while 3 * n * n <= q_max24 {
        for m in [n, -n] {
            let key = Key { s24: 0, q24: 3 * m * m, ell2: half.iter().map(|h| h * m).collect() };
            out.add_term(key, &C::from_i64(kronecker_minus4(m)));
        }
        n += 2;
    }
    Ok(out)
}

fn one_minus<C: Coefficient>(ctx: &Arc<Context>, q24: i64, ell2: &[i64]) -> Result<MultiSeries<C>> {
    MultiSeries::one(Some(ctx.clone())).sub(&MultiSeries::monomial(Some(ctx.clone()), q24, ell2, 0, C::one()))
}

/// `−q^{1/8} r^{−ℓ/2} ∏_{n≥1} (1 − q^{n−1} r^ℓ)(1 − q^n r^{−ℓ})(1 − q^n)`.
pub fn theta_pullback_product<C: Coefficient>(ctx: &Arc<Context>, ell2: &[i64], q_max24: i64) -> Result<MultiSeries<C>> {
    let half = half_key(ell2)?;
    let g = q_max24 - 3;
    let neg: Vec<i64> = ell2.iter().map(|v| -v).collect();
    let mut acc = MultiSeries::one(Some(ctx.clone())).truncate(&Precision::q_bound(g))?;
    let mut n: i64 = 1;
    while 24 * (n - 1) <= g {
        acc = acc.mul(&one_minus(ctx, 24 * (n - 1), ell2)?)?;
        if 24 * n <= g {
            acc = acc.mul(&one_minus(ctx, 24 * n, &neg)?)?;
            acc = acc.mul(&one_minus(ctx, 24 * n, &[])?)?;
        }
        n += 1;
    }
    let shift: Vec<i64> = half.iter().map(|h| -h).collect();
    Ok(acc.shift(3, &shift, 0).neg())
}

/// `ϑ(τ, (ℓ, z)) / η(τ) = q^{1/12} (r^{ℓ/2} − r^{−ℓ/2}) ∏_{n≥1} (1 − q^n r^ℓ)(1 − q^n r^{−ℓ})`.
pub fn theta_over_eta_product<C: Coefficient>(ctx: &Arc<Context>, ell2: &[i64], q_max24: i64) -> Result<MultiSeries<C>> {
    let half = half_key(ell2)?;
    let g = q_max24 - 2;
    let neg: Vec<i64> = ell2.iter().map(|v| -v).collect();
    let neg_half: Vec<i64> = half.iter().map(|h| -h).collect();
    let lead = MultiSeries::monomial(Some(ctx.clone()), 0, &half, 0, C::one()).sub(&MultiSeries::monomial(
        Some(ctx.clone()),
        0,
        &neg_half,
        0,
        C::one(),
    ))?;
    let mut acc = lead.truncate(&Precision::q_bound(g))?;
    let mut n: i64 = 1;
    while 24 * n <= g {
        acc = acc.mul(&one_minus(ctx, 24 * n, ell2)?)?;
        acc = acc.mul(&one_minus(ctx, 24 * n, &neg)?)?;
        n += 1;
    }
    Ok(acc.shift(2, &[], 0))
}
