//! Expansions of `q^A r^B s^C ∏_{(n,ℓ,m)>0} (1 − q^n r^ℓ s^m)^{f(nm,ℓ)}`.
//!
//! The product is expanded in the region of `policy`. Write the grade of a
//! key as `q + slope·s`. Dividing by the prefix leaves the region
//! `s <= S − C`, grade `<= G − grade(q^A s^C)` and every factor
//! `1 − X` with `grade(X) > 0` only contributes powers `k` with
//! `k·grade(X)` inside it. The factors with `m = 0, n = 0` (`ℓ < 0`)
//! have grade 0 and are polynomials since `f(0, ℓ) >= 0` there for the
//! forms of interest; a negative exponent on such a factor is rejected.
//! Factors are grouped by their key in the output context, which is
//! legitimate because specialization is a ring homomorphism.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{character_data, require_source, scaled24, target_context, BorcherdsProduct, FJExpansion};
use crate::error::{Error, Result};
use crate::jacobi::{design_constants, hecke_vm, theta_block_series, JacobiExpansion};
use crate::scalar::{binomial, Coefficient};
use crate::series::{Ell, Key, Precision, TruncationPolicy};
use crate::{IntegerSeries, Series};

fn s_bound(policy: &TruncationPolicy) -> Result<i64> {
    policy.s_max24.ok_or_else(|| Error::InvalidArgument("a Borcherds product needs an s bound".into()))
}

/// The source in the output context (specialized when the policy asks).
fn source_in(phi: &JacobiExpansion, policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    let ctx = target_context(phi, policy.specialization.as_ref())?;
    match (&ctx.specialization, phi.is_specialized()) {
        (Some(u), false) => phi.specialize(u),
        _ => Ok(phi.clone()),
    }
}

fn integer_exponent(f: &BigRational, at: &Key) -> Result<i64> {
    if !f.is_integer() {
        return Err(Error::InvalidArgument(format!("non-integral exponent {f} at {at}")));
    }
    ToPrimitive::to_i64(&f.to_integer()).ok_or_else(|| Error::Unsupported("exponent too large".into()))
}

struct Prefix {
    a24: i64,
    b: Ell,
    c24: i64,
}

fn prefix_of(phi: &JacobiExpansion, ctx_phi: &JacobiExpansion) -> Result<(Prefix, crate::jacobi::WeylData)> {
    let weyl = design_constants(phi)?;
    let ctx = ctx_phi.context()?;
    Ok((Prefix { a24: scaled24(&weyl.a)?, b: ctx.ell_of(&weyl.b.pairing2), c24: scaled24(&weyl.c)? }, weyl))
}

fn finish(phi: &JacobiExpansion, weyl: crate::jacobi::WeylData, expansion: Series) -> Result<BorcherdsProduct> {
    let f00 =
        phi.zero_row()?.into_iter().find(|(p, _)| p.iter().all(|v| *v == 0)).map(|(_, f)| f).unwrap_or_else(BigRational::zero);
    Ok(BorcherdsProduct {
        source: phi.clone(),
        weyl,
        weight2: integer_exponent(&f00, &Key::scalar(0, 0, 0))?,
        character: character_data(phi)?,
        expansion,
    })
}

/// Direct expansion of the infinite product in the region of `policy`.
pub fn product_direct(phi: &JacobiExpansion, policy: &TruncationPolicy) -> Result<BorcherdsProduct> {
    require_source(phi)?;
    let src = source_in(phi, policy)?;
    let ctx = src.context()?.clone();
    let (pre, weyl) = prefix_of(phi, &src)?;
    let slope = policy.slope;
    let sb = s_bound(policy)? - pre.c24;
    let budget = policy.grade_bound() - (pre.a24 + slope * pre.c24);
    let region = Precision { s_max24: Some(sb), grade_max: Some(budget), slope, s_floor: 0 };
    let out_precision = policy.precision();
    if sb < 0 || budget < 0 {
        return finish(phi, weyl, Series::zero(Some(ctx), out_precision));
    }

    let mut rows: HashMap<i64, Vec<(Ell, BigRational)>> = HashMap::new();
    for (k, f) in src.series.terms() {
        rows.entry(k.q24).or_default().push((k.ell2.clone(), f.clone()));
    }
    let q_known = src.q_max24().unwrap_or(i64::MAX);
    let n_min = src.series.q_valuation().unwrap_or(0).div_euclid(24);

    // exponents of 1 − q^n r^ℓ s^m, grouped by output key
    let mut factors: HashMap<Key, i64> = HashMap::new();
    let mut add = |key: Key, e: i64| {
        if e != 0 {
            *factors.entry(key).or_default() += e;
        }
    };
    for (p2, f) in src.zero_row()? {
        if phi.ordering.is_positive(&p2) == Some(false) {
            let key = Key { q24: 0, ell2: ctx.ell_of(&p2), s24: 0 };
            add(key.clone(), integer_exponent(&f, &key)?);
        }
    }
    for m in 0..=sb / 24 {
        let n_lo = if m == 0 { 1 } else { n_min.div_euclid(m) + i64::from(n_min.rem_euclid(m) != 0) };
        let mut n = n_lo;
        while 24 * n + slope * 24 * m <= budget {
            let q24 = 24 * n * m;
            if q24 > q_known {
                return Err(Error::InsufficientSourceOrder {
                    q24,
                    deficiency: format!("n = {n}, m = {m}"),
                    detail: "product factor beyond the source truncation".into(),
                });
            }
            for (ell, f) in rows.get(&q24).map(Vec::as_slice).unwrap_or(&[]) {
                let key = Key { q24: 24 * n, ell2: ell.clone(), s24: 24 * m };
                add(key.clone(), integer_exponent(f, &key)?);
            }
            n += 1;
        }
    }

    let mut ordered: Vec<(Key, i64)> = factors.into_iter().filter(|(_, e)| *e != 0).collect();
    ordered.sort_by(|a, b| a.0.cmp(&b.0));
    let mut acc: IntegerSeries = IntegerSeries::one(Some(ctx.clone())).truncate(&region)?;
    for (x, e) in ordered {
        if x.q24 == 0 && x.s24 == 0 && x.ell2.iter().all(|v| *v == 0) {
            return Err(Error::InvalidArgument("specialization annihilates a product factor".into()));
        }
        let g = region.grade(&x);
        let k_max = if g < 0 {
            return Err(Error::Unsupported(format!("slope {slope} too small: factor {x} has negative grade")));
        } else if g == 0 && x.s24 == 0 {
            if e < 0 {
                return Err(Error::Unsupported(format!("grade-0 factor {x} with negative exponent {e}")));
            }
            e
        } else {
            let by_grade = if g > 0 { budget / g } else { i64::MAX };
            let by_s = if x.s24 > 0 { sb / x.s24 } else { i64::MAX };
            by_grade.min(by_s)
        };
        let mut factor = IntegerSeries::zero(Some(ctx.clone()), region);
        for k in 0..=k_max {
            let c = binomial(e, k as u32);
            let c = if k % 2 == 0 { c } else { -c };
            factor.add_term(x.scale(k), &c);
        }
        acc = acc.mul(&factor)?;
    }
    let expansion: Series = acc.convert()?.shift(pre.a24, &pre.b, pre.c24);
    finish(phi, weyl, expansion.truncate(&out_precision)?)
}

/// The `s`-free series `φ|V_m` in the output context.
fn vm_in(phi: &JacobiExpansion, m: u32, policy: &TruncationPolicy) -> Result<Series> {
    let v = hecke_vm(phi, m)?;
    match &policy.specialization {
        Some(u) => v.series.specialize(u),
        None => Ok(v.series),
    }
}

fn insufficient(have: &Series, want: i64, what: &str) -> Error {
    Error::InsufficientSourceOrder { q24: want, deficiency: format!("{:?}", have.precision().grade_max), detail: what.into() }
}

fn require_q(s: &Series, want: i64, what: &str) -> Result<Series> {
    if s.precision().grade_max.is_some_and(|g| g < want) {
        return Err(insufficient(s, want, what));
    }
    s.truncate(&Precision::q_bound(want))
}

/// Theta block times `exp(−Σ_{m>=1} s^m φ|V_m)`; `φ` must be unspecialized.
pub fn product_hecke(phi: &JacobiExpansion, policy: &TruncationPolicy) -> Result<BorcherdsProduct> {
    require_source(phi)?;
    if phi.is_specialized() {
        return Err(Error::Unsupported("Hecke route needs the unspecialized form".into()));
    }
    let src = source_in(phi, policy)?;
    let ctx = src.context()?.clone();
    let (pre, weyl) = prefix_of(phi, &src)?;
    let slope = policy.slope;
    let sb = s_bound(policy)? - pre.c24;
    let budget = policy.grade_bound() - (pre.a24 + slope * pre.c24);
    let out_precision = policy.precision();
    if sb < 0 || budget < 0 {
        return finish(phi, weyl, Series::zero(Some(ctx), out_precision));
    }
    let region = Precision { s_max24: Some(sb), grade_max: Some(budget), slope, s_floor: 0 };
    let mut x = Series::zero(Some(ctx.clone()), region).assume_s_floor(24)?;
    for m in 1..=sb / 24 {
        let want = budget - slope * 24 * m;
        if want < 0 {
            break;
        }
        let v = require_q(&vm_in(phi, m as u32, policy)?, want, "Hecke image")?;
        let term = v.shift(0, &[], 24 * m).with_slope(slope)?.truncate(&region)?;
        x = x.sub(&term)?;
    }
    let e = x.exp_series()?;
    let block_policy = TruncationPolicy {
        q_max24: policy.grade_bound() - slope * pre.c24,
        s_max24: None,
        slope: 0,
        specialization: policy.specialization.clone(),
    };
    let (psi, _) = theta_block_series::<BigRational>(phi, &block_policy)?;
    let psi = psi.shift(0, &[], pre.c24).with_slope(slope)?;
    let expansion = psi.mul(&e)?;
    if expansion.precision().grade_max.is_some_and(|g| g < out_precision.grade_max.unwrap_or(i64::MIN))
        || expansion.precision().s_max24.is_some_and(|s| s < out_precision.s_max24.unwrap_or(i64::MIN))
    {
        return Err(insufficient(&expansion, policy.grade_bound(), "Hecke-route product"));
    }
    finish(phi, weyl, expansion.truncate(&out_precision)?)
}

/// The first Fourier–Jacobi coefficients in closed form: with `ψ` the theta
/// block and `T₋(m) = m V_m`,
/// `ψ`, `−ψφ`, `½ψ(φ² − φ|T₋(2))` and `−⅙ψ(φ³ − 3φ·φ|T₋(2) + 2φ|T₋(3))`
/// at `s^C, …, s^{C+3}`, each to `q <= q_max` on its slice.
pub fn corollary32_terms(phi: &JacobiExpansion, policy: &TruncationPolicy, slices: usize) -> Result<FJExpansion> {
    require_source(phi)?;
    if phi.is_specialized() {
        return Err(Error::Unsupported("closed-form slices need the unspecialized form".into()));
    }
    if slices > 4 {
        return Err(Error::Unsupported("closed forms are implemented for the first four slices".into()));
    }
    let src = source_in(phi, policy)?;
    let c24 = scaled24(&design_constants(phi)?.c)?;
    let g = policy.grade_bound();
    let slope = policy.slope;
    let want = |j: i64| g - slope * (c24 + 24 * j);
    let top = want(0);
    let block_policy = TruncationPolicy { q_max24: top, s_max24: None, slope: 0, specialization: policy.specialization.clone() };
    let (psi, _) = theta_block_series::<BigRational>(phi, &block_policy)?;
    let f = &src.series;
    let rat = |a: i64, b: i64| BigRational::from_ratio(a, b).expect("nonzero");
    let mut out = Vec::new();
    for j in 0..slices as i64 {
        let poly: Series = match j {
            0 => Series::one(Some(src.context()?.clone())),
            1 => f.neg(),
            2 => {
                let t2 = vm_in(phi, 2, policy)?.scale(&rat(2, 1));
                f.mul(f)?.sub(&t2)?.scale(&rat(1, 2))
            }
            _ => {
                let t2 = vm_in(phi, 2, policy)?.scale(&rat(2, 1));
                let t3 = vm_in(phi, 3, policy)?.scale(&rat(3, 1));
                let f3 = f.mul(f)?.mul(f)?;
                let mid = f.mul(&t2)?.scale(&rat(3, 1));
                f3.sub(&mid)?.add(&t3.scale(&rat(2, 1)))?.scale(&rat(-1, 6))
            }
        };
        let slice = psi.mul(&poly)?;
        out.push((c24 + 24 * j, require_q(&slice, want(j), "closed-form slice")?));
    }
    Ok(FJExpansion { slices: out })
}
