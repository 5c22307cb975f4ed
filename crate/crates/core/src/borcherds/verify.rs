//! Checks on products of the singular-weight forms `φ₀ = ϑ_N/Δ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{product_direct, scaled24, BorcherdsProduct};
use crate::error::{Error, Result};
use crate::jacobi::{affine_denominator_series, design_constants, theta_block_series, weak_phi0, WeylData};
use crate::lattice::{cusp_lattice, CuspLabel, RootSystemData};
use crate::report::{CheckReport, Status, Witness};
use crate::series::{Key, TruncationPolicy};
use crate::{IntegerSeries, Series};

/// Window and tier of the leading Fourier–Jacobi check.
#[derive(Clone, Debug)]
pub struct Thm12Options {
    /// The slice is compared to `q <= 1 + h + extra_q`.
    pub extra_q: i64,
    /// Also expand the infinite product through `s^{h+1}` and recover `φ₀` from
    /// its two leading slices.
    pub full: bool,
    /// Specialization vectors; `None` picks `2ρ` (or a basis vector for the Leech lattice).
    pub specialization: Option<Vec<Vec<i64>>>,
}

impl Default for Thm12Options {
    fn default() -> Self {
        Thm12Options { extra_q: 2, full: false, specialization: None }
    }
}

fn coxeter(roots: &RootSystemData) -> Result<i64> {
    if roots.positive_roots.is_empty() {
        return Ok(0);
    }
    Ok(roots.coxeter_number()? as i64)
}

/// `+1` or `−1` when `a = ±b` on the common region, `None` otherwise.
fn sign_between(a: &Series, b: &Series) -> Result<Option<i64>> {
    if a.first_difference(b)?.is_none() {
        return Ok(Some(1));
    }
    if a.first_difference(&b.neg())?.is_none() {
        return Ok(Some(-1));
    }
    Ok(None)
}

fn difference_witness(a: &Series, b: &Series) -> Result<Witness> {
    Ok(match a.first_difference(b)? {
        Some(d) => Witness::from_difference(&d),
        None => Witness::new("series", "equal", "equal"),
    })
}

/// For `φ₀` at a cusp: `C = h`, `B = ρ`, and the slice at `s^h` equals `±` the
/// affine denominator of the root system. The structural tier compares the
/// theta block with the denominator; the full tier also expands the product.
pub fn verify_theorem12(cusp: CuspLabel, opts: &Thm12Options) -> Result<CheckReport> {
    let (l, roots) = cusp_lattice(cusp)?;
    let h = coxeter(&roots)?;
    let u = match &opts.specialization {
        Some(u) => u.clone(),
        None if roots.positive_roots.is_empty() => {
            let mut e = vec![0; l.rank()];
            e[0] = 1;
            vec![e]
        }
        None => vec![roots.rho2.clone()],
    };
    let q_max = 1 + h + opts.extra_q;
    let policy = TruncationPolicy::q_only(q_max).with_specialization(u);
    let mut report = CheckReport::new("leading-fourier-jacobi").with_cusp(cusp).with_policy(&policy);
    report.detail("h", h);

    let phi = report.timed("source", || weak_phi0(cusp, &TruncationPolicy::q_only(0)))?;
    let weyl: WeylData = design_constants(&phi)?;
    report.detail("A", &weyl.a);
    report.detail("C", &weyl.c);
    let h_rat = BigRational::from_integer(h.into());
    report.require(weyl.c == h_rat, || Witness::new("C", &weyl.c, h));
    let rho = roots.rho(&l);
    report.require(weyl.b == rho, || Witness::new("B", format!("{:?}", weyl.b.pairing2), format!("{:?}", rho.pairing2)));

    let aff: IntegerSeries = report.timed("affine", || affine_denominator_series(&l, &roots, &policy))?;
    let aff: Series = aff.convert()?;
    let (block, _) = report.timed("theta-block", || theta_block_series::<BigInt>(&phi, &policy))?;
    let block: Series = block.convert()?;
    let sign = sign_between(&block, &aff)?;
    report.sign = sign;
    if sign.is_none() {
        report.fail(difference_witness(&block, &aff)?);
    }
    report.require(!aff.is_empty(), || Witness::new("affine denominator", "nonzero", "empty"));

    if opts.full {
        // slices s^h and s^{h+1}; the top one to q <= h + extra_q
        let prod_policy = TruncationPolicy { q_max24: 24 * (q_max - 1), s_max24: Some(24 * (h + 1)), slope: 1, ..policy.clone() };
        let spec = policy.specialization.clone().expect("set above");
        let source = report.timed("full-source", || weak_phi0(cusp, &TruncationPolicy::q_only(1).with_specialization(spec)))?;
        let product = report.timed("product", || product_direct(&source, &prod_policy))?;
        let below = product.expansion.s_valuation().is_some_and(|s| s < 24 * h);
        report.require(!below, || Witness::new("s-valuation", product.expansion.s_valuation().unwrap_or(0), 24 * h));
        let slice = product.expansion.fj_slice(24 * h)?;
        let s2 = sign_between(&slice, &aff)?;
        if s2.is_none() || s2 != sign {
            report.fail(difference_witness(&slice, &aff)?);
        }
        let next = product.expansion.fj_slice(24 * (h + 1))?;
        let recovered = super::fj_criterion(&slice, &next)?;
        let known = recovered.precision().grade_max;
        report.detail("recovered_q24", known.map_or("none".to_string(), |g| g.to_string()));
        report.require(known.is_some_and(|g| g >= 0), || Witness::new("recovered window", format!("{known:?}"), ">= 0"));
        if let Some(d) = recovered.first_difference(&source.series)? {
            report.fail(Witness::from_difference(&d));
        }
    } else if report.status == Status::Pass {
        report.status = Status::StructuralPass;
    }
    Ok(report)
}

/// Equality of two expansions on their common known region.
pub fn compare_products(name: &str, a: &Series, b: &Series) -> Result<CheckReport> {
    let mut report = CheckReport::new(name);
    report.detail("terms", a.len());
    if let Some(d) = a.first_difference(b)? {
        report.fail(Witness::from_difference(&d));
    }
    Ok(report)
}

/// `c(q^a r^ℓ s^c) = (−1)^D c(q^c r^ℓ s^a)` for every stored key whose swap is known.
pub fn v_swap_check(product: &BorcherdsProduct) -> Result<CheckReport> {
    let d = product.character.v_swap_parity.ok_or_else(|| Error::InvalidArgument("product without swap character".into()))?;
    let sign = if d == 0 { BigRational::one() } else { -BigRational::one() };
    let e = &product.expansion;
    let p = e.precision();
    let mut report = CheckReport::new("v-swap");
    report.sign = Some(if d == 0 { 1 } else { -1 });
    report.detail("C24", scaled24(&product.weyl.c)?);
    let mut compared = 0usize;
    for (k, c) in e.sorted_terms() {
        let swapped = Key { q24: k.s24, ell2: k.ell2.clone(), s24: k.q24 };
        if !p.contains(&swapped) || swapped.s24 < p.s_floor {
            continue;
        }
        compared += 1;
        let other = e.coefficient(&swapped)?;
        let want = &other * &sign;
        if *c != want && report.witnesses.len() < 8 {
            report.fail(Witness::new(k.to_string(), c, &want));
        }
    }
    report.detail("compared", compared);
    if compared == 0 {
        return Err(Error::OutsideTruncation("no key has its swap inside the window".into()));
    }
    Ok(report)
}
