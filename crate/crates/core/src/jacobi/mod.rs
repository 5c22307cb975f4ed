//! Jacobi forms for a lattice, stored through their Fourier coefficients
//! `f(n, ℓ)` as `s`-free series.

mod blocks;
mod design;
mod hecke;
mod theta;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    cached_tally, cusp_lattice, root_lattice, smith_normal_form, CuspLabel, EnumBudget, Family, Lattice, OrderingFunctional,
    PairingTally,
};
use crate::report::{CheckReport, Status, Witness};
use crate::series::{delta_inverse, Context, Key, Precision, TruncationPolicy};
use crate::Series;

pub use blocks::{affine_denominator, affine_denominator_series, theta_block, theta_block_series};
pub use design::{check_two_design, design_constants, polar_c, WeylData};
pub use hecke::{hecke_vm, hecke_vm_substitution};
pub use theta::{theta_over_eta_product, theta_pullback_product, theta_pullback_sum};

/// Multiplier data carried as metadata.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterData {
    /// Power of the eta multiplier, mod 24.
    pub eta_power: u8,
    /// Whether the binary character of the Heisenberg group is nontrivial.
    pub heisenberg_binary: bool,
    /// Parity of the `τ ↔ ω` swap; set for Borcherds products.
    pub v_swap_parity: Option<u8>,
}

impl CharacterData {
    pub fn trivial() -> Self {
        CharacterData::default()
    }

    pub fn new(eta_power: i64, heisenberg_binary: bool) -> Self {
        CharacterData { eta_power: eta_power.rem_euclid(24) as u8, heisenberg_binary, v_swap_parity: None }
    }
}

/// Fourier expansion of a Jacobi form of weight `weight2 / 2` and index `index24 / 24`.
#[derive(Clone, Debug)]
pub struct JacobiExpansion {
    pub weight2: i64,
    pub index24: i64,
    pub lattice: Lattice,
    pub series: Series,
    pub character: CharacterData,
    /// Decides `ℓ > 0` for Weyl vectors and theta blocks.
    pub ordering: OrderingFunctional,
    /// Unspecialized terms with `q <= 0`, kept when `series` is specialized.
    pub low_rows: Option<Series>,
}

impl JacobiExpansion {
    pub fn context(&self) -> Result<&Arc<Context>> {
        self.series.context().ok_or_else(|| Error::ContextMismatch("Jacobi expansion without a lattice context".into()))
    }

    pub fn is_specialized(&self) -> bool {
        self.series.context().is_some_and(|c| c.specialization.is_some())
    }

    /// Largest known `q24`.
    pub fn q_max24(&self) -> Option<i64> {
        self.series.precision().grade_max
    }

    /// Unspecialized terms with `q24 <= 0`.
    pub fn full_low_rows(&self) -> Result<Series> {
        if !self.is_specialized() {
            return self.series.truncate(&Precision::q_bound(0));
        }
        self.low_rows.clone().ok_or_else(|| Error::Unsupported("specialized expansion without unspecialized low rows".into()))
    }

    /// `(pairing2, f(0, ℓ))` over the stored `q⁰` row, unspecialized.
    pub fn zero_row(&self) -> Result<Vec<(Vec<i64>, BigRational)>> {
        let rows = self.full_low_rows()?;
        if rows.precision().grade_max.is_some_and(|g| g < 0) {
            return Err(Error::OutsideTruncation("q⁰ row is not known".into()));
        }
        let mut v: Vec<(Vec<i64>, BigRational)> =
            rows.terms().filter(|(k, _)| k.q24 == 0).map(|(k, c)| (k.ell2.to_vec(), c.clone())).collect();
        v.sort();
        Ok(v)
    }

    /// `f(n, ℓ)` for `q24 = 24 n` and the context key `ell2`.
    pub fn coefficient(&self, q24: i64, ell2: &[i64]) -> Result<BigRational> {
        self.series.coefficient(&Key::new(q24, ell2, 0))
    }

    /// Restricts to a specialization, keeping the unspecialized low rows.
    pub fn specialize(&self, u: &[Vec<i64>]) -> Result<JacobiExpansion> {
        let low = self.full_low_rows()?;
        Ok(JacobiExpansion { series: self.series.specialize(u)?, low_rows: Some(low), ..self.clone() })
    }
}

fn a1_lattice() -> Lattice {
    root_lattice(Family::A, 1).expect("A1")
}

/// Theta series from a tally of `(norm, key)` counts.
fn theta_from_tally(ctx: &Arc<Context>, tally: &PairingTally, q_max24: i64) -> Series {
    let mut out = Series::zero(Some(ctx.clone()), Precision::q_bound(q_max24));
    for ((norm, key), count) in &tally.counts {
        let ell2: Vec<i64> = key.iter().map(|v| 2 * v).collect();
        out.add_term(Key::new(12 * norm, &ell2, 0), &BigRational::from_integer(BigInt::from(*count)));
    }
    out
}

fn check_unimodular(l: &Lattice) -> Result<()> {
    if !l.is_even() || l.determinant() != BigInt::one() || !l.rank().is_multiple_of(8) {
        return Err(Error::InvalidLattice("theta series needs an even unimodular lattice".into()));
    }
    Ok(())
}

/// `ϑ_L(τ, z) = Σ_{ℓ ∈ L} q^{(ℓ,ℓ)/2} r^ℓ` for even unimodular `L`, to `q <= q_max`.
pub fn theta_lattice(l: &Lattice, policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    theta_lattice_with(l, policy, &EnumBudget::default())
}

pub fn theta_lattice_with(l: &Lattice, policy: &TruncationPolicy, budget: &EnumBudget) -> Result<JacobiExpansion> {
    check_unimodular(l)?;
    let q_max24 = policy.q_max24;
    let ctx = Context::new(l.clone(), policy.specialization.clone());
    let max_norm = 2 * q_max24.div_euclid(24);
    let series = if max_norm < 0 {
        Series::zero(Some(ctx.clone()), Precision::q_bound(q_max24))
    } else {
        let tally = cached_tally(l, max_norm, policy.specialization.as_deref(), budget)?;
        theta_from_tally(&ctx, &tally, q_max24)
    };
    let low_rows = match &policy.specialization {
        Some(_) if q_max24 >= 0 => {
            let tally = cached_tally(l, 0, None, budget)?;
            Some(theta_from_tally(&Context::full(l), &tally, 0))
        }
        _ => None,
    };
    Ok(JacobiExpansion {
        weight2: l.rank() as i64,
        index24: 24,
        lattice: l.clone(),
        series,
        character: CharacterData::trivial(),
        ordering: OrderingFunctional::lexicographic(),
        low_rows,
    })
}

/// `ϑ(τ, z)` on `A₁`, weight ½ and index ½, by its Fourier series.
pub fn theta_odd(policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    theta_odd_from(policy, false)
}

/// `ϑ(τ, z)` on `A₁` by the triple product.
pub fn theta_odd_product(policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    theta_odd_from(policy, true)
}

fn theta_odd_from(policy: &TruncationPolicy, product: bool) -> Result<JacobiExpansion> {
    let l = a1_lattice();
    let ctx = Context::new(l.clone(), policy.specialization.clone());
    // the generator of A₁^∨ pairs to 1 with the root
    let ell2 = ctx.ell_of(&[2]);
    let series = if product {
        theta_pullback_product(&ctx, &ell2, policy.q_max24)?
    } else {
        theta_pullback_sum(&ctx, &ell2, policy.q_max24)?
    };
    Ok(JacobiExpansion {
        weight2: 1,
        index24: 12,
        lattice: l,
        series,
        character: CharacterData::new(3, true),
        ordering: OrderingFunctional::lexicographic(),
        low_rows: None,
    })
}

/// `φ₀ = ϑ_{N}/Δ` for a cusp lattice `N`, weight 0 and index 1, to `q <= q_max`.
pub fn weak_phi0(cusp: CuspLabel, policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    weak_phi0_with(cusp, policy, &EnumBudget::default())
}

pub fn weak_phi0_with(cusp: CuspLabel, policy: &TruncationPolicy, budget: &EnumBudget) -> Result<JacobiExpansion> {
    let (l, roots) = cusp_lattice(cusp)?;
    let q_max24 = 24 * policy.q_max24.div_euclid(24);
    let theta_policy = TruncationPolicy { q_max24: q_max24 + 24, s_max24: None, slope: 0, ..policy.clone() };
    let theta = theta_lattice_with(&l, &theta_policy, budget)?;
    let di: Series = delta_inverse(q_max24);
    let series = theta.series.mul(&di)?;
    let low_rows = if theta.low_rows.is_some() {
        let tally = cached_tally(&l, 2, None, budget)?;
        Some(theta_from_tally(&Context::full(&l), &tally, 24).mul(&delta_inverse(0))?)
    } else {
        None
    };
    Ok(JacobiExpansion {
        weight2: 0,
        index24: 24,
        lattice: l,
        series,
        character: CharacterData::trivial(),
        ordering: roots.ordering(),
        low_rows,
    })
}

/// Coefficients indexed by the hyperbolic norm `2nm − (ℓ,ℓ)` (times 24) and discriminant class.
fn norm_and_class(phi: &JacobiExpansion, key: &Key, classes: &crate::lattice::SmithForm) -> (BigRational, Vec<u64>) {
    let n = BigRational::new(BigInt::from(key.q24), BigInt::from(24));
    let m = BigRational::new(BigInt::from(phi.index24), BigInt::from(24));
    let norm = BigRational::from_integer(BigInt::from(2)) * n * m - phi.lattice.dual_norm2(&key.ell2);
    let pairing: Vec<i64> = key.ell2.iter().map(|v| v.div_euclid(2)).collect();
    (norm, classes.class_of(&pairing))
}

/// Checks that `f(n, ℓ)` depends only on the hyperbolic norm and the class of `ℓ` in `L^∨/L`.
pub fn theta_decomposition_check(phi: &JacobiExpansion) -> CheckReport {
    let mut report = CheckReport::new("theta-decomposition");
    if phi.index24 != 24 || phi.is_specialized() {
        report.status = Status::Skipped;
        report.detail("reason", "needs an unspecialized index-1 expansion");
        return report;
    }
    if phi.series.terms().any(|(k, _)| k.ell2.iter().any(|v| v % 2 != 0)) {
        report.fail(Witness::new("support", "ℓ outside L^∨", "index 1"));
        return report;
    }
    let classes = smith_normal_form(&phi.lattice);
    let mut groups: HashMap<(BigRational, Vec<u64>), (Key, BigRational)> = HashMap::new();
    let mut checked = 0usize;
    for (k, c) in phi.series.sorted_terms() {
        let g = norm_and_class(phi, k, &classes);
        match groups.get(&g) {
            Some((k0, c0)) => {
                checked += 1;
                if c0 != c && report.witnesses.len() < 8 {
                    report.fail(Witness::new(format!("{k0} vs {k}"), c0, c));
                }
            }
            None => {
                groups.insert(g, (k.clone(), c.clone()));
            }
        }
    }
    report.detail("groups", groups.len());
    report.detail("pairs_compared", checked);
    report
}

/// Checks `f(n, −ℓ) = ε f(n, ℓ)` with `ε = (−1)^k` for integral weight `k`,
/// and a uniform sign for half-integral weight.
pub fn symmetry_check(phi: &JacobiExpansion) -> CheckReport {
    let mut report = CheckReport::new("coefficient-symmetry");
    let expected = if phi.weight2 % 2 == 0 { Some(if (phi.weight2 / 2) % 2 == 0 { 1 } else { -1 }) } else { None };
    let mut seen: Option<i64> = expected;
    for (k, c) in phi.series.sorted_terms() {
        let neg = Key { s24: k.s24, q24: k.q24, ell2: k.ell2.iter().map(|v| -v).collect() };
        let other = phi.series.coefficient(&neg).unwrap_or_else(|_| BigRational::zero());
        let sign = if other == *c {
            1
        } else if other == -c.clone() {
            -1
        } else {
            0
        };
        match seen {
            Some(s) if s == sign => {}
            None if sign != 0 => seen = Some(sign),
            _ => {
                if report.witnesses.len() < 8 {
                    report.fail(Witness::new(k.to_string(), c, other));
                }
            }
        }
    }
    report.sign = seen;
    report
}
