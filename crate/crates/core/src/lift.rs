//! The `4A₁` example: `ϑ_{4A₁} = ϑ(τ,z₁)···ϑ(τ,z₄)`, its additive lift `Φ₂`
//! and the weak form `φ₀,4A₁ = −ϑ_{4A₁}|V₃ / ϑ_{4A₁}` whose Borcherds product is `Φ₂`.
//!
//! Keys on `4A₁ = A₁⁴` (Gram `2I`): the doubled pairing of `ℓ` with the `i`-th
//! root is `2lᵢ`, so `r_i` is `ℓ = αᵢ/2` with key `2eᵢ` and `(ℓ,ℓ) = Σ (2lᵢ)²/8`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::borcherds::{product_direct, v_swap_check};
use crate::error::{Error, Result};
use crate::jacobi::{hecke_vm, theta_pullback_sum, CharacterData, JacobiExpansion};
use crate::lattice::{direct_sum, root_lattice, Family, Lattice, OrderingFunctional};
use crate::report::{CheckReport, Witness};
use crate::scalar::{kronecker_minus4, sigma, Coefficient};
use crate::series::{Context, Key, Precision, TruncationPolicy};
use crate::Series;

/// A modular form for the `4A₁` cusp, given by its expansion there.
#[derive(Clone, Debug)]
pub struct LiftExpansion {
    pub expansion: Series,
    pub weight2: i64,
    pub character: CharacterData,
}

impl LiftExpansion {
    /// Keys off the null cone `2nm = (ℓ,ℓ)` carrying a nonzero coefficient.
    pub fn off_null_cone(&self) -> Vec<Key> {
        let l = lattice_4a1();
        self.expansion
            .sorted_terms()
            .into_iter()
            .filter(|(k, _)| {
                let nm = BigRational::new(BigInt::from(k.q24 * k.s24), BigInt::from(24 * 24));
                nm * BigRational::from_i64(2) != l.dual_norm2(&k.ell2)
            })
            .map(|(k, _)| k.clone())
            .collect()
    }
}

pub fn lattice_4a1() -> Lattice {
    let a1 = root_lattice(Family::A, 1).expect("A1");
    direct_sum(&[a1.clone(), a1.clone(), a1.clone(), a1]).expect("4A1")
}

fn context_4a1() -> Arc<Context> {
    Context::full(&lattice_4a1())
}

fn q24_policy(q_max24: i64) -> TruncationPolicy {
    TruncationPolicy { q_max24, s_max24: None, slope: 0, specialization: None }
}

fn unit(i: usize, v: i64) -> Vec<i64> {
    let mut e = vec![0; 4];
    e[i] = v;
    e
}

/// `ϑ(τ,z₁)···ϑ(τ,z₄)`: weight 2, index ½, character `v_η¹²` times the Heisenberg sign.
pub fn theta_4a1(policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    let ctx = context_4a1();
    let q = policy.q_max24;
    let mut acc = Series::one(Some(ctx.clone())).truncate(&Precision::q_bound(q))?;
    for i in 0..4 {
        let f: Series = theta_pullback_sum(&ctx, &unit(i, 2), q - 9)?;
        acc = acc.mul(&f)?;
    }
    Ok(JacobiExpansion {
        weight2: 4,
        index24: 12,
        lattice: lattice_4a1(),
        series: acc.truncate(&Precision::q_bound(q))?,
        character: CharacterData::new(12, true),
        ordering: OrderingFunctional::lexicographic(),
        low_rows: None,
    })
}

/// `φ₀,4A₁ = −(ϑ_{4A₁}|V₃)/ϑ_{4A₁}` to `q <= policy.q_max`.
pub fn phi0_4a1(policy: &TruncationPolicy) -> Result<JacobiExpansion> {
    let q = 24 * policy.q_max24.div_euclid(24);
    // numerator to q + 1/2, denominator likewise (valuation 1/2, quotient valuation 0)
    let need = q + 12;
    let theta = theta_4a1(&q24_policy(3 * need + 36))?;
    let num = hecke_vm(&theta, 3)?;
    let num = num.series.truncate(&Precision::q_bound(need))?;
    let den = theta.series.truncate(&Precision::q_bound(need))?;
    let series = num.exact_div(&den)?.neg();
    if series.precision().grade_max.is_some_and(|g| g < q) {
        return Err(Error::InsufficientSourceOrder {
            q24: q,
            deficiency: format!("{:?}", series.precision().grade_max),
            detail: "quotient window".into(),
        });
    }
    Ok(JacobiExpansion {
        weight2: 0,
        index24: 24,
        lattice: lattice_4a1(),
        series: series.truncate(&Precision::q_bound(q))?,
        character: CharacterData::trivial(),
        ordering: OrderingFunctional::lexicographic(),
        low_rows: None,
    })
}

fn lift_window(policy: &TruncationPolicy) -> Result<(i64, i64)> {
    let s = policy.s_max24.ok_or_else(|| Error::InvalidArgument("the lift needs an s bound".into()))?;
    if policy.slope != 0 || policy.specialization.is_some() {
        return Err(Error::Unsupported("the lift is expanded on rectangular unspecialized windows".into()));
    }
    Ok((policy.q_max24, s))
}

fn lift_of(expansion: Series) -> LiftExpansion {
    LiftExpansion { expansion, weight2: 4, character: CharacterData::new(12, true) }
}

/// All `x ∈ Zⁿ` with odd entries and `Σ xᵢ² = t`.
fn odd_vectors(t: i64, n: usize) -> Vec<Vec<i64>> {
    if n == 0 {
        return if t == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut x = 1i64;
    while x * x <= t {
        for rest in odd_vectors(t - x * x, n - 1) {
            for s in [x, -x] {
                let mut v = vec![s];
                v.extend_from_slice(&rest);
                out.push(v);
            }
        }
        x += 2;
    }
    out
}

/// `Φ₂ = Σ σ₁(gcd(n, 2l, m)) ∏ (−4/2lᵢ) q^{n/2} r^ℓ s^{m/2}` over `4nm = Σ (2lᵢ)²`.
/// Only odd `2lᵢ` contribute, which forces `n` and `m` odd.
pub fn phi2_fourier(policy: &TruncationPolicy) -> Result<LiftExpansion> {
    let (q_max24, s_max24) = lift_window(policy)?;
    let ctx = context_4a1();
    let mut out = Series::zero(Some(ctx), policy.precision());
    let mut n = 1i64;
    while 12 * n <= q_max24 {
        let mut m = 1i64;
        while 12 * m <= s_max24 {
            for v in odd_vectors(4 * n * m, 4) {
                let g = v.iter().fold(n.gcd(&m), |a, x| a.gcd(x));
                let sign: i64 = v.iter().map(|x| kronecker_minus4(*x)).product();
                let c = BigRational::from_integer(sigma(1, g as u64) * sign);
                out.add_term(Key::new(12 * n, &v, 12 * m), &c);
            }
            m += 2;
        }
        n += 2;
    }
    Ok(lift_of(out))
}

/// `Σ_{m odd} (ϑ_{4A₁}|V_m) s^{m/2}`, the lift written with Hecke operators.
pub fn phi2_hecke(policy: &TruncationPolicy) -> Result<LiftExpansion> {
    let (q_max24, s_max24) = lift_window(policy)?;
    let ctx = context_4a1();
    let mut out = Series::zero(Some(ctx), policy.precision());
    let mut m = 1i64;
    while 12 * m <= s_max24 {
        let theta = theta_4a1(&q24_policy(m * (q_max24 + 12)))?;
        let v = hecke_vm(&theta, m as u32)?;
        if v.q_max24().is_some_and(|g| g < q_max24) {
            return Err(Error::InsufficientSourceOrder {
                q24: q_max24,
                deficiency: format!("{:?}", v.q_max24()),
                detail: "V_m image".into(),
            });
        }
        for (k, c) in v.series.terms() {
            if k.q24 <= q_max24 {
                out.add_term(Key { s24: 12 * m, ..k.clone() }, c);
            }
        }
        m += 2;
    }
    Ok(lift_of(out))
}

/// `Φ₂` as an additive lift against the Borcherds product of `φ₀,4A₁`.
pub fn verify_phi2(policy: &TruncationPolicy) -> Result<CheckReport> {
    let mut report = CheckReport::new("phi2-identity").with_policy(policy);
    let fourier = report.timed("fourier", || phi2_fourier(policy))?;
    let hecke = report.timed("hecke", || phi2_hecke(policy))?;
    if let Some(d) = fourier.expansion.first_difference(&hecke.expansion)? {
        report.fail(Witness::from_difference(&d));
    }
    let off = fourier.off_null_cone();
    report.require(off.is_empty(), || Witness::new("null cone", off[0].to_string(), "2nm = (l,l)"));

    let q_src = policy.q_max24.div_euclid(24) + 1;
    let phi = report.timed("source", || phi0_4a1(&TruncationPolicy::q_only(q_src)))?;
    let product = report.timed("product", || product_direct(&phi, policy))?;
    let lead = fourier.expansion.sorted_terms().first().map(|(k, c)| ((*k).clone(), (*c).clone()));
    let (key, c) = lead.ok_or_else(|| Error::OutsideTruncation("empty window".into()))?;
    let scalar = product.expansion.coefficient(&key)? / c;
    report.detail("scalar", &scalar);
    report.sign = Coefficient::to_i64(&scalar);
    let scaled = fourier.expansion.scale(&scalar);
    if let Some(d) = product.expansion.first_difference(&scaled)? {
        report.fail(Witness::from_difference(&d));
    }
    report.detail("terms", fourier.expansion.len());
    let swap = v_swap_check(&product)?;
    report.detail("v_swap", format!("{:?}", swap.status));
    report.require(swap.passed(), || Witness::new("v-swap", "symmetric", "asymmetric"));
    Ok(report)
}
