//! Weyl vector data of a weight-0 form and the two-design identity of its `q⁰` row.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::JacobiExpansion;
use crate::error::{Error, Result};
use crate::lattice::{ideal_generators, DualVector, Lattice};
use crate::report::{CheckReport, Witness};
use crate::scalar::{sigma, Coefficient};

/// Leading exponents `q^A r^B s^C` of the Borcherds product of a form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylData {
    pub a: BigRational,
    pub b: DualVector,
    pub c: BigRational,
}

impl WeylData {
    /// Whether `C n(L) ∈ 2Z` forces `C s(L) ∈ Z` and `B ∈ L^∨`, as it must.
    pub fn integrality_law_holds(&self, lattice: &Lattice) -> bool {
        let (s, n) = ideal_generators(lattice);
        let cn = &self.c * BigRational::from_i64(n);
        if !(cn.is_integer() && cn.to_integer() % 2 == BigInt::zero()) {
            return true;
        }
        (&self.c * BigRational::from_i64(s)).is_integer() && self.b.is_in_dual()
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_i64(v)
}

fn require_weight0_index1(phi: &JacobiExpansion) -> Result<()> {
    if phi.weight2 != 0 || phi.index24 != 24 {
        return Err(Error::InvalidArgument(format!(
            "expected weight 0 and index 1, got weight2 {} index24 {}",
            phi.weight2, phi.index24
        )));
    }
    Ok(())
}

/// `A = Σ f(0,ℓ)/24`, `B = ½ Σ_{ℓ>0} f(0,ℓ) ℓ`, `C = Σ f(0,ℓ)(ℓ,ℓ) / (2 rank)`.
pub fn design_constants(phi: &JacobiExpansion) -> Result<WeylData> {
    require_weight0_index1(phi)?;
    let row = phi.zero_row()?;
    let rank = phi.lattice.rank();
    let mut a = BigRational::zero();
    let mut c = BigRational::zero();
    let mut b2 = vec![BigRational::zero(); rank];
    for (p2, f) in &row {
        a += f;
        c += f * phi.lattice.dual_norm2(p2);
        if let Some(true) = phi.ordering.is_positive(p2) {
            for (acc, v) in b2.iter_mut().zip(p2) {
                *acc += f * rat(*v);
            }
        }
    }
    a /= rat(24);
    c /= rat(2 * rank as i64);
    // pairing2(B) = ½ Σ f pairing2(ℓ)
    let mut pairing2 = Vec::with_capacity(rank);
    for v in b2 {
        let half = v / rat(2);
        if !half.is_integer() {
            return Err(Error::InvalidArgument("Weyl vector B is not in ½L^∨ (non-integral q⁰ row?)".into()));
        }
        pairing2.push(i64::try_from(half.to_integer()).map_err(|_| Error::Unsupported("Weyl vector too large".into()))?);
    }
    Ok(WeylData { a, b: DualVector { pairing2 }, c })
}

/// `C = Σ f(0,ℓ)/24 − Σ_{n>0,ℓ} f(−n,ℓ) σ₁(n)`, from the polar part.
pub fn polar_c(phi: &JacobiExpansion) -> Result<BigRational> {
    require_weight0_index1(phi)?;
    let rows = phi.full_low_rows()?;
    let mut c = BigRational::zero();
    for (k, f) in rows.terms() {
        if k.q24 == 0 {
            c += f / rat(24);
        } else if k.q24 < 0 {
            if k.q24 % 24 != 0 {
                return Err(Error::InvalidArgument("index-1 form with non-integral q-exponent".into()));
            }
            let n = (-k.q24 / 24) as u64;
            c -= f * BigRational::from_integer(sigma(1, n));
        }
    }
    Ok(c)
}

/// Verifies `Σ_{ℓ>0} f(0,ℓ) (Gℓ)(Gℓ)ᵀ = C·G` and that both expressions for `C` agree.
pub fn check_two_design(phi: &JacobiExpansion) -> Result<CheckReport> {
    let weyl = design_constants(phi)?;
    let c2 = polar_c(phi)?;
    let mut report = CheckReport::new("two-design");
    report.detail("C", &weyl.c);
    report.detail("C_polar", &c2);
    report.detail("A", &weyl.a);
    report.require(weyl.c == c2, || Witness::new("C", &weyl.c, &c2));
    let n = phi.lattice.rank();
    // (Gℓ)_i = pairing2_i / 2
    let mut lhs = vec![BigRational::zero(); n * n];
    for (p2, f) in phi.zero_row()? {
        if phi.ordering.is_positive(&p2) != Some(true) {
            continue;
        }
        for i in 0..n {
            if p2[i] == 0 {
                continue;
            }
            for j in 0..n {
                if p2[j] != 0 {
                    lhs[i * n + j] += &f * BigRational::new(BigInt::from(p2[i] * p2[j]), BigInt::from(4));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let rhs = &weyl.c * rat(phi.lattice.entry(i, j));
            let l = &lhs[i * n + j];
            if *l != rhs && report.witnesses.len() < 8 {
                report.fail(Witness::new(format!("G[{i}][{j}]"), l, &rhs));
            }
        }
    }
    let law = weyl.integrality_law_holds(&phi.lattice);
    report.require(law, || Witness::new("integrality law", "C n(L) ∈ 2Z", "B ∉ L^∨ or C s(L) ∉ Z"));
    Ok(report)
}
