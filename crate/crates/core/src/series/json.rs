//! JSON form of a series. Terms are sorted by `s24`, then `q24`, then the
//! `ell` array; rationals are written as `"n"` or `"n/d"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{MultiSeries, Precision};
use crate::scalar::Coefficient;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub numerator: String,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub q24: i64,
    /// Coordinates of `ℓ` in the lattice basis, or the pairings `(ℓ, u_j)` when specialized.
    pub ell: Vec<String>,
    pub s24: i64,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub lattice_digest: Option<String>,
    pub rank: Option<usize>,
    pub specialization: Option<Vec<Vec<i64>>>,
    pub precision: Precision,
    pub terms: Vec<TermJson>,
}

pub(crate) fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn half(v: i64) -> BigRational {
    BigRational::new(BigInt::from(v), BigInt::from(2))
}

impl<C: Coefficient> MultiSeries<C> {
    pub fn to_json(&self) -> SeriesJson {
        let mut rows: Vec<(i64, i64, Vec<BigRational>, BigRational)> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let ell = match &self.ctx {
                    None => Vec::new(),
                    Some(ctx) if ctx.specialization.is_some() => k.ell2.iter().map(|&v| half(v)).collect(),
                    Some(ctx) => crate::lattice::DualVector { pairing2: k.ell2.to_vec() }.coords(&ctx.lattice),
                };
                (k.s24, k.q24, ell, c.to_rational())
            })
            .collect();
        rows.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        SeriesJson {
            lattice_digest: self.ctx.as_ref().map(|c| c.lattice.digest()),
            rank: self.ctx.as_ref().map(|c| c.lattice.rank()),
            specialization: self.ctx.as_ref().and_then(|c| c.specialization.clone()),
            precision: self.precision,
            terms: rows
                .into_iter()
                .map(|(s24, q24, ell, c)| TermJson {
                    q24,
                    ell: ell.iter().map(rational_string).collect(),
                    s24,
                    coeff: CoeffJson { numerator: c.numer().to_string(), denominator: c.denom().to_string() },
                })
                .collect(),
        }
    }
}
