//! The index-raising Hecke operators `V_m = m⁻¹ T₋(m)`.
//!
//! Exponents are read on the grid of the form: `q`-exponents are multiples of
//! `q_unit / 24`. For products of odd thetas the grid is `q ∈ ½Z` with odd
//! keys, and the translation `τ ↦ τ + 2` plays the role of `τ ↦ τ + 1`.

use num_rational::BigRational;

use super::JacobiExpansion;
use crate::error::{Error, Result};
use crate::scalar::Coefficient;
use crate::series::{Key, Precision};
use crate::Series;

struct Grid {
    q_unit: i64,
}

fn grid_of(phi: &JacobiExpansion) -> Result<Grid> {
    if phi.is_specialized() {
        return Err(Error::Unsupported("Hecke operators need unspecialized keys (divisibility of ℓ)".into()));
    }
    if phi.weight2 % 2 != 0 {
        return Err(Error::Unsupported("Hecke operators for half-integral weight".into()));
    }
    if phi.series.terms().any(|(k, _)| k.s24 != 0) {
        return Err(Error::InvalidArgument("Hecke operators act on s-free series".into()));
    }
    let q_unit = if phi.series.terms().all(|(k, _)| k.q24 % 24 == 0) {
        24
    } else if phi.series.terms().all(|(k, _)| k.q24 % 12 == 0) {
        12
    } else {
        return Err(Error::Unsupported("q-exponents outside ½Z".into()));
    };
    Ok(Grid { q_unit })
}

fn weight_factor(d: i64, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_i64(d.pow(exp as u32))
    } else {
        BigRational::from_ratio(1, d.pow((-exp) as u32)).expect("nonzero")
    }
}

/// Output precision: grid index `n <= floor(N_max / m)`.
fn output_precision(phi: &JacobiExpansion, grid: &Grid, m: i64) -> Precision {
    match phi.series.precision().grade_max {
        Some(g) => Precision::q_bound(g.div_euclid(grid.q_unit).div_euclid(m) * grid.q_unit),
        None => Precision::exact(),
    }
}

fn with_series(phi: &JacobiExpansion, m: i64, series: Series) -> JacobiExpansion {
    JacobiExpansion { index24: phi.index24 * m, series, low_rows: None, ..phi.clone() }
}

/// `c′(n, ℓ) = Σ_{d | (n, ℓ, m)} d^{k−1} f(nm/d², ℓ/d)`.
pub fn hecke_vm(phi: &JacobiExpansion, m: u32) -> Result<JacobiExpansion> {
    let m = i64::from(m);
    if m < 1 {
        return Err(Error::InvalidArgument("V_m needs m >= 1".into()));
    }
    let grid = grid_of(phi)?;
    let k = phi.weight2 / 2;
    let precision = output_precision(phi, &grid, m);
    let divisors: Vec<i64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut out = Series::zero(phi.series.context().cloned(), precision);
    // each source term f(N, λ) feeds the outputs n = N d²/m, ℓ = d λ with d | m and d | n
    for (key, f) in phi.series.terms() {
        let big_n = key.q24 / grid.q_unit;
        for &d in &divisors {
            if (big_n * d) % m != 0 {
                continue;
            }
            let n = big_n * d * d / m;
            let ell2 = key.ell2.iter().map(|v| v * d).collect();
            let out_key = Key { s24: 0, q24: n * grid.q_unit, ell2 };
            out.add_term(out_key, &f.mul_ref(&weight_factor(d, k - 1)));
        }
    }
    Ok(with_series(phi, m, out))
}

/// `m^{k−1} Σ_{ad = m} d^{−k} Σ_{b mod d} φ((aτ + t b)/d, a z)` with `t` the
/// period of the grid; the `b`-sum of `e^{2πi N t b / d}` is `d` when `d | N`
/// (in grid units) and `0` otherwise.
pub fn hecke_vm_substitution(phi: &JacobiExpansion, m: u32) -> Result<JacobiExpansion> {
    let m = i64::from(m);
    if m < 1 {
        return Err(Error::InvalidArgument("V_m needs m >= 1".into()));
    }
    let grid = grid_of(phi)?;
    let k = phi.weight2 / 2;
    let precision = output_precision(phi, &grid, m);
    let mut out = Series::zero(phi.series.context().cloned(), precision);
    for a in 1..=m {
        if m % a != 0 {
            continue;
        }
        let d = m / a;
        // m^{k-1} d^{-k} · d
        let factor = weight_factor(m, k - 1) * weight_factor(d, 1 - k);
        for (key, f) in phi.series.terms() {
            let big_n = key.q24 / grid.q_unit;
            if big_n % d != 0 {
                continue;
            }
            let out_key = Key { s24: 0, q24: key.q24 / d * a, ell2: key.ell2.iter().map(|v| v * a).collect() };
            out.add_term(out_key, &f.mul_ref(&factor));
        }
    }
    Ok(with_series(phi, m, out))
}
