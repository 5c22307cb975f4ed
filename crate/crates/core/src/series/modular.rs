//! Dedekind eta and the discriminant function.

use num_bigint::BigInt;

use super::{Key, MultiSeries, Precision};
use crate::scalar::Coefficient;

/// Coefficients of `∏_{m>=1} (1 - q^m)` up to `q^n_max`, from Euler's pentagonal theorem.
fn pentagonal(n_max: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::from(0); n_max + 1];
    for k in 0i64.. {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if (e as usize) <= n_max {
                any = true;
                a[e as usize] += if kk % 2 == 0 { 1 } else { -1 };
            }
        }
        if !any {
            break;
        }
    }
    a
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
fn inverse_unit(a: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut b = vec![BigInt::from(0); n];
    b[0] = BigInt::from(1);
    for k in 1..n {
        let mut acc = BigInt::from(0);
        for j in 1..=k {
            acc -= &a[j] * &b[k - j];
        }
        b[k] = acc;
    }
    b
}

/// `∏ (1 - q^m)^e` up to `q^n_max`.
fn euler_power(e: i64, n_max: usize) -> Vec<BigInt> {
    let base = if e >= 0 { pentagonal(n_max) } else { inverse_unit(&pentagonal(n_max)) };
    let mut result = vec![BigInt::from(0); n_max + 1];
    result[0] = BigInt::from(1);
    let mut b = base;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            result = mul_trunc(&result, &b, n_max);
        }
        k >>= 1;
        if k > 0 {
            b = mul_trunc(&b, &b, n_max);
        }
    }
    result
}

/// `η^e = q^{e/24} ∏ (1 - q^m)^e`, known for `q24 <= q_max24`.
pub fn eta_power<C: Coefficient>(e: i64, q_max24: i64) -> MultiSeries<C> {
    let precision = Precision::q_bound(q_max24);
    let mut out = MultiSeries::zero(None, precision);
    if q_max24 < e {
        return out;
    }
    let n_max = ((q_max24 - e) / 24) as usize;
    for (n, c) in euler_power(e, n_max).into_iter().enumerate() {
        out.add_term(Key::scalar(e + 24 * n as i64, 0, 0), &C::from_bigint(c));
    }
    out
}

pub fn eta<C: Coefficient>(q_max24: i64) -> MultiSeries<C> {
    eta_power(1, q_max24)
}

pub fn delta<C: Coefficient>(q_max24: i64) -> MultiSeries<C> {
    eta_power(24, q_max24)
}

pub fn delta_inverse<C: Coefficient>(q_max24: i64) -> MultiSeries<C> {
    eta_power(-24, q_max24)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = MultiSeries<BigRational>;

    fn q(s: &S, n24: i64) -> i64 {
        s.coefficient_qs(n24, 0).unwrap().to_i64().unwrap()
    }

    /// Independent oracle: coefficients of `∏ (1 + q^m + q^{2m} + ...)^24` by naive expansion.
    fn p24_bruteforce(n_max: usize) -> Vec<i64> {
        let mut acc = vec![0i64; n_max + 1];
        acc[0] = 1;
        for m in 1..=n_max {
            for _ in 0..24 {
                let mut next = vec![0i64; n_max + 1];
                for (i, v) in acc.iter().enumerate() {
                    let mut j = i;
                    while j <= n_max {
                        next[j] += v;
                        j += m;
                    }
                }
                acc = next;
            }
        }
        acc
    }

    #[test]
    fn delta_coefficients() {
        let d: S = delta(24 * 5);
        assert_eq!(q(&d, 24), 1);
        assert_eq!(q(&d, 48), -24);
        assert_eq!(q(&d, 72), 252);
        assert_eq!(q(&d, 96), -1472);
        assert!(d.coefficient_qs(24 * 6, 0).is_err());
    }

    #[test]
    fn eta_24th_power_is_delta() {
        let e: S = eta(24 * 6);
        let e24 = e.pow(24).unwrap();
        let d: S = delta(24 * 6);
        assert!(e24.agrees_with(&d).unwrap());
        assert_eq!(e24.precision().grade_max, Some(24 * 6 + 23));
    }

    #[test]
    fn delta_inverse_matches_partition_oracle() {
        let di: S = delta_inverse(24 * 6);
        let oracle = p24_bruteforce(7);
        assert_eq!(&oracle[..4], &[1, 24, 324, 3200]);
        for n in 0..=7 {
            assert_eq!(q(&di, 24 * (n as i64 - 1)), oracle[n]);
        }
        let one = di.mul(&delta(24 * 6)).unwrap();
        assert!(one.agrees_with(&S::one(None)).unwrap());
        assert_eq!(one.precision().grade_max, Some(24 * 5));
    }
}
