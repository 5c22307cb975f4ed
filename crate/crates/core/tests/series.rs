use borcherds::lattice::{direct_sum, root_lattice, Family, Lattice};
use borcherds::series::{Context, Key, MultiSeries, Precision};
use borcherds::{Error, Series};
use num_rational::BigRational;
use proptest::prelude::*;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn four_a1() -> Lattice {
    let a1 = root_lattice(Family::A, 1).unwrap();
    direct_sum(&[a1.clone(), a1.clone(), a1.clone(), a1]).unwrap()
}

fn a2() -> Lattice {
    root_lattice(Family::A, 2).unwrap()
}

/// Random series in q, two r-variables (A2 context) and s.
fn arb_series() -> impl Strategy<Value = Series> {
    prop::collection::vec(((0i64..4), (-2i64..3), (-2i64..3), (0i64..3), (-5i64..6)), 0..8).prop_map(|terms| {
        let ctx = Context::full(&a2());
        let p = Precision { s_max24: Some(48), grade_max: Some(24 * 4), slope: 1, s_floor: 0 };
        MultiSeries::from_terms(
            Some(ctx),
            p,
            terms.into_iter().map(|(q, a, b, s, c)| (Key::new(24 * q, &[2 * a, 2 * b], 24 * s), r(c))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.agrees_with(&b.mul(&a).unwrap()).unwrap());
        let l = ab.mul(&c).unwrap();
        let rr = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(l.agrees_with(&rr).unwrap());
        let d1 = a.mul(&b.add(&c).unwrap()).unwrap();
        let d2 = ab.add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(d1.agrees_with(&d2).unwrap());
    }

    #[test]
    fn specialize_is_homomorphism(a in arb_series(), b in arb_series()) {
        let u = vec![vec![1, 2]];
        let lhs = a.mul(&b).unwrap().specialize(&u).unwrap();
        let rhs = a.specialize(&u).unwrap().mul(&b.specialize(&u).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn exp_log_inverse(a in arb_series()) {
        // x = s * a has positive s-valuation
        let x = a.shift(0, &[], 24);
        let e = x.exp_series().unwrap();
        let back = e.sub(&Series::one(None)).unwrap().assume_s_floor(24).unwrap().log1p_series().unwrap();
        prop_assert!(back.agrees_with(&x).unwrap());
        let l = x.log1p_series().unwrap().exp_series().unwrap();
        prop_assert!(l.agrees_with(&x.add(&Series::one(None)).unwrap()).unwrap());
    }

    #[test]
    fn divide_product(a in arb_series(), b in arb_series()) {
        let a0 = a.fj_slice(0).unwrap();
        let b0 = b.fj_slice(0).unwrap();
        prop_assume!(!b0.is_empty());
        let prod = a0.mul(&b0).unwrap();
        let q = prod.exact_div(&b0).unwrap();
        prop_assert!(q.agrees_with(&a0).unwrap());
    }
}

#[test]
fn unit_and_zero() {
    let x = Series::monomial(Some(Context::full(&a2())), 24, &[2, 0], 0, r(3));
    assert_eq!(Series::one(None).mul(&x).unwrap(), x);
    assert!(x.mul(&Series::zero(None, Precision::exact())).unwrap().is_empty());
}

#[test]
fn coefficient_outside_truncation_is_an_error() {
    let d: Series = borcherds::series::delta(48);
    assert_eq!(d.coefficient_qs(24, 0).unwrap(), r(1));
    assert_eq!(d.coefficient_qs(36, 0).unwrap(), r(0));
    assert!(matches!(d.coefficient_qs(72, 0), Err(Error::OutsideTruncation(_))));
}

#[test]
fn exp_of_log_series_is_geometric() {
    // exp(sum_{e>=1} s^e / e) = 1 / (1 - s)
    let p = Precision { s_max24: Some(24 * 5), grade_max: None, slope: 0, s_floor: 24 };
    let x = Series::from_terms(None, p, (1..=5).map(|e| (Key::scalar(0, 24 * e, 0), BigRational::new(1.into(), e.into()))));
    let g = x.exp_series().unwrap();
    for e in 0..=5 {
        assert_eq!(g.coefficient_qs(0, 24 * e).unwrap(), r(1));
    }
}

#[test]
fn exp_log_toy_from_contract() {
    // x = -q^{-1} s - 24 s with slope 1 so the pole is harmless
    let p = Precision { s_max24: Some(72), grade_max: Some(72), slope: 1, s_floor: 24 };
    let x = Series::from_terms(None, p, [(Key::scalar(-24, 24, 0), r(-1)), (Key::scalar(0, 24, 0), r(-24))]);
    let y = x.exp_series().unwrap().sub(&Series::one(None)).unwrap().assume_s_floor(24).unwrap().log1p_series().unwrap();
    assert!(y.agrees_with(&x).unwrap());
    assert!(Series::one(None).exp_series().is_err());
}

#[test]
fn laurent_division_and_failure() {
    let ctx = Some(Context::full(&four_a1()));
    let p = Precision::q_bound(48);
    let r1 = Series::from_terms(ctx.clone(), p, [(Key::new(0, &[4, 0, 0, 0], 0), r(1))]);
    let r12 = Series::from_terms(ctx.clone(), p, [(Key::new(0, &[4, 0, 0, 0], 0), r(1)), (Key::new(0, &[0, 4, 0, 0], 0), r(1))]);
    assert!(matches!(r1.exact_div(&r12), Err(Error::NonDivisible(_))));
    // (r1 - r2)(r1 + r2) / (r1 + r2) = r1 - r2
    let r1m = Series::from_terms(ctx, p, [(Key::new(0, &[4, 0, 0, 0], 0), r(1)), (Key::new(0, &[0, 4, 0, 0], 0), r(-1))]);
    let q = r1m.mul(&r12).unwrap().exact_div(&r12).unwrap();
    assert!(q.agrees_with(&r1m).unwrap());
}

#[test]
fn specialize_symmetric_pair() {
    let l = root_lattice(Family::A, 1).unwrap();
    let ctx = Some(Context::full(&l));
    // v = the root, pairing (v, v) = 2, doubled pairing vector 4
    let x = Series::from_terms(ctx, Precision::exact(), [(Key::new(0, &[4], 0), r(1)), (Key::new(0, &[-4], 0), r(1))]);
    let y = x.specialize(&[vec![1]]).unwrap();
    // ζ^{±2}, doubled exponents ±4
    assert_eq!(y.coefficient(&Key::new(0, &[4], 0)).unwrap(), r(1));
    assert_eq!(y.coefficient(&Key::new(0, &[-4], 0)).unwrap(), r(1));
    assert_eq!(Series::one(None).specialize(&[vec![1]]).unwrap(), Series::one(None));
}
