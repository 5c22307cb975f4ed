use borcherds::borcherds::{corollary32_terms, product_direct, product_hecke, v_swap_check};
use borcherds::jacobi::{
    check_two_design, design_constants, hecke_vm, hecke_vm_substitution, symmetry_check, theta_block, theta_decomposition_check,
};
use borcherds::lift::{lattice_4a1, phi0_4a1, phi2_fourier, phi2_hecke, theta_4a1, verify_phi2};
use borcherds::series::{Key, TruncationPolicy};
use num_bigint::BigInt;
use num_rational::BigRational;

fn r(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rect(q_max24: i64, s_max24: i64) -> TruncationPolicy {
    TruncationPolicy { q_max24, s_max24: Some(s_max24), slope: 0, specialization: None }
}

#[test]
fn theta_4a1_leading_terms_and_symmetry() {
    let t = theta_4a1(&TruncationPolicy::q_only(3)).unwrap();
    assert_eq!((t.weight2, t.index24), (4, 12));
    assert_eq!(t.series.q_valuation(), Some(12));
    let lead: Vec<_> = t.series.terms().filter(|(k, _)| k.q24 == 12).collect();
    assert_eq!(lead.len(), 16);
    for (k, c) in lead {
        let negatives = k.ell2.iter().filter(|v| **v < 0).count() as i64;
        assert!(k.ell2.iter().all(|v| v.abs() == 1));
        assert_eq!(*c, r(if negatives % 2 == 0 { 1 } else { -1 }));
    }
    for (k, c) in t.series.terms() {
        let mut p = k.ell2.clone();
        p.swap(0, 3);
        assert_eq!(t.coefficient(k.q24, &p).unwrap(), *c);
    }
}

#[test]
fn phi0_4a1_zero_row_and_design() {
    let phi = phi0_4a1(&TruncationPolicy::q_only(2)).unwrap();
    let row = phi.zero_row().unwrap();
    let mut expect = vec![(vec![0, 0, 0, 0], r(4))];
    for i in 0..4 {
        for s in [2, -2] {
            let mut e = vec![0; 4];
            e[i] = s;
            expect.push((e, r(1)));
        }
    }
    expect.sort();
    assert_eq!(row, expect);
    assert!(phi.series.q_valuation().unwrap() >= 0);
    let l = lattice_4a1();
    for (k, _) in phi.series.terms() {
        let hyp = r(2 * k.q24 / 24) - l.dual_norm2(&k.ell2);
        assert!(hyp >= r(-2), "{k}");
    }
    let w = design_constants(&phi).unwrap();
    assert_eq!((w.a.clone(), w.c.clone()), (BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())));
    assert_eq!(w.b.pairing2, vec![1, 1, 1, 1]);
    assert!(check_two_design(&phi).unwrap().passed());
    assert!(theta_decomposition_check(&phi).passed());
    assert!(symmetry_check(&phi).passed());
}

#[test]
fn theta_block_of_phi0_is_theta_4a1() {
    let phi = phi0_4a1(&TruncationPolicy::q_only(0)).unwrap();
    let (block, _) = theta_block(&phi, &TruncationPolicy::q_only(4)).unwrap();
    let t = theta_4a1(&TruncationPolicy::q_only(4)).unwrap();
    assert_eq!(block.weight2, 4);
    assert_eq!(block.index24, 12);
    assert_eq!(block.series.precision(), t.series.precision());
    assert_eq!(block.series.first_difference(&t.series).unwrap(), None);
}

#[test]
fn hecke_forms_agree_on_4a1() {
    let t = theta_4a1(&TruncationPolicy::q_only(5)).unwrap();
    let a = hecke_vm(&t, 3).unwrap();
    let b = hecke_vm_substitution(&t, 3).unwrap();
    assert_eq!(a.series.first_difference(&b.series).unwrap(), None);
    let phi = phi0_4a1(&TruncationPolicy::q_only(3)).unwrap();
    for m in [2, 3] {
        let a = hecke_vm(&phi, m).unwrap();
        let b = hecke_vm_substitution(&phi, m).unwrap();
        assert!(!a.series.is_empty());
        assert_eq!(a.series.first_difference(&b.series).unwrap(), None);
    }
}

#[test]
fn phi2_fourier_coefficients() {
    let f = phi2_fourier(&rect(72, 36)).unwrap();
    assert_eq!(f.expansion.coefficient(&Key::new(12, &[1, 1, 1, 1], 12)).unwrap(), r(1));
    assert_eq!(f.expansion.coefficient(&Key::new(12, &[1, 1, 1, -1], 12)).unwrap(), r(-1));
    // 4·3·3 = 4·9: gcd 3 gives σ₁(3) = 4
    assert_eq!(f.expansion.coefficient(&Key::new(36, &[3, 3, 3, 3], 36)).unwrap(), r(4));
    assert_eq!(f.expansion.coefficient(&Key::new(36, &[5, 3, 1, 1], 36)).unwrap(), r(-1));
    assert_eq!(f.expansion.coefficient(&Key::new(12, &[3, 1, 1, 1], 36)).unwrap(), r(-1));
    assert_eq!(f.expansion.coefficient(&Key::new(24, &[1, 1, 1, 1], 12)).unwrap(), r(0));
    assert!(f.off_null_cone().is_empty());
    let slice = f.expansion.fj_slice(12).unwrap();
    let t = theta_4a1(&TruncationPolicy::q_only(3)).unwrap();
    assert_eq!(slice.first_difference(&t.series).unwrap(), None);
    let h = phi2_hecke(&rect(72, 36)).unwrap();
    assert_eq!(f.expansion.first_difference(&h.expansion).unwrap(), None);
}

#[test]
fn phi2_equals_product() {
    let rep = verify_phi2(&rect(72, 36)).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert_eq!(rep.sign, Some(1));
}

#[test]
fn product_routes_agree_on_4a1() {
    let policy = rect(96, 36);
    let phi = phi0_4a1(&TruncationPolicy::q_only(4)).unwrap();
    let direct = product_direct(&phi, &policy).unwrap();
    assert_eq!(direct.weight2, 4);
    assert_eq!(direct.character.v_swap_parity, Some(0));
    assert!(direct.character.heisenberg_binary);
    let hecke = product_hecke(&phi, &policy).unwrap();
    assert_eq!(direct.expansion.precision(), hecke.expansion.precision());
    assert_eq!(direct.expansion.first_difference(&hecke.expansion).unwrap(), None);
    let fj = corollary32_terms(&phi, &policy, 2).unwrap();
    assert_eq!(fj.slices.len(), 2);
    for (s24, slice) in &fj.slices {
        assert_eq!(slice.first_difference(&direct.expansion.fj_slice(*s24).unwrap()).unwrap(), None);
    }
    assert!(v_swap_check(&direct).unwrap().passed());
}

fn full_product() -> &'static borcherds::borcherds::BorcherdsProduct {
    static P: std::sync::OnceLock<borcherds::borcherds::BorcherdsProduct> = std::sync::OnceLock::new();
    P.get_or_init(|| {
        let phi = phi0_4a1(&TruncationPolicy::q_only(3)).unwrap();
        product_direct(&phi, &rect(72, 36)).unwrap()
    })
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

    #[test]
    fn specializing_commutes_with_the_product(u in proptest::collection::vec(-6i64..=6, 4)) {
        let phi = phi0_4a1(&TruncationPolicy::q_only(3)).unwrap();
        let policy = rect(72, 36).with_specialization(vec![u.clone()]);
        let direct = product_direct(&phi, &policy);
        // some factor's ℓ is orthogonal to u
        proptest::prop_assume!(direct.is_ok());
        let direct = direct.unwrap();
        let via_full = full_product().expansion.specialize(&[u]).unwrap();
        proptest::prop_assert_eq!(direct.expansion.first_difference(&via_full).unwrap(), None);
    }
}
