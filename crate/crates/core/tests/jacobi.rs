use borcherds::jacobi::{
    affine_denominator, check_two_design, design_constants, hecke_vm, hecke_vm_substitution, polar_c, symmetry_check,
    theta_block, theta_decomposition_check, theta_lattice, theta_odd, theta_odd_product, weak_phi0,
};
use borcherds::lattice::{cusp_lattice, niemeier, root_lattice, CuspLabel, DualVector, Family};
use borcherds::series::{delta, Key, TruncationPolicy};
use borcherds::Series;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

fn r(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[test]
fn theta_odd_sum_equals_product() {
    for q in [0, 1, 3, 10] {
        let p = TruncationPolicy::q_only(q);
        let a = theta_odd(&p).unwrap();
        let b = theta_odd_product(&p).unwrap();
        assert_eq!(a.series.first_difference(&b.series).unwrap(), None, "q <= {q}");
        assert_eq!(a.series.precision(), b.series.precision());
    }
}

#[test]
fn theta_odd_leading_terms() {
    let t = theta_odd(&TruncationPolicy::q_only(6)).unwrap();
    assert_eq!((t.weight2, t.index24), (1, 12));
    assert_eq!(t.coefficient(3, &[1]).unwrap(), r(1));
    assert_eq!(t.coefficient(3, &[-1]).unwrap(), r(-1));
    for (k, _) in t.series.terms() {
        assert!(k.ell2[0] % 2 != 0, "even n at {k}");
    }
    assert_eq!(t.coefficient(27, &[3]).unwrap(), r(-1));
}

#[test]
fn lattice_theta_series() {
    let (n24a1, _) = niemeier(CuspLabel::A1x24).unwrap();
    let t = theta_lattice(&n24a1, &TruncationPolicy::q_only(1)).unwrap();
    assert_eq!(t.coefficient(0, &[0; 24]).unwrap(), r(1));
    assert_eq!(t.series.terms().filter(|(k, _)| k.q24 == 24).count(), 48);
    assert!(t.series.terms().all(|(_, c)| c.is_one()));
    let (leech, _) = cusp_lattice(CuspLabel::Leech).unwrap();
    let t = theta_lattice(&leech, &TruncationPolicy::q_only(1)).unwrap();
    assert_eq!(t.series.len(), 1);
    assert!(theta_lattice(&root_lattice(Family::A, 2).unwrap(), &TruncationPolicy::q_only(1)).is_err());
}

#[test]
fn weak_phi0_for_24a1() {
    let phi = weak_phi0(CuspLabel::A1x24, &TruncationPolicy::q_only(0)).unwrap();
    let zero = [0i64; 24];
    assert_eq!(phi.coefficient(-24, &zero).unwrap(), r(1));
    assert_eq!(phi.coefficient(0, &zero).unwrap(), r(24));
    let (l, roots) = niemeier(CuspLabel::A1x24).unwrap();
    for v in &roots.all_roots {
        let p2 = DualVector::from_lattice_vector(&l, v).pairing2;
        assert_eq!(phi.coefficient(0, &p2).unwrap(), r(1));
    }
    assert_eq!(phi.series.len(), 1 + 1 + 48);
    for (k, c) in phi.series.terms() {
        let hyp = r(2 * k.q24 / 24) - l.dual_norm2(&k.ell2);
        assert!(hyp >= r(-2));
        if hyp == r(-2) {
            assert!(c.is_one());
        }
    }
    assert!(theta_decomposition_check(&phi).passed());
    assert!(symmetry_check(&phi).passed());
}

#[test]
fn leech_phi0_and_design_constants() {
    let phi = weak_phi0(CuspLabel::Leech, &TruncationPolicy::q_only(0)).unwrap();
    let row = phi.zero_row().unwrap();
    assert_eq!(row, vec![(vec![0; 24], r(24))]);
    let w = design_constants(&phi).unwrap();
    assert_eq!((w.a.clone(), w.c.clone()), (r(1), r(0)));
    assert_eq!(w.b, DualVector::zero(24));
    assert_eq!(polar_c(&phi).unwrap(), r(0));
    assert!(check_two_design(&phi).unwrap().passed());
}

#[test]
fn design_constants_for_24a1_give_rho() {
    let phi = weak_phi0(CuspLabel::A1x24, &TruncationPolicy::q_only(0)).unwrap();
    let w = design_constants(&phi).unwrap();
    assert_eq!(w.a, r(3));
    assert_eq!(w.c, r(2));
    let (l, roots) = niemeier(CuspLabel::A1x24).unwrap();
    assert_eq!(w.b, roots.rho(&l));
    let rep = check_two_design(&phi).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn corrupted_table_violates_norm_dependence() {
    let mut phi = weak_phi0(CuspLabel::A1x24, &TruncationPolicy::q_only(0)).unwrap();
    let (l, roots) = niemeier(CuspLabel::A1x24).unwrap();
    let p2 = DualVector::from_lattice_vector(&l, &roots.all_roots[0]).pairing2;
    phi.series.add_term(Key::new(0, &p2, 0), &r(5));
    assert!(!theta_decomposition_check(&phi).passed());
    assert!(!symmetry_check(&phi).passed());
}

#[test]
fn hecke_forms_agree_on_e8_theta() {
    let e8 = root_lattice(Family::E, 8).unwrap();
    let th = theta_lattice(&e8, &TruncationPolicy::q_only(3)).unwrap();
    let v1 = hecke_vm(&th, 1).unwrap();
    assert_eq!(v1.series.first_difference(&th.series).unwrap(), None);
    for m in [2, 3] {
        let a = hecke_vm(&th, m).unwrap();
        let b = hecke_vm_substitution(&th, m).unwrap();
        assert_eq!(a.index24, 24 * m as i64);
        assert_eq!(a.series.precision().grade_max, Some(24 * (3 / m as i64)));
        assert_eq!(a.series.first_difference(&b.series).unwrap(), None);
        assert!(!a.series.is_empty());
    }
}

#[test]
fn theta_block_of_leech_is_delta() {
    let phi = weak_phi0(CuspLabel::Leech, &TruncationPolicy::q_only(0)).unwrap();
    let (block, _) = theta_block(&phi, &TruncationPolicy::q_only(4)).unwrap();
    assert_eq!(block.weight2, 24);
    let d: Series = delta(96);
    let d = d.with_context(block.series.context().unwrap().clone()).unwrap();
    assert_eq!(block.series.first_difference(&d).unwrap(), None);
}

#[test]
fn theta_block_equals_affine_denominator_24a1() {
    let (l, roots) = niemeier(CuspLabel::A1x24).unwrap();
    let phi = weak_phi0(CuspLabel::A1x24, &TruncationPolicy::q_only(0)).unwrap();
    let policy = TruncationPolicy::q_only(5).with_specialization(vec![roots.rho2.clone()]);
    let (block, w) = theta_block(&phi, &policy).unwrap();
    assert_eq!(block.weight2, 24);
    assert_eq!(block.index24, 48);
    let aff = affine_denominator(&l, &roots, &policy).unwrap();
    assert_eq!(block.series.q_valuation(), Some(24 * 3));
    assert_eq!(block.series.precision(), aff.series.precision());
    assert_eq!(w.a, r(3));
    assert_eq!(block.series.first_difference(&aff.series).unwrap(), None);
    assert!(!block.series.is_empty());
}
