//! Acceptance criteria 1–8. Runs without the libtest harness and prints one
//! line per criterion; pass criterion ids (`AC3`) as arguments to select.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use borcherds::borcherds::{
    corollary32_terms, divisor_multiplicity, fj_criterion, product_direct, product_hecke, v_swap_check, verify_theorem12,
    Thm12Options,
};
use borcherds::jacobi::{
    check_two_design, hecke_vm, hecke_vm_substitution, symmetry_check, theta_decomposition_check, theta_lattice, theta_odd,
    weak_phi0, JacobiExpansion,
};
use borcherds::lattice::{compute_tally, cusp_lattice, niemeier, root_lattice, CuspLabel, DualVector, EnumBudget, Family};
use borcherds::lift::{phi0_4a1, theta_4a1, verify_phi2};
use borcherds::report::Status;
use borcherds::series::{delta, Key, TruncationPolicy};
use borcherds::Series;
use num_bigint::BigInt;
use num_rational::BigRational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn r(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn same(name: &str, a: &Series, b: &Series) -> Result<(), String> {
    match e(a.first_difference(b))? {
        None => Ok(()),
        Some((k, x, y)) => Err(format!("{name}: first difference at {k}: {x} vs {y}")),
    }
}

fn leech_u() -> Vec<Vec<i64>> {
    let mut v = vec![0; 24];
    v[0] = 1;
    vec![v]
}

fn coxeter(cusp: CuspLabel) -> Result<i64, String> {
    let (_, roots) = e(cusp_lattice(cusp))?;
    if roots.positive_roots.is_empty() {
        return Ok(0);
    }
    Ok(e(roots.coxeter_number())? as i64)
}

fn ac1_atlas() -> Outcome {
    for cusp in CuspLabel::ALL {
        let (l, roots) = e(cusp_lattice(cusp))?;
        ensure(l.rank() == 24, || format!("{cusp}: rank {}", l.rank()))?;
        ensure(l.is_even(), || format!("{cusp}: odd"))?;
        ensure(l.determinant() == BigInt::from(1), || format!("{cusp}: det {}", l.determinant()))?;
        let tally = e(compute_tally(&l, 2, Some(&[vec![0; 24]]), &EnumBudget::default()))?;
        let norm2: u64 = tally.counts.iter().filter(|((n, _), _)| *n == 2).map(|(_, c)| *c).sum();
        ensure(norm2 as usize == roots.root_count(), || {
            format!("{cusp}: enumerated {norm2} roots, system has {}", roots.root_count())
        })?;
        for c in &roots.components {
            ensure(c.roots as u64 == c.coxeter * c.rank as u64, || format!("{cusp}: component {c} has h != |R|/rank"))?;
        }
        if cusp.is_leech() {
            ensure(norm2 == 0, || "Leech lattice has roots".into())?;
        } else {
            let h = e(roots.coxeter_number())?;
            ensure(norm2 == 24 * h, || format!("{cusp}: {norm2} roots, 24h = {}", 24 * h))?;
        }
    }
    Ok("24 lattices even, rank 24, det 1; root counts 24h; Leech rootless".into())
}

fn ac2_design() -> Outcome {
    for cusp in CuspLabel::ALL {
        let phi = e(weak_phi0(cusp, &TruncationPolicy::q_only(0)))?;
        let rep = e(check_two_design(&phi))?;
        ensure(rep.passed(), || format!("{cusp}: {:?}", rep.witnesses))?;
        let h = coxeter(cusp)?;
        let c = rep.details.get("C").cloned().unwrap_or_default();
        ensure(c == h.to_string(), || format!("{cusp}: C = {c}, h = {h}"))?;
    }
    let phi = e(phi0_4a1(&TruncationPolicy::q_only(0)))?;
    let rep = e(check_two_design(&phi))?;
    ensure(rep.passed(), || format!("4A1: {:?}", rep.witnesses))?;
    Ok("matrix identity and both C agree for 24 cusps and 4A1; C = h".into())
}

fn ac3_structural() -> Outcome {
    let mut signs = Vec::new();
    for cusp in CuspLabel::niemeier_labels() {
        let rep = e(verify_theorem12(cusp, &Thm12Options::default()))?;
        ensure(rep.status == Status::StructuralPass, || format!("{cusp}: {:?} {:?}", rep.status, rep.witnesses))?;
        signs.push(rep.sign.unwrap_or(0));
    }
    Ok(format!("23 cusps to q-order 1 + h + 2, signs {signs:?}"))
}

fn ac4_full() -> Outcome {
    let mut out = Vec::new();
    for cusp in [CuspLabel::A1x24, CuspLabel::A2x12] {
        let rep = e(verify_theorem12(cusp, &Thm12Options { full: true, ..Default::default() }))?;
        ensure(rep.status == Status::Pass, || format!("{cusp}: {:?} {:?}", rep.status, rep.witnesses))?;
        out.push(format!("{cusp} sign {}", rep.sign.unwrap_or(0)));
    }
    Ok(out.join(", "))
}

fn three_routes(name: &str, phi: &JacobiExpansion, policy: &TruncationPolicy, slices: usize) -> Result<usize, String> {
    let direct = e(product_direct(phi, policy))?;
    let hecke = e(product_hecke(phi, policy))?;
    ensure(direct.expansion.precision() == hecke.expansion.precision(), || format!("{name}: precisions differ"))?;
    same(&format!("{name} direct/hecke"), &direct.expansion, &hecke.expansion)?;
    let fj = e(corollary32_terms(phi, policy, slices))?;
    ensure(fj.slices.len() == slices, || format!("{name}: {} closed-form slices", fj.slices.len()))?;
    for (s24, slice) in &fj.slices {
        let d = e(direct.expansion.fj_slice(*s24))?;
        ensure(slice.precision() == d.precision(), || format!("{name}: slice {s24} window differs"))?;
        same(&format!("{name} slice s24 = {s24}"), slice, &d)?;
    }
    ensure(!direct.expansion.is_empty(), || format!("{name}: empty"))?;
    Ok(direct.expansion.len())
}

fn ac5_routes() -> Outcome {
    let rect = TruncationPolicy { q_max24: 96, s_max24: Some(36), slope: 0, specialization: None };
    let phi = e(phi0_4a1(&TruncationPolicy::q_only(4)))?;
    let n1 = three_routes("4A1", &phi, &rect, 2)?;
    let leech = TruncationPolicy { q_max24: 24, s_max24: Some(48), slope: 1, specialization: Some(leech_u()) };
    let phi = e(weak_phi0(CuspLabel::Leech, &TruncationPolicy::q_only(1)))?;
    let n2 = three_routes("Leech", &phi, &leech, 3)?;
    Ok(format!("4A1 {n1} terms, Leech {n2} terms"))
}

fn ac6_leech() -> Outcome {
    let policy = TruncationPolicy { q_max24: 48, s_max24: Some(24), slope: 1, specialization: Some(leech_u()) };
    let phi = e(weak_phi0(CuspLabel::Leech, &TruncationPolicy::q_only(1).with_specialization(leech_u())))?;
    let b = e(product_direct(&phi, &policy))?;
    let s0 = e(b.slice(0))?;
    let dim = 1;
    ensure(e(s0.coefficient(&Key::scalar(24, 0, dim)))? == r(1), || "tau(1) != 1".into())?;
    ensure(e(s0.coefficient(&Key::scalar(48, 0, dim)))? == r(-24), || "tau(2) != -24".into())?;
    let d: Series = delta(e(s0.precision().grade_max.ok_or("unbounded"))?);
    let d = e(d.with_context(s0.context().unwrap().clone()))?;
    same("slice 0 vs pentagonal Delta", &s0, &d)?;
    let s1 = e(b.slice(1))?;
    let (leech, _) = e(cusp_lattice(CuspLabel::Leech))?;
    let theta = e(theta_lattice(&leech, &TruncationPolicy::q_only(2).with_specialization(leech_u())))?;
    same("slice 1 vs -theta", &s1, &theta.series.neg())?;
    let count: BigRational = s1.terms().filter(|(k, _)| k.q24 == 48).map(|(_, c)| -c.clone()).sum();
    let tally = e(compute_tally(&leech, 4, Some(&leech_u()), &EnumBudget::default()))?;
    let enumerated: u64 = tally.counts.iter().filter(|((n, _), _)| *n == 4).map(|(_, c)| *c).sum();
    ensure(count == r(enumerated as i64), || format!("slice count {count} vs enumeration {enumerated}"))?;
    ensure(count == r(196560), || format!("norm-4 count {count}"))?;
    Ok(format!("Delta to q^{}, norm-4 count {count}", s0.precision().grade_max.unwrap_or(0) / 24))
}

fn ac7_phi2() -> Outcome {
    let policy = TruncationPolicy { q_max24: 72, s_max24: Some(36), slope: 0, specialization: None };
    let rep = e(verify_phi2(&policy))?;
    ensure(rep.passed(), || format!("{:?}", rep.witnesses))?;
    ensure(rep.sign == Some(1), || format!("scalar {:?}", rep.details.get("scalar")))?;
    let phi = e(phi0_4a1(&TruncationPolicy::q_only(0)))?;
    let row = e(phi.zero_row())?;
    let mut want = vec![(vec![0, 0, 0, 0], r(4))];
    for i in 0..4 {
        for s in [2, -2] {
            let mut v = vec![0; 4];
            v[i] = s;
            want.push((v, r(1)));
        }
    }
    want.sort();
    ensure(row == want, || format!("q^0 row {row:?}"))?;
    Ok(format!(
        "{} terms equal, scalar +1; q^0 row r1+r2+r3+r4+4+inverses",
        rep.details.get("terms").cloned().unwrap_or_default()
    ))
}

fn ac8_properties() -> Outcome {
    let mut checked = 0;
    let mut forms: Vec<(String, JacobiExpansion)> = Vec::new();
    for cusp in CuspLabel::ALL {
        forms.push((cusp.to_string(), e(weak_phi0(cusp, &TruncationPolicy::q_only(0)))?));
    }
    for cusp in [CuspLabel::A1x24, CuspLabel::A2x12, CuspLabel::Leech] {
        forms.push((format!("{cusp} q<=1"), e(weak_phi0(cusp, &TruncationPolicy::q_only(1)))?));
    }
    forms.push(("phi0 4A1".into(), e(phi0_4a1(&TruncationPolicy::q_only(3)))?));
    for (name, phi) in &forms {
        ensure(theta_decomposition_check(phi).passed(), || format!("{name}: norm dependence"))?;
        ensure(symmetry_check(phi).passed(), || format!("{name}: symmetry"))?;
        checked += 1;
    }
    let e8 = e(root_lattice(Family::E, 8))?;
    let others = [
        ("theta 4A1", e(theta_4a1(&TruncationPolicy::q_only(5)))?),
        ("theta odd", e(theta_odd(&TruncationPolicy::q_only(5)))?),
        ("theta E8", e(theta_lattice(&e8, &TruncationPolicy::q_only(3)))?),
    ];
    for (name, f) in &others {
        ensure(symmetry_check(f).passed(), || format!("{name}: symmetry"))?;
        checked += 1;
    }

    let phi4 = &forms.last().unwrap().1;
    for (name, f, ms) in
        [("theta E8", &others[2].1, vec![2u32, 3]), ("phi0 4A1", phi4, vec![2, 3]), ("theta 4A1", &others[0].1, vec![3])]
    {
        for m in ms {
            let a = e(hecke_vm(f, m))?;
            let b = e(hecke_vm_substitution(f, m))?;
            ensure(!a.series.is_empty(), || format!("{name}|V{m} empty"))?;
            same(&format!("{name}|V{m}"), &a.series, &b.series)?;
        }
    }

    // swap symmetry with computed D, and recovery of φ from two slices
    let lphi = e(weak_phi0(CuspLabel::Leech, &TruncationPolicy::q_only(1).with_specialization(leech_u())))?;
    let lp = TruncationPolicy { q_max24: 48, s_max24: Some(24), slope: 1, specialization: Some(leech_u()) };
    let b = e(product_direct(&lphi, &lp))?;
    ensure(b.character.v_swap_parity == Some(1), || "Leech D".into())?;
    let sw = e(v_swap_check(&b))?;
    ensure(sw.passed() && sw.sign == Some(-1), || format!("Leech swap {:?}", sw.witnesses))?;
    let f = e(fj_criterion(&e(b.slice(0))?, &e(b.slice(1))?))?;
    ensure(f.precision().grade_max.is_some_and(|g| g >= 24), || "Leech recovery window".into())?;
    same("Leech recovered phi", &f, &lphi.series)?;

    let rect = TruncationPolicy { q_max24: 96, s_max24: Some(36), slope: 0, specialization: None };
    let b4 = e(product_direct(phi4, &rect))?;
    ensure(b4.character.v_swap_parity == Some(0), || "4A1 D".into())?;
    let sw = e(v_swap_check(&b4))?;
    ensure(sw.passed() && sw.sign == Some(1), || format!("4A1 swap {:?}", sw.witnesses))?;
    let f = e(fj_criterion(&e(b4.slice(0))?, &e(b4.slice(1))?))?;
    ensure(f.precision().grade_max.is_some_and(|g| g >= 48), || "4A1 recovery window".into())?;
    same("4A1 recovered phi", &f, &phi4.series)?;

    let phi = &forms[CuspLabel::ALL.iter().position(|c| *c == CuspLabel::A1x24).unwrap()].1;
    let (l, roots) = e(niemeier(CuspLabel::A1x24))?;
    let a = DualVector::from_lattice_vector(&l, &roots.all_roots[0]).pairing2;
    let a2: Vec<i64> = a.iter().map(|v| 2 * v).collect();
    let zero = vec![0i64; 24];
    for (n, ell) in [(-1, &zero), (0, &a), (0, &a2), (-4, &zero)] {
        let m = e(divisor_multiplicity(phi, n, ell))?;
        ensure(m == BigInt::from(1), || format!("multiplicity at ({n}, {ell:?}) = {m}"))?;
    }
    Ok(format!(
        "{checked} expansions symmetric; Hecke forms agree; swap signs -1 (Leech) and +1 (4A1); recovery and multiplicities ok"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "atlas integrity", ac1_atlas),
        ("AC2", "two-design identity", ac2_design),
        ("AC3", "leading coefficient, structural tier", ac3_structural),
        ("AC4", "leading coefficient, full tier", ac4_full),
        ("AC5", "product representations", ac5_routes),
        ("AC6", "Leech cusp expansion", ac6_leech),
        ("AC7", "Phi2 identity", ac7_phi2),
        ("AC8", "property suites", ac8_properties),
    ];
    let selected: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.iter().any(|s| s == id) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("{id} PASS {name} ({secs:.1}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL {name} ({secs:.1}s): {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
