use std::time::Instant;

use borcherds::borcherds::{verify_theorem12, Thm12Options};
use borcherds::jacobi::{check_two_design, symmetry_check, theta_decomposition_check, theta_lattice, weak_phi0};
use borcherds::lattice::{cusp_lattice, CuspLabel};
use borcherds::lift::{phi0_4a1, verify_phi2};
use borcherds::report::{CheckReport, SuiteReport, Witness};
use borcherds::series::{delta, TruncationPolicy};
use borcherds::Series;
use num_rational::BigRational;

use crate::args::{cusps, order24, Suite, Tier, VerifyArgs};
use crate::expand::{default_specialization, product_with_source};
use crate::Failure;

pub fn run(args: &VerifyArgs) -> Result<SuiteReport, Failure> {
    let started = Instant::now();
    let reports = match args.suite {
        Suite::Design => design(args)?,
        Suite::Thm12 => thm12(args)?,
        Suite::Phi2 => vec![phi2(args)?],
        Suite::Leech => vec![leech(args)?],
        Suite::Symmetry => symmetry(args)?,
    };
    Ok(SuiteReport::new(reports, started.elapsed().as_secs_f64()))
}

fn coxeter(cusp: CuspLabel) -> Result<i64, Failure> {
    let (_, roots) = cusp_lattice(cusp)?;
    Ok(if roots.positive_roots.is_empty() { 0 } else { roots.coxeter_number()? as i64 })
}

fn design(args: &VerifyArgs) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    for cusp in cusps(args.cusp, args.all)? {
        let phi = weak_phi0(cusp, &TruncationPolicy::q_only(0))?;
        let mut r = check_two_design(&phi)?.with_cusp(cusp);
        let h = BigRational::from_integer(coxeter(cusp)?.into());
        let c = r.details.get("C").cloned().unwrap_or_default();
        r.require(c == h.to_string(), || Witness::new("C = h", &c, &h));
        out.push(r);
    }
    if args.all {
        let phi = phi0_4a1(&TruncationPolicy::q_only(0))?;
        out.push(check_two_design(&phi)?.with_cusp("4A1"));
    }
    Ok(out)
}

fn thm12(args: &VerifyArgs) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    for cusp in cusps(args.cusp, args.all)? {
        let h = coxeter(cusp)?;
        let extra_q = match &args.q {
            Some(q) => {
                let q24 = order24(q)?;
                if q24 % 24 != 0 || q24 / 24 < 1 + h {
                    return Err(Failure::Usage(format!("--q must be an integer >= 1 + h = {}", 1 + h)));
                }
                q24 / 24 - 1 - h
            }
            None => 2,
        };
        let full = match args.tier {
            Tier::Full => true,
            Tier::Structural => false,
            Tier::Auto => h <= 3,
        };
        out.push(verify_theorem12(cusp, &Thm12Options { extra_q, full, specialization: None })?);
    }
    Ok(out)
}

fn phi2(args: &VerifyArgs) -> Result<CheckReport, Failure> {
    let q = args.q.as_deref().map(order24).transpose()?.unwrap_or(72);
    let s = args.s.as_deref().map(order24).transpose()?.unwrap_or(36);
    let policy = TruncationPolicy { q_max24: q, s_max24: Some(s), slope: 0, specialization: None };
    Ok(verify_phi2(&policy)?)
}

/// Slices `Δ` and `−ϑ_Λ` at the Leech cusp, specialized to one vector.
fn leech(args: &VerifyArgs) -> Result<CheckReport, Failure> {
    let q = args.q.as_deref().map(order24).transpose()?.unwrap_or(48);
    let (l, roots) = cusp_lattice(CuspLabel::Leech)?;
    let spec = Some(vec![default_specialization(&roots, l.rank())]);
    let policy = TruncationPolicy { q_max24: q, s_max24: Some(24), slope: 1, specialization: spec.clone() };
    let mut r = CheckReport::new("leech-slices").with_cusp(CuspLabel::Leech).with_policy(&policy);
    let b = product_with_source(&policy, |n| {
        weak_phi0(CuspLabel::Leech, &TruncationPolicy { q_max24: 24 * n, s_max24: None, slope: 0, specialization: spec.clone() })
    })?;
    let s0 = b.slice(0)?;
    let d: Series = delta(s0.precision().grade_max.unwrap_or(0));
    let d = d.with_context(s0.context().expect("lattice context").clone())?;
    if let Some(w) = s0.first_difference(&d)? {
        r.fail(Witness::from_difference(&w));
    }
    let s1 = b.slice(1)?;
    let theta = theta_lattice(&l, &TruncationPolicy { q_max24: q, s_max24: None, slope: 0, specialization: spec })?;
    if let Some(w) = s1.first_difference(&theta.series.neg())? {
        r.fail(Witness::from_difference(&w));
    }
    let count: BigRational = s1.terms().filter(|(k, _)| k.q24 == 48).map(|(_, c)| -c.clone()).sum();
    r.detail("norm4_count", &count);
    r.detail("tau2", s0.coefficient_qs(48, 0).map(|c| c.to_string()).unwrap_or_else(|_| "-".into()));
    Ok(r)
}

fn symmetry(args: &VerifyArgs) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    for cusp in cusps(args.cusp, args.all)? {
        let phi = weak_phi0(cusp, &TruncationPolicy::q_only(0))?;
        out.push(theta_decomposition_check(&phi).with_cusp(cusp));
        out.push(symmetry_check(&phi).with_cusp(cusp));
    }
    Ok(out)
}
