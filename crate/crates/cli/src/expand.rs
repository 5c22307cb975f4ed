use borcherds::borcherds::{product_direct, BorcherdsProduct};
use borcherds::jacobi::{affine_denominator, theta_block, theta_lattice, weak_phi0, JacobiExpansion, WeylData};
use borcherds::lattice::{cusp_lattice, CuspLabel, RootSystemData};
use borcherds::lift::{phi0_4a1, phi2_fourier, theta_4a1};
use borcherds::series::TruncationPolicy;
use borcherds::{Error, Series};
use serde_json::{json, Value};

use crate::args::{order24, ExpandArgs, What};
use crate::Failure;

/// Default specialization for rank-24 jobs: `2ρ`, or the first basis vector for the Leech lattice.
pub fn default_specialization(roots: &RootSystemData, rank: usize) -> Vec<i64> {
    if roots.positive_roots.is_empty() {
        let mut e = vec![0; rank];
        e[0] = 1;
        e
    } else {
        roots.rho2.clone()
    }
}

fn parse_specialization(args: &ExpandArgs, roots: &RootSystemData, rank: usize) -> Result<Option<Vec<Vec<i64>>>, Failure> {
    if args.full {
        if !args.specialize.is_empty() {
            return Err(Failure::Usage("--full and --specialize exclude each other".into()));
        }
        return Ok(None);
    }
    if args.specialize.is_empty() {
        return Ok(Some(vec![default_specialization(roots, rank)]));
    }
    let mut out = Vec::new();
    for s in &args.specialize {
        let v = match s.as_str() {
            "default" => default_specialization(roots, rank),
            "rho" => roots.rho2.clone(),
            _ => s
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("bad specialization vector {s:?}")))?,
        };
        if v.len() != rank {
            return Err(Failure::Usage(format!("specialization vector has {} coordinates, lattice rank is {rank}", v.len())));
        }
        out.push(v);
    }
    Ok(Some(out))
}

fn q_policy(q24: i64, spec: &Option<Vec<Vec<i64>>>) -> TruncationPolicy {
    TruncationPolicy { q_max24: q24, s_max24: None, slope: 0, specialization: spec.clone() }
}

fn series_doc(what: &str, selector: &str, policy: &TruncationPolicy, series: &Series) -> Value {
    json!({
        "what": what,
        "selector": selector,
        "policy": policy,
        "series": series.to_json(),
    })
}

fn jacobi_doc(what: &str, selector: &str, policy: &TruncationPolicy, j: &JacobiExpansion) -> Value {
    let mut doc = series_doc(what, selector, policy, &j.series);
    doc["weight2"] = json!(j.weight2);
    doc["index24"] = json!(j.index24);
    doc["character"] = json!(j.character);
    doc
}

fn weyl_json(w: &WeylData) -> Value {
    json!({"a": w.a.to_string(), "b": w.b.pairing2, "c": w.c.to_string()})
}

fn product_doc(selector: &str, policy: &TruncationPolicy, b: &BorcherdsProduct) -> Result<Value, Failure> {
    let mut doc = series_doc("product", selector, policy, &b.expansion);
    doc["weyl"] = weyl_json(&b.weyl);
    doc["weight2"] = json!(b.weight2);
    doc["character"] = json!(b.character);
    let fj = b.fourier_jacobi()?;
    doc["slices"] = fj.slices.iter().map(|(s24, slice)| json!({"s24": s24, "terms": slice.len()})).collect();
    Ok(doc)
}

/// Runs `product_direct`, enlarging the source window until no factor is missing.
pub fn product_with_source<F>(policy: &TruncationPolicy, source: F) -> Result<BorcherdsProduct, Failure>
where
    F: Fn(i64) -> borcherds::Result<JacobiExpansion>,
{
    let mut q = 0i64;
    loop {
        let phi = source(q)?;
        match product_direct(&phi, policy) {
            Err(Error::InsufficientSourceOrder { q24, .. }) if q24.div_euclid(24) > q => q = q24.div_euclid(24),
            other => return Ok(other?),
        }
    }
}

pub fn run(args: &ExpandArgs) -> Result<Value, Failure> {
    let q24 = order24(&args.q)?;
    let s24 = args.s.as_deref().map(order24).transpose()?;
    match (args.cusp, args.lattice) {
        (Some(cusp), None) => expand_cusp(args, cusp, q24, s24),
        (None, Some(_)) => expand_4a1(args, q24, s24),
        _ => Err(Failure::Usage("give --cusp LABEL or --lattice 4A1".into())),
    }
}

fn expand_cusp(args: &ExpandArgs, cusp: CuspLabel, q24: i64, s24: Option<i64>) -> Result<Value, Failure> {
    let (l, roots) = cusp_lattice(cusp)?;
    let spec = parse_specialization(args, &roots, l.rank())?;
    let sel = cusp.to_string();
    match args.what {
        What::Phi0 => {
            let p = q_policy(24 * q24.div_euclid(24), &spec);
            Ok(jacobi_doc("phi0", &sel, &p, &weak_phi0(cusp, &p)?))
        }
        What::Theta => {
            let p = q_policy(24 * q24.div_euclid(24), &spec);
            Ok(jacobi_doc("theta", &sel, &p, &theta_lattice(&l, &p)?))
        }
        What::ThetaBlock => {
            let p = q_policy(q24, &spec);
            let phi = weak_phi0(cusp, &TruncationPolicy::q_only(0))?;
            let (block, weyl) = theta_block(&phi, &p)?;
            let mut doc = jacobi_doc("theta-block", &sel, &p, &block);
            doc["weyl"] = weyl_json(&weyl);
            Ok(doc)
        }
        What::Affine => {
            let p = q_policy(q24, &spec);
            Ok(jacobi_doc("affine", &sel, &p, &affine_denominator(&l, &roots, &p)?))
        }
        What::Product => {
            let s = s24.ok_or_else(|| Failure::Usage("products need --s".into()))?;
            let policy =
                TruncationPolicy { q_max24: q24, s_max24: Some(s), slope: args.slope.unwrap_or(1), specialization: spec.clone() };
            let b = product_with_source(&policy, |q| weak_phi0(cusp, &q_policy(24 * q, &spec)))?;
            product_doc(&sel, &policy, &b)
        }
        What::Phi2 => Err(Failure::Usage("phi2 lives on --lattice 4A1".into())),
    }
}

fn expand_4a1(args: &ExpandArgs, q24: i64, s24: Option<i64>) -> Result<Value, Failure> {
    if !args.specialize.is_empty() {
        return Err(Failure::Usage("4A1 expansions are multivariate".into()));
    }
    let sel = "4A1";
    let rect = |s: i64| TruncationPolicy { q_max24: q24, s_max24: Some(s), slope: args.slope.unwrap_or(0), specialization: None };
    match args.what {
        What::Phi0 => {
            let p = TruncationPolicy::q_only(q24.div_euclid(24));
            Ok(jacobi_doc("phi0", sel, &p, &phi0_4a1(&p)?))
        }
        What::Theta | What::ThetaBlock => {
            let p = q_policy(q24, &None);
            Ok(jacobi_doc("theta", sel, &p, &theta_4a1(&p)?))
        }
        What::Product => {
            let policy = rect(s24.unwrap_or(36));
            let b = product_with_source(&policy, |q| phi0_4a1(&TruncationPolicy::q_only(q)))?;
            product_doc(sel, &policy, &b)
        }
        What::Phi2 => {
            let policy = rect(s24.unwrap_or(36));
            let f = phi2_fourier(&policy)?;
            let mut doc = series_doc("phi2", sel, &policy, &f.expansion);
            doc["weight2"] = json!(f.weight2);
            doc["character"] = json!(f.character);
            Ok(doc)
        }
        What::Affine => Err(Failure::Usage("4A1 has no affine denominator job".into())),
    }
}
