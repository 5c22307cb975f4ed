use std::path::PathBuf;

use borcherds::lattice::CuspLabel;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "borcherds",
    version,
    about = "Exact Fourier-Jacobi expansions of Borcherds products at the 24 cusps of II_{2,26}"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,
    /// Enumeration cache directory (overrides BORCHERDS_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Include phase timings (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cusp lattices: rank, determinant, roots, Coxeter number.
    Atlas(AtlasArgs),
    /// Writes one expansion as JSON or text.
    Expand(ExpandArgs),
    /// Runs a verification suite.
    Verify(VerifyArgs),
    /// Inspects the enumeration cache.
    Cache(CacheArgs),
}

#[derive(Args, Debug)]
pub struct AtlasArgs {
    #[arg(long, conflicts_with = "all")]
    pub cusp: Option<CuspLabel>,
    #[arg(long)]
    pub all: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// The weak form `ϑ_N/Δ` (or `φ₀,4A₁`).
    Phi0,
    /// The lattice theta series (or `ϑ_{4A₁}`).
    Theta,
    ThetaBlock,
    /// Affine denominator of the root system.
    Affine,
    /// Borcherds product of `φ₀`.
    Product,
    /// The additive lift on 4A1.
    Phi2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeName {
    #[value(name = "4A1")]
    FourA1,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long, conflicts_with = "lattice")]
    pub cusp: Option<CuspLabel>,
    #[arg(long)]
    pub lattice: Option<LatticeName>,
    #[arg(long, value_enum)]
    pub what: What,
    /// q-order in natural units, e.g. `3` or `5/2`.
    #[arg(long, default_value = "2")]
    pub q: String,
    /// s-order in natural units, for products and lifts.
    #[arg(long)]
    pub s: Option<String>,
    /// Extra powers of q kept per unit of s below the top slice.
    #[arg(long)]
    pub slope: Option<i64>,
    /// Specialization vector (comma-separated lattice coordinates, `rho`, or `default`); repeatable.
    #[arg(long = "specialize", value_name = "VEC")]
    pub specialize: Vec<String>,
    /// Full multivariate output for rank-24 lattices (memory hungry).
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Two-design identity and `C = h`.
    Design,
    /// Leading Fourier-Jacobi coefficient versus the affine denominator.
    Thm12,
    /// The lift identity on 4A1.
    Phi2,
    /// Leech cusp slices.
    Leech,
    /// Coefficient symmetry and norm dependence of `φ₀`.
    Symmetry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    Auto,
    Structural,
    Full,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, conflicts_with = "all")]
    pub cusp: Option<CuspLabel>,
    #[arg(long)]
    pub all: bool,
    /// q-order of the comparison window.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    pub tier: Tier,
}

#[derive(Args, Debug)]
pub struct CacheArgs {
    #[arg(value_enum)]
    pub action: CacheAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    List,
    Validate,
    Gc,
}

/// The selected cusps; `--all` gives all 24.
pub fn cusps(cusp: Option<CuspLabel>, all: bool) -> Result<Vec<CuspLabel>, Failure> {
    match (cusp, all) {
        (Some(c), _) => Ok(vec![c]),
        (None, true) => Ok(CuspLabel::ALL.to_vec()),
        (None, false) => Err(Failure::Usage("give --cusp LABEL or --all".into())),
    }
}

/// Natural-unit order (`3`, `3/2`) times 24.
pub fn order24(s: &str) -> Result<i64, Failure> {
    let bad = || Failure::Usage(format!("bad order {s:?}: expected an integer or a fraction a/b"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den <= 0 || (24 * num) % den != 0 {
        return Err(bad());
    }
    let v = 24 * num / den;
    if v < 0 {
        return Err(Failure::Usage(format!("order {s} is negative")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_scale_by_24() {
        assert_eq!(order24("3").unwrap(), 72);
        assert_eq!(order24("3/2").unwrap(), 36);
        assert!(order24("1/5").is_err());
        assert!(order24("-1").is_err());
        assert!(order24("x").is_err());
    }
}
