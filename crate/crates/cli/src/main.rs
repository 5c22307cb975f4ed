mod args;
mod expand;
mod output;
mod verify;

use std::process::ExitCode;

use anyhow::Result;
use borcherds::lattice::{cusp_lattice, CuspLabel, EnumerationCache, CACHE_DIR_ENV};
use borcherds::report::{CheckReport, Status, SuiteReport, Witness};
use clap::Parser;

use args::{CacheAction, Cli, Command};
use output::Printer;

/// Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error, 3 budget exceeded.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<borcherds::Error>() {
            Some(borcherds::Error::BudgetExceeded(_)) | Some(borcherds::Error::InsufficientSourceOrder { .. }) => {
                Failure::Budget(e.to_string())
            }
            Some(borcherds::Error::InvalidArgument(_)) | Some(borcherds::Error::Unsupported(_)) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e),
        }
    }
}

impl From<borcherds::Error> for Failure {
    fn from(e: borcherds::Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = &cli.cache_dir {
        std::env::set_var(CACHE_DIR_ENV, dir);
    }
    if let Some(n) = cli.workers {
        std::env::set_var("RAYON_NUM_THREADS", n.to_string());
    }
    let printer = Printer { format: cli.format, timings: cli.timings };
    match run(&cli, &printer) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exceeded: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e))
            if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::from(0)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, printer: &Printer) -> Result<bool, Failure> {
    match &cli.command {
        Command::Atlas(a) => {
            let labels = args::cusps(a.cusp, a.all)?;
            let started = std::time::Instant::now();
            let reports = labels.into_iter().map(atlas_row).collect::<Result<Vec<_>, _>>()?;
            let suite = SuiteReport::new(reports, started.elapsed().as_secs_f64());
            printer.suite(&suite)?;
            Ok(!suite.status.is_failure())
        }
        Command::Expand(e) => {
            let doc = expand::run(e)?;
            printer.document(&doc)?;
            Ok(true)
        }
        Command::Verify(v) => {
            let suite = verify::run(v)?;
            printer.suite(&suite)?;
            Ok(!suite.status.is_failure())
        }
        Command::Cache(c) => {
            let cache = match EnumerationCache::from_env()? {
                Some(c) => c,
                None => return Err(Failure::Usage(format!("no cache directory (use --cache-dir or {CACHE_DIR_ENV})"))),
            };
            let report = match c.action {
                CacheAction::List => cache.list()?,
                CacheAction::Validate => cache.validate()?,
                CacheAction::Gc => cache.gc()?,
            };
            printer.cache(&report)?;
            Ok(true)
        }
    }
}

fn atlas_row(label: CuspLabel) -> Result<CheckReport, Failure> {
    let (l, roots) = cusp_lattice(label)?;
    let mut r = CheckReport::new("atlas").with_cusp(label);
    let det = l.determinant();
    let h = roots.coxeter_number().ok();
    r.detail("rank", l.rank());
    r.detail("determinant", &det);
    r.detail("roots", roots.root_count());
    r.detail("components", roots.type_string());
    r.detail("coxeter_number", h.map_or("-".to_string(), |h| h.to_string()));
    r.require(l.rank() == 24, || Witness::new("rank", l.rank(), 24));
    r.require(l.is_even(), || Witness::new("even", false, true));
    r.require(det == 1.into(), || Witness::new("determinant", &det, 1));
    let want = h.map_or(0, |h| 24 * h as usize);
    r.require(roots.root_count() == want, || Witness::new("roots", roots.root_count(), want));
    if r.status == Status::Pass && label.is_leech() {
        r.detail("note", "no norm-2 vectors");
    }
    Ok(r)
}
