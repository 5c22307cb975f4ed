use std::io::Write;

use anyhow::Result;
use borcherds::lattice::{CacheEntryStatus, CacheReport};
use borcherds::report::SuiteReport;
use serde_json::Value;

use crate::args::Format;

/// `println!` that reports a closed pipe as an error instead of panicking.
macro_rules! out {
    ($($t:tt)*) => {
        writeln!(std::io::stdout().lock(), $($t)*)?
    };
}

pub struct Printer {
    pub format: Format,
    pub timings: bool,
}

impl Printer {
    pub fn suite(&self, suite: &SuiteReport) -> Result<()> {
        let mut suite = suite.clone();
        if !self.timings {
            suite.runtime_seconds = 0.0;
            for r in &mut suite.reports {
                r.timings.clear();
            }
        }
        match self.format {
            Format::Json => out!("{}", serde_json::to_string_pretty(&suite)?),
            Format::Text => {
                for r in &suite.reports {
                    let status = serde_json::to_value(r.status)?;
                    let cusp = r.cusp.as_deref().unwrap_or("-");
                    out!("{:<28} {:<10} {}", r.check, cusp, status.as_str().unwrap_or("?"));
                    for (k, v) in &r.details {
                        out!("    {k}: {v}");
                    }
                    if let Some(s) = r.sign {
                        out!("    sign: {s}");
                    }
                    for w in &r.witnesses {
                        out!("    mismatch at {}: {} vs {}", w.key, w.left, w.right);
                    }
                    for (phase, t) in &r.timings {
                        out!("    time {phase}: {t:.3}s");
                    }
                }
                let status = serde_json::to_value(suite.status)?;
                out!("overall: {}", status.as_str().unwrap_or("?"));
                if self.timings {
                    out!("runtime: {:.3}s", suite.runtime_seconds);
                }
            }
        }
        Ok(())
    }

    pub fn document(&self, doc: &Value) -> Result<()> {
        match self.format {
            Format::Json => out!("{}", serde_json::to_string_pretty(doc)?),
            Format::Text => {
                for (k, v) in doc.as_object().into_iter().flatten() {
                    if k != "series" {
                        out!("{k}: {v}");
                    }
                }
                let series = &doc["series"];
                out!("precision: {}", series["precision"]);
                for t in series["terms"].as_array().into_iter().flatten() {
                    let c = &t["coeff"];
                    let coeff = if c["denominator"] == "1" {
                        c["numerator"].as_str().unwrap_or("?").to_string()
                    } else {
                        format!("{}/{}", c["numerator"].as_str().unwrap_or("?"), c["denominator"].as_str().unwrap_or("?"))
                    };
                    let ell: Vec<&str> = t["ell"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                    out!("q^{}/24 s^{}/24 [{}]  {}", t["q24"], t["s24"], ell.join(" "), coeff);
                }
            }
        }
        Ok(())
    }

    pub fn cache(&self, report: &CacheReport) -> Result<()> {
        match self.format {
            Format::Json => out!("{}", serde_json::to_string_pretty(report)?),
            Format::Text => {
                out!("cache: {}", report.directory);
                for (name, status) in &report.files {
                    match status {
                        CacheEntryStatus::Valid { rank, max_norm, projected, entries, .. } => {
                            out!("  {name}: valid rank {rank} norm <= {max_norm} projected {projected} entries {entries}")
                        }
                        CacheEntryStatus::Quarantined { reason } => out!("  {name}: quarantined ({reason})"),
                    }
                }
                for name in &report.removed {
                    out!("  removed {name}");
                }
            }
        }
        Ok(())
    }
}
