//! Per-corpus label distribution of the mixed fixture, as CSV and SVG.
use std::path::Path;

use syncur::config::{load_inputs, RunConfig};
use syncur::stats::{csv_string, distribution, render_stacked_chart, GroupBy};

fn main() -> anyhow::Result<()> {
    let cfg = RunConfig::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/mixed/run.toml"))?;
    let inputs = load_inputs(&cfg.inputs, &cfg.catalog()?)?;
    let records: Vec<_> = inputs.into_iter().flat_map(|i| i.records).collect();
    let reports = distribution(&records, GroupBy::Corpus)?;
    for r in &reports {
        println!("{:<12} n={:<4} uncategorized {:.1}%", r.group.to_string(), r.total, r.uncategorized_percentage);
    }
    print!("{}", csv_string(&reports)?.lines().take(6).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    let out = std::env::temp_dir().join("syncur-distribution.svg");
    render_stacked_chart(&reports, &out)?;
    println!("chart written to {}", out.display());
    Ok(())
}
