//! Benchmarking voting rules on subsamples by the critical ε of their winners.
//!
//! Reads `examples/data/benchmark.toml`: a 100 x 100 profile of two opposed
//! partisan blocs and a centrist bloc, ten replications of four 20 x 20
//! subsamples each. Writes records and summaries to a temporary directory.
//!
//! ```text
//! cargo run --release --example rule_benchmark
//! ```

use pvc_core::harness::{config_grid, run_experiment, write_outputs, ExperimentConfig};
use pvc_core::rational::to_f64;
use pvc_core::Result;

fn main() -> Result<()> {
    let cfg = ExperimentConfig::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/benchmark.toml"))?;
    let records = run_experiment(&cfg)?;
    let out = std::env::temp_dir().join("pvc_rule_benchmark");
    let summary = write_outputs(&out, &records, &config_grid(&cfg)?)?;

    println!("{} records, written to {}", records.len(), out.display());
    println!("{:<10} {:>8} {:>8} {:>8}", "rule", "mean", "p99", "<0.01");
    for r in &summary.rules {
        println!(
            "{:<10} {:>8.4} {:>8.4} {:>8.3}",
            r.rule,
            to_f64(&r.mean),
            to_f64(&r.p99),
            to_f64(&r.frac_lt_001)
        );
    }
    Ok(())
}
