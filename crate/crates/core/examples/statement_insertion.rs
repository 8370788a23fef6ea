//! Scoring an outside statement by where voters would place it.
//!
//! ```text
//! cargo run --example statement_insertion
//! ```

use pvc_core::harness::{evaluate_insertion, InsertedStatement};
use pvc_core::profile::{AlternativeDistribution, Profile};
use pvc_core::Result;

fn main() -> Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let profile = Profile::from_file(format!("{dir}/town_hall.soc"))?;
    let weights = AlternativeDistribution::from_file(format!("{dir}/town_hall_weights.txt"))?;

    let market = InsertedStatement::from_file(format!("{dir}/weekend_market.txt"))?;
    let r = evaluate_insertion(&profile, &weights, &market)?;
    println!("{:?}: critical eps {}", market.label, r.value);

    // the same statement pushed k places down for everyone
    for k in 0..=profile.m() {
        let shifted = InsertedStatement {
            label: format!("down {k}"),
            positions: market.positions.iter().map(|p| (p + k).min(profile.m())).collect(),
        };
        let r = evaluate_insertion(&profile, &weights, &shifted)?;
        println!("  {:<7} {}", shifted.label, r.value);
    }
    Ok(())
}
