//! Alternative weights from cardinal utilities.
//!
//! Each voter's utilities are normalised to sum to one and averaged; the
//! ranking is read off by utility. Weighted and uniform cores can differ.
//!
//! ```text
//! cargo run --example btl_distribution
//! ```

use pvc_core::profile::{btl_distribution, AlternativeDistribution, Profile, UtilityProfile};
use pvc_core::pvc::critical_epsilons;
use pvc_core::rational::to_f64;
use pvc_core::Result;

fn main() -> Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let utilities = UtilityProfile::from_file(format!("{dir}/town_hall_utilities.csv"))?;
    let profile = Profile::from_file(format!("{dir}/town_hall.soc"))?;
    let btl = btl_distribution(&utilities);
    btl.check_matches(&profile)?;

    let total: f64 = btl.weights().iter().map(to_f64).sum();
    println!("weights {:?} (sum {total})", btl.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>());

    let uniform = AlternativeDistribution::uniform(profile.m())?;
    let (a, b) = (critical_epsilons(&profile, &btl)?, critical_epsilons(&profile, &uniform)?);
    println!("{:<4} {:>8} {:>8}", "alt", "btl", "uniform");
    for (x, y) in a.iter().zip(&b) {
        println!("{:<4} {:>8} {:>8}", x.alt, x.value.to_string(), y.value.to_string());
    }
    Ok(())
}
