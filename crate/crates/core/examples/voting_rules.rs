//! Every voting rule on one profile, plus γ-veto and the veto-by-consumption
//! trace.
//!
//! ```text
//! cargo run --example voting_rules
//! ```

use pvc_core::profile::{AlternativeDistribution, Profile};
use pvc_core::pvc::critical_epsilon;
use pvc_core::rational::ratio;
use pvc_core::rules::{run_rule, veto_by_consumption, vote_by_gamma_veto, RuleKind};
use pvc_core::Result;

fn main() -> Result<()> {
    let profile = Profile::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/town_hall.soc"))?;
    let names = profile.names().expect("named").to_vec();
    let uniform = AlternativeDistribution::uniform(profile.m())?;

    for rule in RuleKind::ALL {
        let outcome = run_rule(rule, &profile, 5)?;
        let eps = critical_epsilon(&profile, &uniform, outcome.winner)?.value;
        println!("{:<10} {:<12} critical eps {eps}", rule.name(), names[outcome.winner]);
    }

    println!("\nveto by consumption:");
    for step in veto_by_consumption(&profile).trace {
        println!("  {}", serde_json::to_string(&step).expect("trace serializes"));
    }

    let weights = AlternativeDistribution::from_file(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data/town_hall_weights.txt"
    ))?;
    let eps = ratio(1, 5);
    let order: Vec<usize> = (0..profile.n()).collect();
    let gamma = vote_by_gamma_veto(&profile, &weights, &eps, &order)?;
    println!("\ngamma-veto at eps = {eps}: survivors {:?}, mass left {}", gamma.survivors, gamma.residual_mass);
    for &a in &gamma.survivors {
        let c = critical_epsilon(&profile, &weights, a)?.value;
        assert!(c <= eps);
        println!("  {:<12} critical eps {c}", names[a]);
    }
    Ok(())
}
