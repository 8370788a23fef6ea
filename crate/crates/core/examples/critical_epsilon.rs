//! Critical ε of every alternative, with blocking witnesses.
//!
//! The critical ε of `a` is the largest slack `μ(S) + |T|/n − 1` over
//! coalitions `T` that all rank the set `S` above `a`, clamped at zero. It is
//! found with a max-flow; the brute-force search is there to cross-check on
//! small profiles.
//!
//! ```text
//! cargo run --example critical_epsilon
//! ```

use pvc_core::profile::{AlternativeDistribution, Profile};
use pvc_core::pvc::{critical_epsilons, max_blocking_slack};
use pvc_core::Result;

fn main() -> Result<()> {
    let profile = Profile::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/town_hall.soc"))?;
    let names = profile.names().expect("the file names its proposals").to_vec();

    for (label, dist) in [
        ("uniform", AlternativeDistribution::uniform(profile.m())?),
        (
            "weighted",
            AlternativeDistribution::from_file(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/data/town_hall_weights.txt"
            ))?,
        ),
    ] {
        println!("== {label} ==");
        for result in critical_epsilons(&profile, &dist)? {
            let brute = max_blocking_slack(&profile, &dist, result.alt)?;
            assert_eq!(brute.value, result.value);
            print!("{:<12} {:>6}", names[result.alt], result.value.to_string());
            if let Some(w) = &result.witness {
                // the witness re-derives its own slack
                assert_eq!(w.verify(&profile, &dist, result.alt)?, result.value);
                let set: Vec<&str> = w.blocking_set.iter().map(|&b| names[b].as_str()).collect();
                print!("   voters {:?} prefer {:?}", w.coalition, set);
            }
            println!();
        }
    }
    Ok(())
}
