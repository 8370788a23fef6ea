//! The ε-proportional veto core for a sweep of ε.
//!
//! ```text
//! cargo run --example epsilon_pvc
//! ```

use pvc_core::profile::{AlternativeDistribution, Profile};
use pvc_core::pvc::{classic_pvc, epsilon_pvc, veto_function};
use pvc_core::rational::ratio;
use pvc_core::Result;

fn main() -> Result<()> {
    let profile = Profile::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/town_hall.soc"))?;
    let uniform = AlternativeDistribution::uniform(profile.m())?;

    println!("classic core: {:?}", classic_pvc(&profile)?);
    let (n, m) = (profile.n(), profile.m());
    let vetoes: Vec<usize> = (1..=n).map(|x| veto_function(x, n, m)).collect::<Result<_>>()?;
    println!("coalition size -> vetoes: {vetoes:?}");

    let mut previous: Option<Vec<usize>> = None;
    for k in [0, 1, 2, 3, 5, 8, 10, 12, 20] {
        let eps = ratio(k, 40);
        let core = epsilon_pvc(&profile, &uniform, &eps)?;
        if let Some(prev) = &previous {
            // cores only grow with ε
            assert!(prev.iter().all(|a| core.contains(a)));
        }
        println!("eps = {:<5} core = {core:?}", eps.to_string());
        previous = Some(core);
    }
    Ok(())
}
