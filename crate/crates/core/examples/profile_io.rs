//! Reading, writing and slicing preference profiles.
//!
//! ```text
//! cargo run --example profile_io
//! ```

use pvc_core::profile::{generate_synthetic, subsample, AlternativeDistribution, Profile, SyntheticModel};
use pvc_core::Result;

fn main() -> Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/town_hall.soc");
    let profile = Profile::from_file(path)?;
    println!("{} voters, {} alternatives", profile.n(), profile.m());
    if let Some(names) = profile.names() {
        for (id, name) in names.iter().enumerate() {
            println!("  {id}: {name}");
        }
    }
    for (ballot, count) in profile.ballot_counts() {
        println!("  {count} x {ballot:?}");
    }

    // SOC text round-trips
    let text = profile.to_soc();
    assert_eq!(Profile::parse_soc(&text)?, profile);

    // keep voters 0, 2, 4 and the first three proposals
    let small = profile.restrict(&[0, 2, 4], &[0, 1, 2])?;
    println!("\nrestricted:\n{}", small.to_soc());

    let (sub, map) = subsample(&profile, 4, 3, 11)?;
    println!("random 4x3 subsample:");
    for v in 0..sub.n() {
        let parent: Vec<_> = sub.ranking(v).iter().map(|&a| map.parent_alt(a)).collect();
        println!("  voter {} ranks {parent:?}", map.parent_voter(v));
    }

    let weights = AlternativeDistribution::from_file(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data/town_hall_weights.txt"
    ))?;
    weights.check_matches(&profile)?;
    println!("\nweights: {}", weights.to_text().trim().replace('\n', " "));

    let mallows = SyntheticModel::Mallows {
        phi: 0.3,
        reference: vec![0, 1, 2, 3, 4, 5],
    };
    let synthetic = generate_synthetic(&mallows, 8, 6, 42)?;
    println!("\nMallows sample (phi = 0.3):\n{}", synthetic.to_soc());
    Ok(())
}
