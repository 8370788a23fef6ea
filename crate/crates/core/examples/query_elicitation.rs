//! Finding an ε-PVC element through queries only.
//!
//! The hidden profile sits behind an [`OracleEnvironment`]. The algorithm
//! draws τ alternatives, then lets τ − 1 random voters veto one sample each.
//! Min mode asks one min query per veto; pairwise mode finds the same loser
//! with a scan of pairwise comparisons.
//!
//! ```text
//! cargo run --release --example query_elicitation
//! ```

use pvc_core::profile::{generate_synthetic, AlternativeDistribution, SyntheticModel};
use pvc_core::querysim::{compute_tau, find_epsilon_pvc_element, judge_run, OracleEnvironment, QueryMode};
use pvc_core::rational::ratio;
use pvc_core::Result;

fn main() -> Result<()> {
    let (eps, delta) = (ratio(1, 5), ratio(1, 10));
    println!("tau({eps}, {delta}) = {}", compute_tau(&eps, &delta)?);

    let model = SyntheticModel::Mallows {
        phi: 0.6,
        reference: (0..30).collect(),
    };
    let profile = generate_synthetic(&model, 60, 30, 3)?;
    let counts: Vec<usize> = (1..=30).collect();
    let dist = AlternativeDistribution::from_counts(&counts)?;

    let runs = 50;
    for mode in [QueryMode::Min, QueryMode::Pairwise] {
        let mut hits = 0;
        let mut last = None;
        for seed in 0..runs {
            let mut env = OracleEnvironment::new(profile.clone(), dist.clone(), seed)?;
            let run = find_epsilon_pvc_element(&mut env, &eps, &delta, mode, 1000 + seed)?;
            // judging is the only place the hidden instance is read
            let verdict = judge_run(&run, &env, &eps)?;
            assert!(verdict.in_sample_pvc);
            hits += verdict.in_eps_pvc as usize;
            last = Some(run.trace);
        }
        let t = last.expect("at least one run");
        println!(
            "{mode:<8}: {hits}/{runs} in the core; per run {} generative, {} min, {} pairwise queries",
            t.generative, t.min_queries, t.pairwise
        );
    }
    Ok(())
}
