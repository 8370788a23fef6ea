//! Generating a core element is easy, identifying one is not.
//!
//! Each fixture is a pair of instances whose ε-cores (for any slack just
//! below ε) are disjoint: `{0}` in one and `{1}` in the other. Telling them
//! apart from samples needs on the order of 1/ε² queries, while the sampling
//! algorithm only ever promises an element that is unblocked in what it saw.
//!
//! ```text
//! cargo run --release --example lower_bounds
//! ```

use pvc_core::pvc::epsilon_pvc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use pvc_core::querysim::{find_epsilon_pvc_element, judge_run, lower_bound_fixture, FixtureKind, QueryMode, QueryOracle};
use pvc_core::rational::ratio;
use pvc_core::Result;

const TRIALS: u64 = 400;

fn main() -> Result<()> {
    let eps = ratio(1, 10);
    let inside = ratio(1, 11);

    for kind in [FixtureKind::Thm51, FixtureKind::Thm52] {
        println!("== {kind:?} ==");
        let f = lower_bound_fixture(kind, &eps, 0)?;
        for (name, env) in [("first", &f.first), ("second", &f.second)] {
            let (p, d) = env.reveal();
            println!("{name}: core at {inside} is {:?}", epsilon_pvc(p, d, &inside)?);
        }

        // guess the instance by majority over k queries (random voters for pairwise)
        for k in [5usize, 25, 125, 625] {
            let mut right = 0;
            for seed in 0..TRIALS {
                let mut f = lower_bound_fixture(kind, &eps, seed)?;
                let truth = seed % 2;
                let env = if truth == 0 { &mut f.first } else { &mut f.second };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let zeros = (0..k)
                    .map(|_| match kind {
                        FixtureKind::Thm51 => env.generative_query(),
                        FixtureKind::Thm52 => {
                            let voter = rng.gen_range(0..env.voter_count());
                            env.pairwise_query(voter, 0, 1).expect("valid query")
                        }
                    })
                    .filter(|&a| a == 0)
                    .count();
                let guess = if 2 * zeros > k { 0 } else { 1 };
                right += (guess == truth) as u64;
            }
            println!("  {k:>4} queries: identified {right}/{TRIALS}");
        }

        let mut favoured = [0u64; 2];
        for seed in 0..TRIALS / 4 {
            let mut f = lower_bound_fixture(kind, &eps, seed)?;
            for (slot, env) in [&mut f.first, &mut f.second].into_iter().enumerate() {
                let run = find_epsilon_pvc_element(env, &eps, &ratio(1, 10), QueryMode::Min, seed)?;
                let verdict = judge_run(&run, env, &eps)?;
                assert!(verdict.in_sample_pvc && verdict.in_eps_pvc);
                favoured[slot] += (run.survivor == slot) as u64;
            }
        }
        println!("  sampling algorithm picked the favoured alternative {:?} of {} times", favoured, TRIALS / 4);
    }
    Ok(())
}
