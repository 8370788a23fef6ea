#![allow(dead_code)]

use pvc_core::profile::{AlternativeDistribution, Profile};
use pvc_core::Rational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_profile(rng: &mut impl Rng, n: usize, m: usize) -> Profile {
    let rankings = (0..n)
        .map(|_| {
            let mut r: Vec<usize> = (0..m).collect();
            r.shuffle(rng);
            r
        })
        .collect();
    Profile::new(rankings).unwrap()
}

/// Integer weights in `0..=5`, roughly a third of them zero, at least one
/// positive.
pub fn random_weights(rng: &mut impl Rng, m: usize) -> AlternativeDistribution {
    loop {
        let counts: Vec<usize> = (0..m)
            .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=5) })
            .collect();
        if counts.iter().any(|&c| c > 0) {
            return AlternativeDistribution::from_counts(&counts).unwrap();
        }
    }
}

pub struct Instance {
    pub profile: Profile,
    pub dist: AlternativeDistribution,
}

/// `count` instances with `n ∈ 1..=max_n`, `m ∈ 2..=max_m`, random weights.
pub fn instances(seed: u64, count: usize, max_n: usize, max_m: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            let m = r.gen_range(2..=max_m);
            let profile = random_profile(&mut r, n, m);
            let dist = random_weights(&mut r, m);
            Instance { profile, dist }
        })
        .collect()
}

pub fn q(num: i64, den: i64) -> Rational {
    pvc_core::rational::ratio(num, den)
}
