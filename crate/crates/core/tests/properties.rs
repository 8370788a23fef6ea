use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::sample::subsequence;

use pvc_core::harness::{aggregate, default_cdf_grid, evaluate_insertion, EvaluationRecord, InsertedStatement};
use pvc_core::profile::{btl_distribution, AlternativeDistribution, Profile, UtilityProfile};
use pvc_core::pvc::{classic_pvc, critical_epsilon, critical_epsilons, epsilon_pvc, max_blocking_slack};
use pvc_core::querysim::{
    find_epsilon_pvc_element, judge_run, lower_bound_fixture, FixtureKind, OracleEnvironment, QueryMode,
};
use pvc_core::rational::ratio;
use pvc_core::rules::{veto_by_consumption, vote_by_gamma_veto, vote_by_veto};
use pvc_core::Rational;

fn ranking(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

fn profile_with(max_n: usize, max_m: usize) -> impl Strategy<Value = Profile> {
    (1..=max_n, 2..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(ranking(m), n).prop_map(|r| Profile::new(r).unwrap())
    })
}

fn weights(m: usize) -> impl Strategy<Value = AlternativeDistribution> {
    prop::collection::vec(0usize..=5, m)
        .prop_filter("some mass", |c| c.iter().any(|&x| x > 0))
        .prop_map(|c| AlternativeDistribution::from_counts(&c).unwrap())
}

fn instance() -> impl Strategy<Value = (Profile, AlternativeDistribution)> {
    profile_with(7, 6).prop_flat_map(|p| {
        let m = p.m();
        (Just(p), weights(m))
    })
}

fn eps_strategy() -> impl Strategy<Value = Rational> {
    (0i64..=20).prop_map(|k| ratio(k, 20))
}

fn permuted(p: &Profile, voters: &[usize]) -> Profile {
    Profile::new(voters.iter().map(|&i| p.ranking(i).to_vec()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn flow_matches_brute_force((p, d) in instance()) {
        for a in 0..p.m() {
            let flow = critical_epsilon(&p, &d, a).unwrap();
            prop_assert_eq!(&flow.value, &max_blocking_slack(&p, &d, a).unwrap().value);
            if let Some(w) = &flow.witness {
                prop_assert_eq!(w.verify(&p, &d, a).unwrap(), flow.value.clone());
            } else {
                prop_assert!(flow.value.is_zero());
            }
        }
    }

    #[test]
    fn cores_are_nested_and_match_critical((p, d) in instance(), e1 in eps_strategy(), e2 in eps_strategy()) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let small = epsilon_pvc(&p, &d, &lo).unwrap();
        let large = epsilon_pvc(&p, &d, &hi).unwrap();
        prop_assert!(small.iter().all(|a| large.contains(a)));
        let critical = critical_epsilons(&p, &d).unwrap();
        let expected: Vec<usize> = critical.iter().filter(|c| c.value <= lo).map(|c| c.alt).collect();
        prop_assert_eq!(small, expected);
    }

    #[test]
    fn core_mass_at_least_eps((p, d) in instance(), eps in eps_strategy()) {
        let core = epsilon_pvc(&p, &d, &eps).unwrap();
        prop_assert!(d.mass(core.iter().copied()) >= eps);
    }

    #[test]
    fn lifting_never_hurts((p, d) in instance(), voter in any::<prop::sample::Index>(), alt in any::<prop::sample::Index>()) {
        let a = alt.index(p.m());
        let i = voter.index(p.n());
        let pos = p.position(i, a);
        prop_assume!(pos > 0);
        let mut rankings = p.rankings().to_vec();
        rankings[i].swap(pos, pos - 1);
        let lifted = Profile::new(rankings).unwrap();
        prop_assert!(critical_epsilon(&lifted, &d, a).unwrap().value <= critical_epsilon(&p, &d, a).unwrap().value);
    }

    #[test]
    fn soc_round_trip(p in profile_with(9, 7)) {
        let back = Profile::parse_soc(&p.to_soc()).unwrap();
        prop_assert_eq!((back.n(), back.m()), (p.n(), p.m()));
        prop_assert_eq!(back.ballot_counts(), p.ballot_counts());
        prop_assert_eq!(back.to_soc(), p.to_soc());
    }

    #[test]
    fn btl_weights_sum_to_one(rows in (1usize..6, 1usize..6).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(0i64..10, m), n)
    })) {
        let rows: Vec<Vec<Rational>> = rows
            .into_iter()
            .map(|mut row| {
                if row.iter().all(|&x| x == 0) {
                    row[0] = 1;
                }
                let total: i64 = row.iter().sum();
                row.into_iter().map(|x| ratio(x, total)).collect()
            })
            .collect();
        let d = btl_distribution(&UtilityProfile::new(rows).unwrap());
        prop_assert!(d.weights().iter().sum::<Rational>().is_one());
    }

    #[test]
    fn anonymous((p, d) in instance(), order in Just(()).prop_perturb(|_, mut rng| rng.next_u64())) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut voters: Vec<usize> = (0..p.n()).collect();
        voters.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(order));
        let q = permuted(&p, &voters);
        for a in 0..p.m() {
            prop_assert_eq!(critical_epsilon(&p, &d, a).unwrap().value, critical_epsilon(&q, &d, a).unwrap().value);
        }
    }

    #[test]
    fn neutral((p, d) in instance(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let m = p.m();
        let mut relabel: Vec<usize> = (0..m).collect();
        relabel.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let q = Profile::new(p.rankings().iter().map(|r| r.iter().map(|&a| relabel[a]).collect()).collect()).unwrap();
        let mut w = vec![Rational::zero(); m];
        for (a, &b) in relabel.iter().enumerate() {
            w[b] = d.weight(a).clone();
        }
        let e = AlternativeDistribution::new(w).unwrap();
        for (a, &b) in relabel.iter().enumerate() {
            prop_assert_eq!(critical_epsilon(&p, &d, a).unwrap().value, critical_epsilon(&q, &e, b).unwrap().value);
        }
    }

    #[test]
    fn vbc_winner_in_classic_core(p in profile_with(8, 6)) {
        let winner = veto_by_consumption(&p).winner;
        prop_assert!(classic_pvc(&p).unwrap().contains(&winner));
    }

    #[test]
    fn veto_survivor_unblocked_among_its_vetoers(p in profile_with(6, 6), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let order: Vec<usize> = (0..p.m() - 1).map(|_| rng.gen_range(0..p.n())).collect();
        let winner = vote_by_veto(&p, &order).unwrap().winner;
        let alts: Vec<usize> = (0..p.m()).collect();
        let sub = p.restrict(&order, &alts).unwrap();
        let uniform = AlternativeDistribution::uniform(p.m()).unwrap();
        prop_assert!(critical_epsilon(&sub, &uniform, winner).unwrap().value.is_zero());
    }

    #[test]
    fn gamma_veto_is_sound((p, d) in instance(), k in 1i64..=20, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let eps = ratio(k, 20);
        let mut order: Vec<usize> = (0..p.n()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let out = vote_by_gamma_veto(&p, &d, &eps, &order).unwrap();
        prop_assert_eq!(&out.residual_mass, &eps);
        prop_assert_eq!(out.state.tracked_mass(), eps.clone());
        for &a in &out.survivors {
            prop_assert!(critical_epsilon(&p, &d, a).unwrap().value <= eps);
        }
    }

    #[test]
    fn insertion_leaves_originals_alone((p, d) in instance(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let positions: Vec<usize> = (0..p.n()).map(|_| rng.gen_range(0..=p.m())).collect();
        let ext = p.with_inserted(&positions).unwrap();
        let ext_d = d.with_zero_mass_alternative();
        for a in 0..p.m() {
            prop_assert_eq!(critical_epsilon(&p, &d, a).unwrap().value, critical_epsilon(&ext, &ext_d, a).unwrap().value);
        }
        let s = InsertedStatement { label: "s".into(), positions };
        let v = evaluate_insertion(&p, &d, &s).unwrap().value;
        prop_assert!(v >= Rational::zero() && v <= Rational::one());
    }

    #[test]
    fn aggregation_ignores_record_order(values in prop::collection::vec((0usize..3, 0i64..=100), 1..40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let rules = ["vbc", "borda", "insert:x"];
        let mut records: Vec<EvaluationRecord> = values
            .iter()
            .enumerate()
            .map(|(k, &(r, v))| EvaluationRecord {
                replication: k,
                subsample: Some(0),
                rule: rules[r].into(),
                winner: 0,
                critical_epsilon: ratio(v, 100),
                trace_steps: 0,
            })
            .collect();
        let before = aggregate(&records, &default_cdf_grid()).unwrap();
        records.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(aggregate(&records, &default_cdf_grid()).unwrap(), before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn min_and_pairwise_modes_agree((p, d) in instance(), seed in any::<u64>()) {
        let (eps, delta) = (ratio(1, 2), ratio(1, 2));
        let mut a = OracleEnvironment::new(p.clone(), d.clone(), seed).unwrap();
        let mut b = OracleEnvironment::new(p, d, seed).unwrap();
        let x = find_epsilon_pvc_element(&mut a, &eps, &delta, QueryMode::Min, seed).unwrap();
        let y = find_epsilon_pvc_element(&mut b, &eps, &delta, QueryMode::Pairwise, seed).unwrap();
        prop_assert_eq!(x.survivor, y.survivor);
        prop_assert_eq!(&x.sampled_voters, &y.sampled_voters);
        prop_assert_eq!(a.hidden_reads(), 0);
        prop_assert!(judge_run(&x, &a, &eps).unwrap().in_sample_pvc);
    }

    /// Either fixture instance could be the hidden one; the sampling
    /// algorithm still lands on something unblocked in what it saw, and the
    /// two cores just below ε never overlap.
    #[test]
    fn lower_bound_pairs(k in 1i64..10, kind in prop_oneof![Just(FixtureKind::Thm51), Just(FixtureKind::Thm52)], seed in any::<u64>()) {
        let eps = ratio(k, 20);
        let below = &eps - ratio(1, 1000);
        let mut f = lower_bound_fixture(kind, &eps, seed).unwrap();
        let mut cores = Vec::new();
        for env in [&mut f.first, &mut f.second] {
            let (p, d) = env.reveal();
            cores.push(epsilon_pvc(p, d, &below).unwrap());
            prop_assert_eq!(epsilon_pvc(p, d, &eps).unwrap(), vec![0, 1]);
            let run = find_epsilon_pvc_element(env, &eps, &ratio(1, 10), QueryMode::Min, seed).unwrap();
            prop_assert!(judge_run(&run, env, &eps).unwrap().in_sample_pvc);
        }
        prop_assert_eq!(&cores[0], &vec![0]);
        prop_assert_eq!(&cores[1], &vec![1]);
    }

    #[test]
    fn restriction_keeps_order(p in profile_with(6, 6), keep in subsequence((0..6).collect::<Vec<usize>>(), 1..=6)) {
        let alts: Vec<usize> = keep.into_iter().filter(|&a| a < p.m()).collect();
        prop_assume!(!alts.is_empty());
        let voters: Vec<usize> = (0..p.n()).collect();
        let r = p.restrict(&voters, &alts).unwrap();
        for i in 0..p.n() {
            for x in 0..alts.len() {
                for y in 0..alts.len() {
                    if x != y {
                        prop_assert_eq!(r.prefers(i, x, y), p.prefers(i, alts[x], alts[y]));
                    }
                }
            }
        }
    }
}
