//! Query-bounded elicitation.
//!
//! Algorithms see the electorate only through a [`QueryOracle`]: generative
//! queries draw alternatives from the hidden distribution, min and pairwise
//! queries ask a voter about their hidden ranking. [`OracleEnvironment`] is the
//! reference oracle; it counts every query and keeps the hidden profile out of
//! reach except through [`OracleEnvironment::reveal`], which is for judges.

mod fixtures;
mod tau;

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::profile::{AlternativeDistribution, Profile};
use crate::pvc::critical_epsilon;
use crate::{AltId, Error, Rational, Result, VoterId};

pub use fixtures::{lower_bound_fixture, FixtureKind, LowerBoundFixture};
pub use tau::{compute_tau, tau_f64};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryTrace {
    pub generative: u64,
    pub min_queries: u64,
    pub pairwise: u64,
}

impl QueryTrace {
    /// Queries issued since `earlier` was taken from the same oracle.
    pub fn since(&self, earlier: &QueryTrace) -> QueryTrace {
        QueryTrace {
            generative: self.generative - earlier.generative,
            min_queries: self.min_queries - earlier.min_queries,
            pairwise: self.pairwise - earlier.pairwise,
        }
    }
}

/// One generative draw: `draw` is its index in the sample, `alt` what was
/// drawn. Copies of an alternative are distinct slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub draw: usize,
    pub alt: AltId,
}

pub trait QueryOracle {
    fn voter_count(&self) -> usize;

    /// An independent draw from the hidden distribution.
    fn generative_query(&mut self) -> AltId;

    /// The element of `x` the voter ranks lowest. `x` may repeat alternatives.
    fn min_query(&mut self, voter: VoterId, x: &[AltId]) -> Result<AltId>;

    /// The alternative among `a ≠ b` the voter ranks higher.
    fn pairwise_query(&mut self, voter: VoterId, a: AltId, b: AltId) -> Result<AltId>;

    /// Pairwise comparison of two sample slots. Two copies of the same
    /// alternative still cost one query and the answer is `a`.
    fn pairwise_slots(&mut self, voter: VoterId, a: Slot, b: Slot) -> Result<Slot>;

    fn trace(&self) -> QueryTrace;
}

/// Hidden profile and distribution behind a counting oracle.
#[derive(Debug, Clone)]
pub struct OracleEnvironment {
    profile: Profile,
    dist: AlternativeDistribution,
    cumulative: Vec<BigUint>,
    rng: ChaCha8Rng,
    trace: QueryTrace,
    hidden_reads: Cell<usize>,
}

impl OracleEnvironment {
    pub fn new(profile: Profile, dist: AlternativeDistribution, seed: u64) -> Result<Self> {
        dist.check_matches(&profile)?;
        let scale = dist
            .weights()
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let mut running = BigUint::zero();
        let cumulative = dist
            .weights()
            .iter()
            .map(|w| {
                let scaled = w.numer() * (&scale / w.denom());
                running += scaled.to_biguint().expect("weights are nonnegative");
                running.clone()
            })
            .collect();
        Ok(OracleEnvironment {
            profile,
            dist,
            cumulative,
            rng: ChaCha8Rng::seed_from_u64(seed),
            trace: QueryTrace::default(),
            hidden_reads: Cell::new(0),
        })
    }

    /// Hidden state, for judging results only. Every call is counted.
    pub fn reveal(&self) -> (&Profile, &AlternativeDistribution) {
        self.hidden_reads.set(self.hidden_reads.get() + 1);
        (&self.profile, &self.dist)
    }

    /// How many times [`reveal`](Self::reveal) has been called.
    pub fn hidden_reads(&self) -> usize {
        self.hidden_reads.get()
    }

    fn check_voter(&self, voter: VoterId) -> Result<()> {
        if voter >= self.profile.n() {
            return Err(Error::Query(format!("voter {voter} out of range")));
        }
        Ok(())
    }

    fn check_alt(&self, alt: AltId) -> Result<()> {
        if alt >= self.profile.m() {
            return Err(Error::Query(format!("alternative {alt} out of range")));
        }
        Ok(())
    }
}

impl QueryOracle for OracleEnvironment {
    fn voter_count(&self) -> usize {
        self.profile.n()
    }

    fn generative_query(&mut self) -> AltId {
        self.trace.generative += 1;
        let total = self.cumulative.last().expect("nonempty distribution");
        let u = self.rng.gen_biguint_below(total);
        self.cumulative.partition_point(|c| *c <= u)
    }

    fn min_query(&mut self, voter: VoterId, x: &[AltId]) -> Result<AltId> {
        self.check_voter(voter)?;
        if x.is_empty() {
            return Err(Error::Query("min query on an empty set".into()));
        }
        for &a in x {
            self.check_alt(a)?;
        }
        self.trace.min_queries += 1;
        Ok(*x
            .iter()
            .max_by_key(|&&a| self.profile.position(voter, a))
            .expect("nonempty"))
    }

    fn pairwise_query(&mut self, voter: VoterId, a: AltId, b: AltId) -> Result<AltId> {
        self.check_voter(voter)?;
        self.check_alt(a)?;
        self.check_alt(b)?;
        if a == b {
            return Err(Error::Query(format!("pairwise query needs two different alternatives, got {a} twice")));
        }
        self.trace.pairwise += 1;
        Ok(if self.profile.prefers(voter, a, b) { a } else { b })
    }

    fn pairwise_slots(&mut self, voter: VoterId, a: Slot, b: Slot) -> Result<Slot> {
        if a.alt == b.alt {
            self.check_voter(voter)?;
            self.check_alt(a.alt)?;
            self.trace.pairwise += 1;
            return Ok(a);
        }
        let preferred = self.pairwise_query(voter, a.alt, b.alt)?;
        Ok(if preferred == a.alt { a } else { b })
    }

    fn trace(&self) -> QueryTrace {
        self.trace
    }
}

/// A voter's least favourite element of `x` by a linear scan of pairwise
/// queries, keeping the loser of each comparison: `|x| − 1` queries.
pub fn min_via_pairwise<O: QueryOracle + ?Sized>(oracle: &mut O, voter: VoterId, x: &[AltId]) -> Result<AltId> {
    let slots: Vec<Slot> = x.iter().enumerate().map(|(draw, &alt)| Slot { draw, alt }).collect();
    Ok(worst_slot(oracle, voter, &slots)?.alt)
}

fn worst_slot<O: QueryOracle + ?Sized>(oracle: &mut O, voter: VoterId, slots: &[Slot]) -> Result<Slot> {
    let (&first, rest) = slots
        .split_first()
        .ok_or_else(|| Error::Query("min query on an empty set".into()))?;
    let mut worst = first;
    for &s in rest {
        if oracle.pairwise_slots(voter, worst, s)? == worst {
            worst = s;
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    Min,
    Pairwise,
}

impl fmt::Display for QueryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryMode::Min => "min",
            QueryMode::Pairwise => "pairwise",
        })
    }
}

impl FromStr for QueryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(QueryMode::Min),
            "pairwise" => Ok(QueryMode::Pairwise),
            other => Err(Error::invalid(format!("unknown query mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationRun {
    pub survivor: AltId,
    pub tau: u64,
    /// Queries spent by this run.
    pub trace: QueryTrace,
    /// The τ generative draws, in draw order.
    pub sampled_alternatives: Vec<AltId>,
    /// The τ − 1 vetoing voters, in round order.
    pub sampled_voters: Vec<VoterId>,
}

/// Sample-then-veto elicitation of an ε-PVC element.
///
/// Draws τ alternatives by generative queries, then for τ − 1 rounds picks a
/// voter uniformly at random (with replacement, from `seed`) and removes one
/// copy of their least favourite remaining sample. Min mode spends one min
/// query per round; pairwise mode finds the same element with `k − 1`
/// pairwise queries when `k` samples remain.
pub fn find_epsilon_pvc_element<O: QueryOracle + ?Sized>(
    oracle: &mut O,
    eps: &Rational,
    delta: &Rational,
    mode: QueryMode,
    seed: u64,
) -> Result<EliminationRun> {
    let n = oracle.voter_count();
    if n == 0 {
        return Err(Error::invalid("elicitation needs at least one voter"));
    }
    let tau = compute_tau(eps, delta)?;
    let size = usize::try_from(tau).map_err(|_| Error::invalid("τ exceeds the address space"))?;
    let start = oracle.trace();
    let sampled_alternatives: Vec<AltId> = (0..size).map(|_| oracle.generative_query()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled_voters = Vec::with_capacity(size - 1);

    let survivor = match mode {
        QueryMode::Min => {
            let mut copies: Vec<(AltId, usize)> = Vec::new();
            let mut sorted = sampled_alternatives.clone();
            sorted.sort_unstable();
            for a in sorted {
                match copies.last_mut() {
                    Some((alt, count)) if *alt == a => *count += 1,
                    _ => copies.push((a, 1)),
                }
            }
            for _ in 1..size {
                let voter = rng.gen_range(0..n);
                sampled_voters.push(voter);
                let support: Vec<AltId> = copies.iter().map(|(a, _)| *a).collect();
                let worst = oracle.min_query(voter, &support)?;
                let k = copies.iter().position(|(a, _)| *a == worst).expect("answer lies in the support");
                copies[k].1 -= 1;
                if copies[k].1 == 0 {
                    copies.remove(k);
                }
            }
            copies[0].0
        }
        QueryMode::Pairwise => {
            let mut slots: Vec<Slot> = sampled_alternatives
                .iter()
                .enumerate()
                .map(|(draw, &alt)| Slot { draw, alt })
                .collect();
            for _ in 1..size {
                let voter = rng.gen_range(0..n);
                sampled_voters.push(voter);
                let worst = worst_slot(oracle, voter, &slots)?;
                slots.retain(|s| *s != worst);
            }
            slots[0].alt
        }
    };
    Ok(EliminationRun {
        survivor,
        tau,
        trace: oracle.trace().since(&start),
        sampled_alternatives,
        sampled_voters,
    })
}

/// The finite instance a run actually decided: its sampled voters (as a
/// multiset) over its distinct sampled alternatives, weighted by how often
/// each was drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubInstance {
    pub profile: Profile,
    pub dist: AlternativeDistribution,
    /// `alternatives[k]` is the parent id of sub-instance alternative `k`.
    pub alternatives: Vec<AltId>,
    pub survivor: AltId,
}

impl EliminationRun {
    pub fn sub_instance(&self, parent: &Profile) -> Result<SubInstance> {
        let mut alternatives = self.sampled_alternatives.clone();
        alternatives.sort_unstable();
        alternatives.dedup();
        let counts: Vec<usize> = alternatives
            .iter()
            .map(|a| self.sampled_alternatives.iter().filter(|x| *x == a).count())
            .collect();
        let profile = parent.restrict(&self.sampled_voters, &alternatives)?;
        let dist = AlternativeDistribution::from_counts(&counts)?;
        let survivor = alternatives
            .binary_search(&self.survivor)
            .map_err(|_| Error::invalid("survivor was never sampled"))?;
        Ok(SubInstance {
            profile,
            dist,
            alternatives,
            survivor,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunVerdict {
    #[serde(with = "crate::rational::serde_string")]
    pub critical_epsilon: Rational,
    pub in_eps_pvc: bool,
    /// Whether the survivor is unblocked in its own sub-instance.
    pub in_sample_pvc: bool,
}

/// Judges a run against the hidden instance.
pub fn judge_run(run: &EliminationRun, env: &OracleEnvironment, eps: &Rational) -> Result<RunVerdict> {
    let (profile, dist) = env.reveal();
    let critical = critical_epsilon(profile, dist, run.survivor)?.value;
    let sub = run.sub_instance(profile)?;
    let sample_critical = critical_epsilon(&sub.profile, &sub.dist, sub.survivor)?.value;
    Ok(RunVerdict {
        in_eps_pvc: critical <= *eps,
        critical_epsilon: critical,
        in_sample_pvc: sample_critical.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pvc::max_blocking_slack;
    use crate::rational::ratio;

    fn env(rankings: Vec<Vec<AltId>>, dist: AlternativeDistribution, seed: u64) -> OracleEnvironment {
        OracleEnvironment::new(Profile::new(rankings).unwrap(), dist, seed).unwrap()
    }

    #[test]
    fn generative_point_mass_and_counts() {
        let mut e = env(vec![vec![0, 1, 2]], AlternativeDistribution::point_mass(3, 1).unwrap(), 3);
        for k in 1..=20 {
            assert_eq!(e.generative_query(), 1);
            assert_eq!(e.trace().generative, k);
        }
    }

    #[test]
    fn generative_frequency() {
        let gamma = ratio(1, 10);
        let d = AlternativeDistribution::new(vec![ratio(1, 2) + &gamma, ratio(1, 2) - &gamma]).unwrap();
        let mut e = env(vec![vec![0, 1]], d, 11);
        let draws = 100_000;
        let hits = (0..draws).filter(|_| e.generative_query() == 0).count() as f64;
        let p = 0.6;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((hits - draws as f64 * p).abs() < 4.0 * sigma);
    }

    #[test]
    fn min_and_pairwise_queries() {
        let mut e = env(vec![vec![0, 1, 2]], AlternativeDistribution::uniform(3).unwrap(), 0);
        assert_eq!(e.min_query(0, &[1]).unwrap(), 1);
        assert_eq!(e.min_query(0, &[0, 2]).unwrap(), 2);
        assert_eq!(e.min_query(0, &[1, 1]).unwrap(), 1);
        assert!(e.min_query(0, &[]).is_err());
        assert!(e.min_query(4, &[0]).is_err());
        assert_eq!(e.pairwise_query(0, 0, 1).unwrap(), 0);
        assert_eq!(e.pairwise_query(0, 1, 0).unwrap(), 0);
        assert!(e.pairwise_query(0, 1, 1).is_err());
        assert_eq!(e.trace().min_queries, 3);
        assert_eq!(e.trace().pairwise, 2);
        assert_eq!(min_via_pairwise(&mut e, 0, &[2]).unwrap(), 2);
        assert_eq!(e.trace().pairwise, 2);
        assert_eq!(min_via_pairwise(&mut e, 0, &[0, 1, 2, 1, 0]).unwrap(), 2);
        assert_eq!(e.trace().pairwise, 6);
    }

    #[test]
    fn pairwise_transitivity() {
        let ranking = vec![3, 0, 4, 1, 2];
        let mut e = env(vec![ranking.clone()], AlternativeDistribution::uniform(5).unwrap(), 0);
        for a in 0..5 {
            for b in 0..5 {
                if a != b {
                    let w = e.pairwise_query(0, a, b).unwrap();
                    let pos = |x| ranking.iter().position(|&y| y == x).unwrap();
                    assert_eq!(w, if pos(a) < pos(b) { a } else { b });
                }
            }
        }
    }

    #[test]
    fn min_via_pairwise_matches_min_query() {
        let p = crate::profile::generate_synthetic(&crate::profile::SyntheticModel::ImpartialCulture, 7, 9, 5).unwrap();
        let mut e = OracleEnvironment::new(p, AlternativeDistribution::uniform(9).unwrap(), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let voter = rng.gen_range(0..7);
            let len = rng.gen_range(1..12);
            let x: Vec<AltId> = (0..len).map(|_| rng.gen_range(0..9)).collect();
            let before = e.trace().pairwise;
            assert_eq!(min_via_pairwise(&mut e, voter, &x).unwrap(), e.min_query(voter, &x).unwrap());
            assert_eq!(e.trace().pairwise - before, len as u64 - 1);
        }
    }

    #[test]
    fn elimination_budgets_and_mode_equivalence() {
        let rankings = vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![1, 3, 0, 2]];
        let d = AlternativeDistribution::new(vec![ratio(1, 2), ratio(1, 4), ratio(1, 8), ratio(1, 8)]).unwrap();
        let (eps, delta) = (ratio(1, 2), ratio(1, 2));
        let mut a = env(rankings.clone(), d.clone(), 17);
        let mut b = env(rankings, d, 17);
        let run_min = find_epsilon_pvc_element(&mut a, &eps, &delta, QueryMode::Min, 5).unwrap();
        let run_pair = find_epsilon_pvc_element(&mut b, &eps, &delta, QueryMode::Pairwise, 5).unwrap();
        assert_eq!(run_min.tau, 233);
        assert_eq!(
            run_min.trace,
            QueryTrace {
                generative: 233,
                min_queries: 232,
                pairwise: 0
            }
        );
        assert_eq!(run_pair.trace.generative, 233);
        assert_eq!(run_pair.trace.pairwise, 233 * 232 / 2);
        assert_eq!(run_min.survivor, run_pair.survivor);
        assert_eq!(run_min.sampled_alternatives, run_pair.sampled_alternatives);
        assert_eq!(run_min.sampled_voters, run_pair.sampled_voters);
        assert_eq!(a.hidden_reads(), 0);
        assert_eq!(b.hidden_reads(), 0);
        let verdict = judge_run(&run_min, &a, &eps).unwrap();
        assert!(verdict.in_sample_pvc);
        assert_eq!(a.hidden_reads(), 1);
    }

    #[test]
    fn elimination_point_mass() {
        let d = AlternativeDistribution::point_mass(3, 2).unwrap();
        let mut e = env(vec![vec![2, 1, 0], vec![0, 1, 2]], d, 0);
        let run = find_epsilon_pvc_element(&mut e, &ratio(1, 2), &ratio(1, 2), QueryMode::Min, 0).unwrap();
        assert_eq!(run.survivor, 2);
    }

    #[test]
    fn small_sub_instance_agrees_with_brute_force() {
        // With ε = 1 the sample is 45 draws; a one-voter electorate keeps the
        // sub-instance within brute-force reach.
        let d = AlternativeDistribution::uniform(4).unwrap();
        let mut e = env(vec![vec![2, 0, 3, 1]], d, 4);
        let run = find_epsilon_pvc_element(&mut e, &ratio(1, 1), &ratio(1, 2), QueryMode::Min, 1).unwrap();
        let (p, _) = e.reveal();
        let sub = run.sub_instance(p).unwrap();
        assert_eq!(sub.profile.n(), 44);
        let single = sub.profile.restrict(&[0], &(0..sub.profile.m()).collect::<Vec<_>>()).unwrap();
        assert!(max_blocking_slack(&single, &sub.dist, sub.survivor).unwrap().value <= Rational::zero());
        assert_eq!(run.survivor, 2);
    }
}
