//! Exact ε-proportional veto core.
//!
//! An alternative `a` is ε-blocked by a coalition `T` with blocking set `S`
//! when every voter in `T` ranks every member of `S` above `a` and
//! `μ(S) > 1 − |T|/n + ε`. The *slack* of `(T, S)` is `μ(S) + |T|/n − 1`, so the
//! critical ε of `a` is the largest slack over all `(T, S)`, clamped at zero.
//!
//! Two independent routes compute it:
//!
//! * [`critical_epsilon`] reduces to a minimum cut. Voters hang off the source
//!   with capacity `1/n`, alternatives `j ≠ a` feed the sink with capacity
//!   `μ(j)`, and voter `i` has an infinite edge to `j` whenever `a ≻_i j`. The
//!   uncut voters and alternatives of any finite cut form a valid `(T, S)`, so
//!   `max slack = 1 − μ(a) − mincut`. With uniform weights this is the integer
//!   network (voter capacity `m`, alternative capacity `n`) scaled by `1/(nm)`.
//! * [`max_blocking_slack`] enumerates every coalition and its maximal blocking
//!   set. Exponential; used as a test oracle and audit.

mod flow;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::profile::{AlternativeDistribution, Profile};
use crate::{AltId, Error, Rational, Result, VoterId};

pub use flow::{max_flow, min_cut, Capacity, FlowEdge, FlowNetwork, MinCut};

/// Default coalition-enumeration cap for [`max_blocking_slack`].
pub const BRUTE_FORCE_CAP: usize = 16;
/// Default coalition-enumeration cap for [`classic_pvc`].
pub const CLASSIC_PVC_CAP: usize = 20;

/// A coalition `T` and blocking set `S` against some challenged alternative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingWitness {
    pub coalition: Vec<VoterId>,
    pub blocking_set: Vec<AltId>,
    /// `μ(S) + |T|/n − 1`.
    #[serde(with = "crate::rational::serde_string")]
    pub slack: Rational,
}

impl BlockingWitness {
    /// Re-derives the slack from scratch and checks the preference condition.
    pub fn verify(&self, profile: &Profile, dist: &AlternativeDistribution, challenged: AltId) -> Result<Rational> {
        if self.blocking_set.contains(&challenged) {
            return Err(Error::invalid("blocking set contains the challenged alternative"));
        }
        for &i in &self.coalition {
            for &b in &self.blocking_set {
                if !profile.prefers(i, b, challenged) {
                    return Err(Error::invalid(format!(
                        "voter {i} does not prefer {b} to {challenged}"
                    )));
                }
            }
        }
        let slack = blocking_slack(profile, dist, self.coalition.len(), &self.blocking_set);
        if slack != self.slack {
            return Err(Error::invalid(format!(
                "recorded slack {} differs from recomputed {slack}",
                self.slack
            )));
        }
        Ok(slack)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Flow,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalEpsilonResult {
    pub alt: AltId,
    #[serde(with = "crate::rational::serde_string")]
    pub value: Rational,
    /// Present exactly when `value > 0`; then `witness.slack == value`.
    pub witness: Option<BlockingWitness>,
    pub method: Method,
}

/// `μ(S) + |T|/n − 1`.
pub fn blocking_slack(profile: &Profile, dist: &AlternativeDistribution, coalition_size: usize, set: &[AltId]) -> Rational {
    dist.mass(set.iter().copied())
        + Rational::new(BigInt::from(coalition_size), BigInt::from(profile.n()))
        - Rational::one()
}

fn check_inputs(profile: &Profile, dist: &AlternativeDistribution, alt: AltId) -> Result<()> {
    dist.check_matches(profile)?;
    if alt >= profile.m() {
        return Err(Error::invalid(format!(
            "alternative {alt} out of range 0..{}",
            profile.m()
        )));
    }
    Ok(())
}

// Node layout shared by both network builders.
const SOURCE: usize = 0;
const SINK: usize = 1;

/// One node per voter: `source → i` with capacity `1/n`, `j → sink` with
/// capacity `μ(j)` for `j ≠ a`, and `i → j` infinite exactly when `a ≻_i j`.
///
/// Nodes: `0` source, `1` sink, `2..2+n` voters, `2+n..2+n+m` alternatives
/// (the node of `a` itself stays isolated).
pub fn build_blocking_network(profile: &Profile, dist: &AlternativeDistribution, alt: AltId) -> Result<FlowNetwork> {
    check_inputs(profile, dist, alt)?;
    let (n, m) = (profile.n(), profile.m());
    let voter_node = |i: usize| 2 + i;
    let alt_node = |j: usize| 2 + n + j;
    let mut net = FlowNetwork::new(2 + n + m, SOURCE, SINK)?;
    let share = Rational::new(BigInt::one(), BigInt::from(n));
    for i in 0..n {
        net.add_edge(SOURCE, voter_node(i), Capacity::Finite(share.clone()))?;
    }
    for j in (0..m).filter(|&j| j != alt) {
        net.add_edge(alt_node(j), SINK, Capacity::Finite(dist.weight(j).clone()))?;
    }
    for i in 0..n {
        for &j in &profile.ranking(i)[profile.position(i, alt) + 1..] {
            net.add_edge(voter_node(i), alt_node(j), Capacity::Infinite)?;
        }
    }
    Ok(net)
}

/// Critical ε of `alt` via the min-cut reduction.
///
/// Voters with the same set of alternatives below `alt` are merged into one
/// node carrying their combined capacity; an optimal cut never separates such
/// voters, so the cut value is unchanged.
pub fn critical_epsilon(profile: &Profile, dist: &AlternativeDistribution, alt: AltId) -> Result<CriticalEpsilonResult> {
    check_inputs(profile, dist, alt)?;
    let (n, m) = (profile.n(), profile.m());

    let mut groups: BTreeMap<Vec<bool>, Vec<VoterId>> = BTreeMap::new();
    for i in 0..n {
        let mut below = vec![false; m];
        for &j in &profile.ranking(i)[profile.position(i, alt) + 1..] {
            below[j] = true;
        }
        groups.entry(below).or_default().push(i);
    }
    let groups: Vec<(Vec<bool>, Vec<VoterId>)> = groups.into_iter().collect();
    let g = groups.len();
    let alt_node = |j: usize| 2 + g + j;
    let mut net = FlowNetwork::new(2 + g + m, SOURCE, SINK)?;
    for (k, (_, members)) in groups.iter().enumerate() {
        let cap = Rational::new(BigInt::from(members.len()), BigInt::from(n));
        net.add_edge(SOURCE, 2 + k, Capacity::Finite(cap))?;
    }
    for j in (0..m).filter(|&j| j != alt) {
        net.add_edge(alt_node(j), SINK, Capacity::Finite(dist.weight(j).clone()))?;
    }
    for (k, (below, _)) in groups.iter().enumerate() {
        for j in (0..m).filter(|&j| below[j]) {
            net.add_edge(2 + k, alt_node(j), Capacity::Infinite)?;
        }
    }

    let cut = min_cut(&net)?;
    let slack = Rational::one() - dist.weight(alt) - &cut.value;
    let witness = if slack.is_positive() {
        let mut coalition: Vec<VoterId> = groups
            .iter()
            .enumerate()
            .filter(|(k, _)| cut.source_side[2 + k])
            .flat_map(|(_, (_, members))| members.iter().copied())
            .collect();
        coalition.sort_unstable();
        let blocking_set: Vec<AltId> = (0..m)
            .filter(|&j| j != alt && !cut.source_side[alt_node(j)])
            .collect();
        let witness_slack = blocking_slack(profile, dist, coalition.len(), &blocking_set);
        debug_assert_eq!(witness_slack, slack);
        Some(BlockingWitness {
            coalition,
            blocking_set,
            slack: witness_slack,
        })
    } else {
        None
    };
    Ok(CriticalEpsilonResult {
        alt,
        value: clamp(slack),
        witness,
        method: Method::Flow,
    })
}

fn clamp(slack: Rational) -> Rational {
    if slack.is_positive() {
        slack
    } else {
        Rational::zero()
    }
}

/// Critical ε of every alternative, computed in parallel.
pub fn critical_epsilons(profile: &Profile, dist: &AlternativeDistribution) -> Result<Vec<CriticalEpsilonResult>> {
    dist.check_matches(profile)?;
    (0..profile.m())
        .into_par_iter()
        .map(|a| critical_epsilon(profile, dist, a))
        .collect()
}

/// Brute-force critical ε with the default cap of [`BRUTE_FORCE_CAP`] voters.
pub fn max_blocking_slack(profile: &Profile, dist: &AlternativeDistribution, alt: AltId) -> Result<CriticalEpsilonResult> {
    max_blocking_slack_with_cap(profile, dist, alt, BRUTE_FORCE_CAP)
}

/// Enumerates every nonempty coalition `T`, takes its maximal blocking set
/// `S_T = {b : b ≻_i alt for all i ∈ T}` and maximises the slack. The first
/// coalition (in bitmask order) attaining the maximum is the witness.
pub fn max_blocking_slack_with_cap(
    profile: &Profile,
    dist: &AlternativeDistribution,
    alt: AltId,
    cap: usize,
) -> Result<CriticalEpsilonResult> {
    check_inputs(profile, dist, alt)?;
    let n = profile.n();
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::EnumerationCap { n, cap });
    }
    let m = profile.m();
    let above: Vec<Bitset> = (0..n)
        .map(|i| Bitset::from_iter(m, profile.ranking(i)[..profile.position(i, alt)].iter().copied()))
        .collect();

    let (scaled, scale) = scaled_weights(dist);
    let n_big = BigInt::from(n);
    // Maximise n·μ_scaled(S_T) + |T|·scale, i.e. (slack + 1)·n·scale.
    let mut best: Option<(BigInt, usize)> = None;
    let mut inter: Vec<Bitset> = Vec::with_capacity(1 << n);
    inter.push(Bitset::full(m));
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let set = inter[mask & (mask - 1)].and(&above[low]);
        let mass: BigInt = set.iter().map(|j| &scaled[j]).sum();
        let key = &n_big * mass + BigInt::from(mask.count_ones()) * &scale;
        if best.as_ref().is_none_or(|(k, _)| key > *k) {
            best = Some((key, mask));
        }
        inter.push(set);
    }
    let (key, mask) = best.expect("n >= 1");
    let slack = Rational::new(key, &n_big * &scale) - Rational::one();
    let witness = slack.is_positive().then(|| BlockingWitness {
        coalition: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        blocking_set: inter[mask].iter().collect(),
        slack: slack.clone(),
    });
    Ok(CriticalEpsilonResult {
        alt,
        value: clamp(slack),
        witness,
        method: Method::BruteForce,
    })
}

fn scaled_weights(dist: &AlternativeDistribution) -> (Vec<BigInt>, BigInt) {
    let scale = dist
        .weights()
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled = dist
        .weights()
        .iter()
        .map(|w| w.numer() * (&scale / w.denom()))
        .collect();
    (scaled, scale)
}

/// The ε-PVC: alternatives whose critical ε is at most `eps` (blocking is
/// strict, so slack equal to `eps` does not block). Sorted ascending.
pub fn epsilon_pvc(profile: &Profile, dist: &AlternativeDistribution, eps: &Rational) -> Result<Vec<AltId>> {
    if eps.is_negative() {
        return Err(Error::invalid(format!("epsilon {eps} is negative")));
    }
    Ok(critical_epsilons(profile, dist)?
        .into_iter()
        .filter(|r| r.value <= *eps)
        .map(|r| r.alt)
        .collect())
}

/// `f(x) = ⌈(x/n)·m − 1⌉`: how many alternatives a coalition of `x` of `n`
/// voters may veto among `m`.
pub fn veto_function(x: usize, n: usize, m: usize) -> Result<usize> {
    if x == 0 || x > n {
        return Err(Error::invalid(format!("coalition size {x} outside 1..={n}")));
    }
    let num = (x as i128) * (m as i128) - n as i128;
    let value = Integer::div_ceil(&num, &(n as i128));
    Ok(value.to_usize().expect("x ≥ 1 keeps the ceiling nonnegative"))
}

/// The classic proportional veto core with the default cap of
/// [`CLASSIC_PVC_CAP`] voters.
pub fn classic_pvc(profile: &Profile) -> Result<Vec<AltId>> {
    classic_pvc_with_cap(profile, CLASSIC_PVC_CAP)
}

/// Alternatives not vetoed by any coalition `T` holding a set `S` of at least
/// `m − f(|T|)` alternatives that all of `T` rank above them. Enumerates
/// coalitions.
pub fn classic_pvc_with_cap(profile: &Profile, cap: usize) -> Result<Vec<AltId>> {
    let (n, m) = (profile.n(), profile.m());
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::EnumerationCap { n, cap });
    }
    let threshold: Vec<usize> = std::iter::once(usize::MAX)
        .chain((1..=n).map(|x| m - veto_function(x, n, m).expect("x in range")))
        .collect();
    let mut core = Vec::new();
    let mut inter: Vec<Bitset> = Vec::with_capacity(1 << n);
    for a in 0..m {
        let above: Vec<Bitset> = (0..n)
            .map(|i| Bitset::from_iter(m, profile.ranking(i)[..profile.position(i, a)].iter().copied()))
            .collect();
        inter.clear();
        inter.push(Bitset::full(m));
        let mut vetoed = false;
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            let set = inter[mask & (mask - 1)].and(&above[low]);
            if set.len() >= threshold[mask.count_ones() as usize] {
                vetoed = true;
                break;
            }
            inter.push(set);
        }
        if !vetoed {
            core.push(a);
        }
    }
    Ok(core)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn empty(m: usize) -> Self {
        Bitset {
            words: vec![0; m.div_ceil(64)],
        }
    }

    fn full(m: usize) -> Self {
        let mut s = Self::empty(m);
        for j in 0..m {
            s.words[j / 64] |= 1 << (j % 64);
        }
        s
    }

    fn from_iter(m: usize, items: impl Iterator<Item = usize>) -> Self {
        let mut s = Self::empty(m);
        for j in items {
            s.words[j / 64] |= 1 << (j % 64);
        }
        s
    }

    fn and(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn uniform(m: usize) -> AlternativeDistribution {
        AlternativeDistribution::uniform(m).unwrap()
    }

    #[test]
    fn top_choice_has_zero_critical_epsilon() {
        let p = Profile::new(vec![vec![0, 1]]).unwrap();
        for r in [critical_epsilon(&p, &uniform(2), 0).unwrap(), max_blocking_slack(&p, &uniform(2), 0).unwrap()] {
            assert_eq!(r.value, int(0));
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn single_voter_bottom_choice() {
        // T = {0}, S = {0}: 1/2 + 1 − 1
        let p = Profile::new(vec![vec![0, 1]]).unwrap();
        let d = uniform(2);
        for r in [critical_epsilon(&p, &d, 1).unwrap(), max_blocking_slack(&p, &d, 1).unwrap()] {
            assert_eq!(r.value, ratio(1, 2));
            let w = r.witness.unwrap();
            assert_eq!((w.coalition.as_slice(), w.blocking_set.as_slice()), (&[0][..], &[0][..]));
            assert_eq!(w.verify(&p, &d, 1).unwrap(), ratio(1, 2));
        }
        // Alg. 1 arithmetic: (2·1·2 − 1 − 0)/(1·2) − 1 with K = 0.
        assert_eq!(ratio(2 * 2 - 1, 2) - int(1), ratio(1, 2));
    }

    #[test]
    fn common_bottom_alternative() {
        let p = Profile::new(vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2]]).unwrap();
        let d = uniform(3);
        let flow = critical_epsilon(&p, &d, 2).unwrap();
        let brute = max_blocking_slack(&p, &d, 2).unwrap();
        assert_eq!(flow.value, ratio(2, 3));
        assert_eq!(brute.value, ratio(2, 3));
        let w = brute.witness.unwrap();
        assert_eq!(w.coalition, vec![0, 1, 2]);
        assert_eq!(w.blocking_set, vec![0, 1]);
    }

    #[test]
    fn opposed_pair_is_all_core() {
        let p = Profile::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let d = uniform(2);
        for a in 0..2 {
            assert_eq!(critical_epsilon(&p, &d, a).unwrap().value, int(0));
            assert_eq!(max_blocking_slack(&p, &d, a).unwrap().value, int(0));
        }
        assert_eq!(classic_pvc(&p).unwrap(), vec![0, 1]);
    }

    #[test]
    fn network_shapes() {
        // a = 0 ranked first by everyone: complete conflict graph.
        let p = Profile::new(vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        let net = build_blocking_network(&p, &uniform(3), 0).unwrap();
        assert_eq!(net.infinite_edge_count(), 2 * 2);
        // bottom-ranked by everyone: no conflict edges.
        let net = build_blocking_network(&p, &uniform(3), 1).unwrap();
        assert_eq!(net.infinite_edge_count(), 1);
        let p = Profile::new(vec![vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        assert_eq!(build_blocking_network(&p, &uniform(3), 0).unwrap().infinite_edge_count(), 0);
    }

    #[test]
    fn single_voter_network_has_zero_cut() {
        let p = Profile::new(vec![vec![0, 1]]).unwrap();
        let net = build_blocking_network(&p, &uniform(2), 1).unwrap();
        assert_eq!(net.infinite_edge_count(), 0);
        assert_eq!(max_flow(&net).unwrap(), int(0));
        let finite: Vec<_> = net
            .edges()
            .iter()
            .map(|e| (e.from, e.to, e.capacity.clone()))
            .collect();
        assert_eq!(
            finite,
            vec![
                (0, 2, Capacity::Finite(int(1))),
                (3, 1, Capacity::Finite(ratio(1, 2))),
            ]
        );
    }

    #[test]
    fn epsilon_pvc_examples() {
        let p = Profile::new(vec![vec![0, 1]]).unwrap();
        let d = uniform(2);
        assert_eq!(epsilon_pvc(&p, &d, &int(0)).unwrap(), vec![0]);
        assert_eq!(epsilon_pvc(&p, &d, &ratio(1, 2)).unwrap(), vec![0, 1]);
        assert_eq!(epsilon_pvc(&p, &d, &int(1)).unwrap(), vec![0, 1]);
        assert!(epsilon_pvc(&p, &d, &ratio(-1, 2)).is_err());
    }

    #[test]
    fn veto_function_examples() {
        assert_eq!(veto_function(5, 5, 7).unwrap(), 6);
        assert_eq!(veto_function(1, 3, 3).unwrap(), 0);
        assert_eq!(veto_function(2, 4, 6).unwrap(), 2);
        assert_eq!(veto_function(1, 5, 2).unwrap(), 0);
        assert!(veto_function(0, 3, 3).is_err());
        assert!(veto_function(4, 3, 3).is_err());
    }

    #[test]
    fn classic_examples() {
        let p = Profile::new(vec![vec![0, 1]]).unwrap();
        assert_eq!(classic_pvc(&p).unwrap(), vec![0]);
    }

    #[test]
    fn zero_weight_alternatives() {
        // Alternative 2 carries no mass: preferring it adds nothing to μ(S).
        let p = Profile::new(vec![vec![2, 0, 1], vec![2, 1, 0]]).unwrap();
        let d = AlternativeDistribution::new(vec![ratio(1, 2), ratio(1, 2), int(0)]).unwrap();
        for a in 0..3 {
            assert_eq!(
                critical_epsilon(&p, &d, a).unwrap().value,
                max_blocking_slack(&p, &d, a).unwrap().value
            );
        }
        assert_eq!(critical_epsilon(&p, &d, 2).unwrap().value, int(0));
    }

    #[test]
    fn cap_is_enforced() {
        let p = Profile::new(vec![vec![0, 1]; 5]).unwrap();
        assert!(matches!(
            max_blocking_slack_with_cap(&p, &uniform(2), 1, 4),
            Err(Error::EnumerationCap { n: 5, cap: 4 })
        ));
        assert!(classic_pvc_with_cap(&p, 4).is_err());
    }

    #[test]
    fn input_validation() {
        let p = Profile::new(vec![vec![0, 1]]).unwrap();
        assert!(critical_epsilon(&p, &uniform(3), 0).is_err());
        assert!(critical_epsilon(&p, &uniform(2), 2).is_err());
    }
}
