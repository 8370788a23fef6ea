use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{break_tie, RuleKind, RuleOutcome, TraceStep};
use crate::profile::{AlternativeDistribution, Profile};
use crate::{AltId, Error, Rational, Result, VoterId};

/// `m − 1` vetoes cycling through voters `0, 1, …, n−1, 0, …`.
pub fn default_veto_order(n: usize, m: usize) -> Vec<VoterId> {
    (0..m.saturating_sub(1)).map(|k| k % n.max(1)).collect()
}

/// Sequential vote by veto: each listed voter (repeats allowed) removes their
/// least favourite remaining alternative. Needs exactly `m − 1` vetoes.
pub fn vote_by_veto(profile: &Profile, voter_order: &[VoterId]) -> Result<RuleOutcome> {
    let m = profile.m();
    if voter_order.len() != m - 1 {
        return Err(Error::invalid(format!(
            "vote by veto needs {} vetoes for {m} alternatives, got {}",
            m - 1,
            voter_order.len()
        )));
    }
    if let Some(&v) = voter_order.iter().find(|&&v| v >= profile.n()) {
        return Err(Error::invalid(format!("voter {v} out of range")));
    }
    let mut alive = vec![true; m];
    let mut trace = Vec::with_capacity(m - 1);
    for &voter in voter_order {
        let worst = *profile
            .ranking(voter)
            .iter()
            .rev()
            .find(|&&a| alive[a])
            .expect("at least two alternatives remain");
        alive[worst] = false;
        trace.push(TraceStep::Veto {
            voter,
            removed: vec![worst],
        });
    }
    let winner = alive.iter().position(|&x| x).expect("one survivor");
    Ok(RuleOutcome {
        winner,
        rule: RuleKind::Veto,
        trace,
    })
}

/// Remaining capacities during a γ-veto run; removed alternatives hold zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityState {
    pub capacity: Vec<Rational>,
    pub removed: Vec<bool>,
}

impl CapacityState {
    fn new(dist: &AlternativeDistribution) -> Self {
        CapacityState {
            capacity: dist.weights().to_vec(),
            removed: vec![false; dist.len()],
        }
    }

    /// Tracked mass: remaining capacity of the alternatives still in play.
    pub fn tracked_mass(&self) -> Rational {
        self.capacity
            .iter()
            .zip(&self.removed)
            .filter(|(_, r)| !**r)
            .map(|(c, _)| c)
            .sum()
    }

    fn remove(&mut self, alt: AltId) {
        self.removed[alt] = true;
        self.capacity[alt] = Rational::zero();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaVetoOutcome {
    pub survivors: Vec<AltId>,
    /// Tracked mass left at the end; equals ε exactly.
    pub residual_mass: Rational,
    pub state: CapacityState,
    pub trace: Vec<TraceStep>,
}

/// Vote by γ-veto with `γ = (1 − ε)/n`.
///
/// In `voter_order`, each voter consumes γ of capacity from the bottom of their
/// ranking among the alternatives still in play: the smallest bottom segment
/// `X` whose remaining capacity reaches γ is taken, everything in `X` but its
/// top element is removed, and the top element loses what is still owed (and
/// is removed if that exhausts it exactly). Zero-mass alternatives cost
/// nothing and are swept up by the segment they fall into.
///
/// The amount owed by the top element is `γ` minus the *remaining capacity*
/// of the rest of `X`, so the tracked mass drops by exactly γ per voter.
pub fn vote_by_gamma_veto(
    profile: &Profile,
    dist: &AlternativeDistribution,
    eps: &Rational,
    voter_order: &[VoterId],
) -> Result<GammaVetoOutcome> {
    dist.check_matches(profile)?;
    if !eps.is_positive() || *eps > Rational::one() {
        return Err(Error::invalid(format!("γ-veto needs ε in (0, 1], got {eps}")));
    }
    let n = profile.n();
    let mut seen = vec![false; n];
    if voter_order.len() != n || voter_order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::invalid("voter order must be a permutation of all voters"));
    }

    let gamma = (Rational::one() - eps) / Rational::from_integer(BigInt::from(n));
    let mut state = CapacityState::new(dist);
    let mut trace = Vec::with_capacity(n);
    for &voter in voter_order {
        if gamma.is_zero() {
            continue;
        }
        let mut segment = Vec::new();
        let mut acc = Rational::zero();
        for &x in profile.ranking(voter).iter().rev() {
            if state.removed[x] {
                continue;
            }
            acc += &state.capacity[x];
            segment.push(x);
            if acc >= gamma {
                break;
            }
        }
        debug_assert!(acc >= gamma, "tracked mass stays above γ while ε > 0");
        let top = *segment.last().expect("tracked mass exceeds γ");
        let mut removed = Vec::with_capacity(segment.len());
        let mut owed = gamma.clone();
        for &x in &segment[..segment.len() - 1] {
            owed -= &state.capacity[x];
            state.remove(x);
            removed.push(x);
        }
        if state.capacity[top] <= owed {
            state.remove(top);
            removed.push(top);
        } else {
            state.capacity[top] -= owed;
        }
        removed.sort_unstable();
        trace.push(TraceStep::Veto { voter, removed });
    }
    let survivors = (0..profile.m()).filter(|&a| !state.removed[a]).collect();
    Ok(GammaVetoOutcome {
        survivors,
        residual_mass: state.tracked_mass(),
        state,
        trace,
    })
}

/// Veto by consumption, simulated event by event in exact time.
///
/// Every alternative starts with capacity 1 and each voter eats their worst
/// remaining alternative at unit rate. Whatever is exhausted last wins;
/// simultaneous final exhaustion goes to the lowest id.
pub fn veto_by_consumption(profile: &Profile) -> RuleOutcome {
    let (n, m) = (profile.n(), profile.m());
    let mut capacity = vec![Rational::one(); m];
    let mut alive = vec![true; m];
    let mut alive_count = m;
    let mut time = Rational::zero();
    let mut trace = Vec::new();
    let mut eaters = vec![0usize; m];

    loop {
        if alive_count == 1 {
            let winner = alive.iter().position(|&x| x).expect("one alive");
            return RuleOutcome {
                winner,
                rule: RuleKind::Vbc,
                trace,
            };
        }
        eaters.iter_mut().for_each(|e| *e = 0);
        for i in 0..n {
            let worst = *profile
                .ranking(i)
                .iter()
                .rev()
                .find(|&&a| alive[a])
                .expect("alive alternatives remain");
            eaters[worst] += 1;
        }
        let step = (0..m)
            .filter(|&a| eaters[a] > 0)
            .map(|a| &capacity[a] / Rational::from_integer(BigInt::from(eaters[a])))
            .min()
            .expect("someone is eating");
        let exhausted: Vec<AltId> = (0..m)
            .filter(|&a| eaters[a] > 0 && capacity[a] == &step * Rational::from_integer(BigInt::from(eaters[a])))
            .collect();
        if exhausted.len() == alive_count {
            let winner = break_tie(exhausted, &mut trace);
            return RuleOutcome {
                winner,
                rule: RuleKind::Vbc,
                trace,
            };
        }
        time += &step;
        for a in 0..m {
            if eaters[a] > 0 {
                capacity[a] -= &step * Rational::from_integer(BigInt::from(eaters[a]));
            }
        }
        for &a in &exhausted {
            alive[a] = false;
            capacity[a] = Rational::zero();
        }
        alive_count -= exhausted.len();
        let remaining: Rational = capacity.iter().sum();
        trace.push(TraceStep::Exhausted {
            time: time.clone(),
            alts: exhausted,
            remaining,
        });
    }
}
