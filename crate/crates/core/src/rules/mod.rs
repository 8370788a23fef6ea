//! Voting rules over finite profiles.
//!
//! The veto family ([`vote_by_veto`], [`vote_by_gamma_veto`],
//! [`veto_by_consumption`]) lands in the proportional veto core; Borda,
//! Schulze, IRV, plurality and the random baseline are the comparison rules.
//! Every tie is broken towards the lowest alternative id and logged in the
//! trace.

mod scoring;
mod veto;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::profile::Profile;
use crate::{AltId, Error, Rational, Result, VoterId};

pub use scoring::{borda, irv, plurality, random_winner, schulze};
pub use veto::{
    default_veto_order, veto_by_consumption, vote_by_gamma_veto, vote_by_veto, CapacityState, GammaVetoOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Vbc,
    Borda,
    Schulze,
    Irv,
    Plurality,
    Random,
    Veto,
}

impl RuleKind {
    pub const ALL: [RuleKind; 7] = [
        RuleKind::Vbc,
        RuleKind::Borda,
        RuleKind::Schulze,
        RuleKind::Irv,
        RuleKind::Plurality,
        RuleKind::Random,
        RuleKind::Veto,
    ];

    /// The rules compared in the benchmark, in reporting order.
    pub const BENCHMARK: [RuleKind; 6] = [
        RuleKind::Vbc,
        RuleKind::Borda,
        RuleKind::Schulze,
        RuleKind::Irv,
        RuleKind::Plurality,
        RuleKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Vbc => "vbc",
            RuleKind::Borda => "borda",
            RuleKind::Schulze => "schulze",
            RuleKind::Irv => "irv",
            RuleKind::Plurality => "plurality",
            RuleKind::Random => "random",
            RuleKind::Veto => "veto",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleKind::ALL
            .into_iter()
            .find(|r| r.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::invalid(format!("unknown rule {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum TraceStep {
    Veto {
        voter: VoterId,
        removed: Vec<AltId>,
    },
    /// Alternatives whose capacity ran out at `time`; `remaining` is the total
    /// capacity left afterwards.
    Exhausted {
        #[serde(with = "crate::rational::serde_string")]
        time: Rational,
        alts: Vec<AltId>,
        #[serde(with = "crate::rational::serde_string")]
        remaining: Rational,
    },
    Eliminated {
        alt: AltId,
        first_places: usize,
    },
    Scores {
        scores: Vec<u64>,
    },
    TieBreak {
        among: Vec<AltId>,
        chosen: AltId,
    },
    Draw {
        chosen: AltId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub winner: AltId,
    pub rule: RuleKind,
    pub trace: Vec<TraceStep>,
}

/// Runs `rule` on `profile`. `seed` drives the random rule; `veto` uses
/// [`default_veto_order`].
pub fn run_rule(rule: RuleKind, profile: &Profile, seed: u64) -> Result<RuleOutcome> {
    Ok(match rule {
        RuleKind::Vbc => veto_by_consumption(profile),
        RuleKind::Borda => borda(profile),
        RuleKind::Schulze => schulze(profile),
        RuleKind::Irv => irv(profile),
        RuleKind::Plurality => plurality(profile),
        RuleKind::Random => random_winner(profile, seed),
        RuleKind::Veto => vote_by_veto(profile, &default_veto_order(profile.n(), profile.m()))?,
    })
}

/// Lowest id among `candidates`, logging a tie-break when there is a choice.
pub(crate) fn break_tie(candidates: Vec<AltId>, trace: &mut Vec<TraceStep>) -> AltId {
    let chosen = *candidates.iter().min().expect("at least one candidate");
    if candidates.len() > 1 {
        trace.push(TraceStep::TieBreak {
            among: candidates,
            chosen,
        });
    }
    chosen
}
