//! Pairs of two-alternative instances that are hard to tell apart by sampling.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::OracleEnvironment;
use crate::profile::{AlternativeDistribution, Profile};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureKind {
    /// Same two opposed voters; the distributions put `1/2 ± ε` on `a_1`.
    Thm51,
    /// Uniform distribution; a `1/2 + ε` share of the voters prefers `a_1` in
    /// the first population and `a_2` in the second.
    Thm52,
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Thm51 => "thm51",
            FixtureKind::Thm52 => "thm52",
        })
    }
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm51" => Ok(FixtureKind::Thm51),
            "thm52" => Ok(FixtureKind::Thm52),
            other => Err(Error::invalid(format!("unknown fixture {other:?}"))),
        }
    }
}

/// Alternative `0` is `a_1`, alternative `1` is `a_2`.
#[derive(Debug, Clone)]
pub struct LowerBoundFixture {
    pub kind: FixtureKind,
    pub first: OracleEnvironment,
    pub second: OracleEnvironment,
}

pub fn lower_bound_fixture(kind: FixtureKind, eps: &Rational, seed: u64) -> Result<LowerBoundFixture> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if !eps.is_positive() || *eps >= half {
        return Err(Error::invalid(format!("fixture ε must lie in (0, 1/2), got {eps}")));
    }
    let (first, second) = match kind {
        FixtureKind::Thm51 => {
            let profile = Profile::new(vec![vec![0, 1], vec![1, 0]])?;
            let heavy = &half + eps;
            let light = &half - eps;
            let d1 = AlternativeDistribution::new(vec![heavy.clone(), light.clone()])?;
            let d2 = AlternativeDistribution::new(vec![light, heavy])?;
            (
                OracleEnvironment::new(profile.clone(), d1, seed)?,
                OracleEnvironment::new(profile, d2, seed)?,
            )
        }
        FixtureKind::Thm52 => {
            let share = &half + eps;
            let n = share
                .denom()
                .to_usize()
                .ok_or_else(|| Error::invalid("ε denominator too large for a voter population"))?;
            let majority = share
                .numer()
                .to_usize()
                .expect("numerator below denominator");
            let population = |lead: [usize; 2]| {
                let trail = [lead[1], lead[0]];
                let rankings = (0..n)
                    .map(|i| if i < majority { lead.to_vec() } else { trail.to_vec() })
                    .collect();
                Profile::new(rankings)
            };
            let uniform = AlternativeDistribution::uniform(2)?;
            (
                OracleEnvironment::new(population([0, 1])?, uniform.clone(), seed)?,
                OracleEnvironment::new(population([1, 0])?, uniform, seed)?,
            )
        }
    };
    Ok(LowerBoundFixture { kind, first, second })
}
