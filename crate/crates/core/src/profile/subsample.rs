use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Profile;
use crate::{AltId, Error, Result, VoterId};

/// Which voters and alternatives of a parent profile a sub-profile keeps.
/// Sub-profile alternative `k` is parent alternative `alt_indices[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsampleMap {
    pub voter_indices: Vec<VoterId>,
    pub alt_indices: Vec<AltId>,
    pub seed: u64,
}

impl SubsampleMap {
    pub fn parent_alt(&self, sub_alt: AltId) -> AltId {
        self.alt_indices[sub_alt]
    }

    pub fn parent_voter(&self, sub_voter: VoterId) -> VoterId {
        self.voter_indices[sub_voter]
    }
}

/// Draws `k_voters` distinct voters and `k_alts` distinct alternatives
/// uniformly without replacement (indices kept in ascending order) and
/// restricts the profile to them. Deterministic in `seed`.
pub fn subsample(
    profile: &Profile,
    k_voters: usize,
    k_alts: usize,
    seed: u64,
) -> Result<(Profile, SubsampleMap)> {
    if k_voters == 0 || k_voters > profile.n() {
        return Err(Error::invalid(format!(
            "cannot subsample {k_voters} of {} voters",
            profile.n()
        )));
    }
    if k_alts == 0 || k_alts > profile.m() {
        return Err(Error::invalid(format!(
            "cannot subsample {k_alts} of {} alternatives",
            profile.m()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut voter_indices = rand::seq::index::sample(&mut rng, profile.n(), k_voters).into_vec();
    let mut alt_indices = rand::seq::index::sample(&mut rng, profile.m(), k_alts).into_vec();
    voter_indices.sort_unstable();
    alt_indices.sort_unstable();
    let sub = profile.restrict(&voter_indices, &alt_indices)?;
    Ok((
        sub,
        SubsampleMap {
            voter_indices,
            alt_indices,
            seed,
        },
    ))
}
