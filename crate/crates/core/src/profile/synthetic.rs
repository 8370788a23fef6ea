//! Seeded synthetic profile generators.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{permutation_positions, Profile};
use crate::{AltId, Error, Rational, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticModel {
    /// Every ballot an independent uniform permutation.
    ImpartialCulture,
    /// Mallows model around `reference` with dispersion `phi ∈ [0,1]`
    /// (0 = every ballot equals the reference, 1 = impartial culture).
    Mallows { phi: f64, reference: Vec<AltId> },
    /// The first `⌊fraction·n⌋` voters cast `first`, the rest cast `second`.
    TwoBloc {
        fraction: Rational,
        first: Vec<AltId>,
        second: Vec<AltId>,
    },
    /// Voters split across Mallows components by share (largest remainder),
    /// in component order.
    Mixture(Vec<MixtureComponent>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureComponent {
    pub share: Rational,
    pub phi: f64,
    pub reference: Vec<AltId>,
}

pub fn generate_synthetic(model: &SyntheticModel, n: usize, m: usize, seed: u64) -> Result<Profile> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("synthetic profiles need n ≥ 1 and m ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rankings = match model {
        SyntheticModel::ImpartialCulture => {
            let mut base: Vec<AltId> = (0..m).collect();
            (0..n)
                .map(|_| {
                    base.shuffle(&mut rng);
                    base.clone()
                })
                .collect()
        }
        SyntheticModel::Mallows { phi, reference } => {
            check_phi(*phi)?;
            check_reference(reference, m)?;
            (0..n).map(|_| mallows_ballot(*phi, reference, &mut rng)).collect()
        }
        SyntheticModel::TwoBloc {
            fraction,
            first,
            second,
        } => {
            if fraction.is_negative() || *fraction > Rational::one() {
                return Err(Error::invalid(format!("bloc fraction {fraction} outside [0,1]")));
            }
            check_reference(first, m)?;
            check_reference(second, m)?;
            let k = (fraction * Rational::from_integer(BigInt::from(n)))
                .floor()
                .to_integer()
                .to_usize()
                .unwrap_or(n);
            (0..n)
                .map(|i| if i < k { first.clone() } else { second.clone() })
                .collect()
        }
        SyntheticModel::Mixture(components) => {
            let counts = allocate(components.iter().map(|c| &c.share), n)?;
            let mut rankings = Vec::with_capacity(n);
            for (component, count) in components.iter().zip(counts) {
                check_phi(component.phi)?;
                check_reference(&component.reference, m)?;
                for _ in 0..count {
                    rankings.push(mallows_ballot(component.phi, &component.reference, &mut rng));
                }
            }
            rankings
        }
    };
    Profile::new(rankings)
}

fn check_phi(phi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::invalid(format!("Mallows dispersion {phi} outside [0,1]")));
    }
    Ok(())
}

fn check_reference(reference: &[AltId], m: usize) -> Result<()> {
    if reference.len() != m {
        return Err(Error::invalid(format!(
            "reference ranking has {} alternatives, expected {m}",
            reference.len()
        )));
    }
    permutation_positions(reference, m).map_err(Error::invalid)?;
    Ok(())
}

/// Repeated insertion: the `i`-th reference item goes to slot `j ∈ 0..=i`
/// with probability proportional to `phi^(i-j)`.
fn mallows_ballot<R: Rng>(phi: f64, reference: &[AltId], rng: &mut R) -> Vec<AltId> {
    let mut ballot: Vec<AltId> = Vec::with_capacity(reference.len());
    let mut weights: Vec<f64> = Vec::with_capacity(reference.len());
    for (i, &alt) in reference.iter().enumerate() {
        weights.clear();
        weights.extend((0..=i).map(|j| phi.powi((i - j) as i32)));
        let total: f64 = weights.iter().sum();
        let mut target = rng.gen::<f64>() * total;
        let mut slot = i;
        for (j, w) in weights.iter().enumerate() {
            if target < *w {
                slot = j;
                break;
            }
            target -= w;
        }
        ballot.insert(slot, alt);
    }
    ballot
}

/// Largest-remainder apportionment of `n` voters to shares summing to one.
fn allocate<'a>(shares: impl Iterator<Item = &'a Rational>, n: usize) -> Result<Vec<usize>> {
    let shares: Vec<&Rational> = shares.collect();
    if shares.is_empty() {
        return Err(Error::invalid("mixture needs at least one component"));
    }
    if shares.iter().any(|s| s.is_negative()) {
        return Err(Error::invalid("mixture shares must be nonnegative"));
    }
    let total: Rational = shares.iter().copied().sum();
    if !total.is_one() {
        return Err(Error::invalid(format!("mixture shares sum to {total}, expected 1")));
    }
    let n_big = Rational::from_integer(BigInt::from(n));
    let exact: Vec<Rational> = shares.iter().map(|s| *s * &n_big).collect();
    let mut counts: Vec<usize> = exact
        .iter()
        .map(|q| q.floor().to_integer().to_usize().unwrap_or(0))
        .collect();
    // The fractional parts sum to the shortfall, so it is smaller than the
    // number of components with a nonzero remainder.
    let left = n - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..exact.len()).collect();
    order.sort_by(|&a, &b| exact[b].fract().cmp(&exact[a].fract()).then(a.cmp(&b)));
    for &k in order.iter().take(left) {
        counts[k] += 1;
    }
    Ok(counts)
}
