//! Preference profiles, exact alternative distributions and utilities.
//!
//! Alternatives are dense ids `0..m`; display names are metadata only. Every
//! ballot is a strict, complete order listed best-to-worst.

mod soc;
mod subsample;
mod synthetic;

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::parse_rational;
use crate::{AltId, Error, Rational, Result, VoterId};

pub use subsample::{subsample, SubsampleMap};
pub use synthetic::{generate_synthetic, MixtureComponent, SyntheticModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    rankings: Vec<Vec<AltId>>,
    /// `positions[i][a]` is the rank of `a` in voter `i`'s ballot, 0 = best.
    positions: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
}

impl Profile {
    /// Builds a profile from best-to-worst rankings. `m` is taken from the first
    /// ranking; every ranking must be a permutation of `0..m`.
    pub fn new(rankings: Vec<Vec<AltId>>) -> Result<Self> {
        let m = rankings
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("a profile needs at least one voter"))?;
        if m == 0 {
            return Err(Error::invalid("a profile needs at least one alternative"));
        }
        let mut positions = Vec::with_capacity(rankings.len());
        for (voter, ranking) in rankings.iter().enumerate() {
            let pos = permutation_positions(ranking, m)
                .map_err(|msg| Error::invalid(format!("voter {voter}: {msg}")))?;
            positions.push(pos);
        }
        Ok(Profile {
            m,
            rankings,
            positions,
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.m {
            return Err(Error::invalid(format!(
                "{} names given for {} alternatives",
                names.len(),
                self.m
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rankings(&self) -> &[Vec<AltId>] {
        &self.rankings
    }

    pub fn ranking(&self, voter: VoterId) -> &[AltId] {
        &self.rankings[voter]
    }

    /// Rank of `alt` in `voter`'s ballot (0 = favourite).
    pub fn position(&self, voter: VoterId, alt: AltId) -> usize {
        self.positions[voter][alt]
    }

    /// `a ≻_voter b`.
    pub fn prefers(&self, voter: VoterId, a: AltId, b: AltId) -> bool {
        self.positions[voter][a] < self.positions[voter][b]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn parse_soc(text: &str) -> Result<Self> {
        soc::parse(text)
    }

    pub fn to_soc(&self) -> String {
        soc::serialize(self)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        soc::parse(&text)
    }

    /// Multiset of ballots, keyed by ranking.
    pub fn ballot_counts(&self) -> BTreeMap<Vec<AltId>, usize> {
        let mut counts = BTreeMap::new();
        for r in &self.rankings {
            *counts.entry(r.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Restricts the profile to `voters` (repeats allowed, giving a voter
    /// multiset) and `alts` (distinct). Alternative `alts[k]` becomes id `k` in
    /// the result; each ranking keeps its relative order.
    pub fn restrict(&self, voters: &[VoterId], alts: &[AltId]) -> Result<Profile> {
        if voters.is_empty() || alts.is_empty() {
            return Err(Error::invalid("restriction must keep at least one voter and one alternative"));
        }
        let mut new_id = vec![usize::MAX; self.m];
        for (k, &a) in alts.iter().enumerate() {
            if a >= self.m {
                return Err(Error::invalid(format!("alternative {a} out of range (m = {})", self.m)));
            }
            if new_id[a] != usize::MAX {
                return Err(Error::invalid(format!("alternative {a} selected twice")));
            }
            new_id[a] = k;
        }
        let mut rankings = Vec::with_capacity(voters.len());
        for &v in voters {
            if v >= self.n() {
                return Err(Error::invalid(format!("voter {v} out of range (n = {})", self.n())));
            }
            rankings.push(
                self.rankings[v]
                    .iter()
                    .filter(|&&a| new_id[a] != usize::MAX)
                    .map(|&a| new_id[a])
                    .collect(),
            );
        }
        let mut sub = Profile::new(rankings)?;
        if let Some(names) = &self.names {
            sub.names = Some(alts.iter().map(|&a| names[a].clone()).collect());
        }
        Ok(sub)
    }

    /// Splices a new alternative (id `m`) into every ballot. `positions[i]` is
    /// the rank the newcomer takes in voter `i`'s extended ballot, `0..=m`.
    pub fn with_inserted(&self, positions: &[usize]) -> Result<Profile> {
        if positions.len() != self.n() {
            return Err(Error::invalid(format!(
                "{} insertion positions for {} voters",
                positions.len(),
                self.n()
            )));
        }
        let new_alt = self.m;
        let mut rankings = Vec::with_capacity(self.n());
        for (voter, (ranking, &pos)) in self.rankings.iter().zip(positions).enumerate() {
            if pos > self.m {
                return Err(Error::invalid(format!(
                    "voter {voter}: insertion position {pos} outside 0..={}",
                    self.m
                )));
            }
            let mut r = ranking.clone();
            r.insert(pos, new_alt);
            rankings.push(r);
        }
        Profile::new(rankings)
    }
}

fn permutation_positions(ranking: &[AltId], m: usize) -> std::result::Result<Vec<usize>, String> {
    let mut pos = vec![usize::MAX; m];
    for (rank, &a) in ranking.iter().enumerate() {
        if a >= m {
            return Err(format!("alternative {a} out of range 0..{m}"));
        }
        if pos[a] != usize::MAX {
            return Err(format!("duplicate alternative {a}"));
        }
        pos[a] = rank;
    }
    if let Some(missing) = pos.iter().position(|&p| p == usize::MAX) {
        return Err(format!("missing alternative {missing}"));
    }
    Ok(pos)
}

/// Nonnegative exact weights over `0..m` summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeDistribution {
    weights: Vec<Rational>,
}

impl AlternativeDistribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("a distribution needs at least one alternative"));
        }
        if let Some((a, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::invalid(format!("negative weight {w} on alternative {a}")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!("weights sum to {total}, expected exactly 1")));
        }
        Ok(AlternativeDistribution { weights })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("uniform distribution over zero alternatives"));
        }
        let w = Rational::new(BigInt::one(), BigInt::from(m));
        Ok(AlternativeDistribution { weights: vec![w; m] })
    }

    pub fn point_mass(m: usize, alt: AltId) -> Result<Self> {
        if alt >= m {
            return Err(Error::invalid(format!("alternative {alt} out of range 0..{m}")));
        }
        let mut weights = vec![Rational::zero(); m];
        weights[alt] = Rational::one();
        Ok(AlternativeDistribution { weights })
    }

    /// Empirical distribution of a multiset given as per-alternative counts.
    pub fn from_counts(counts: &[usize]) -> Result<Self> {
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Err(Error::invalid("empty multiset"));
        }
        let total = BigInt::from(total);
        Self::new(
            counts
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), total.clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, alt: AltId) -> &Rational {
        &self.weights[alt]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// μ(S).
    pub fn mass<I: IntoIterator<Item = AltId>>(&self, alts: I) -> Rational {
        alts.into_iter().map(|a| &self.weights[a]).sum()
    }

    /// Appends a zero-mass alternative with id `len()`.
    pub fn with_zero_mass_alternative(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.push(Rational::zero());
        AlternativeDistribution { weights }
    }

    pub fn check_matches(&self, profile: &Profile) -> Result<()> {
        if self.len() != profile.m() {
            return Err(Error::invalid(format!(
                "distribution has {} weights but the profile has {} alternatives",
                self.len(),
                profile.m()
            )));
        }
        Ok(())
    }

    /// One rational or decimal weight per line; `#` comments and blank lines skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w = parse_rational(line).map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            weights.push(w);
        }
        if weights.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "empty file: no weights"));
        }
        Self::new(weights)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        self.weights.iter().map(|w| format!("{w}\n")).collect()
    }
}

/// `n × m` cardinal utilities; each row lies in `[0,1]` and sums to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityProfile {
    rows: Vec<Vec<Rational>>,
}

impl UtilityProfile {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("utility profile needs at least one voter"))?;
        if m == 0 {
            return Err(Error::invalid("utility profile needs at least one alternative"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::invalid(format!("voter {i}: {} utilities, expected {m}", row.len())));
            }
            if let Some(u) = row.iter().find(|u| u.is_negative() || **u > Rational::one()) {
                return Err(Error::invalid(format!("voter {i}: utility {u} outside [0,1]")));
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                return Err(Error::invalid(format!("voter {i}: utilities sum to {total}, expected 1")));
            }
        }
        Ok(UtilityProfile { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// CSV, one voter per row, `m` columns; rationals or decimals. Lines starting
    /// with `#` are ignored.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                Error::parse(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let row = record
                .iter()
                .map(|cell| parse_rational(cell).map_err(|e| Error::parse(line, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "empty file: no utilities"));
        }
        Self::new(rows)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(&text)
    }
}

pub fn parse_profile(text: &str) -> Result<Profile> {
    Profile::parse_soc(text)
}

pub fn uniform_distribution(m: usize) -> Result<AlternativeDistribution> {
    AlternativeDistribution::uniform(m)
}

/// Mixture of per-voter utility distributions: weight of `j` is
/// `(1/n) Σ_i u[i][j]`.
pub fn btl_distribution(utilities: &UtilityProfile) -> AlternativeDistribution {
    let n = BigInt::from(utilities.n());
    let weights = (0..utilities.m())
        .map(|j| {
            let total: Rational = utilities.rows.iter().map(|row| &row[j]).sum();
            total / Rational::from_integer(n.clone())
        })
        .collect();
    // Rows each sum to one, so the column averages sum to one exactly.
    AlternativeDistribution { weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn uniform_weights_are_exact() {
        let d = uniform_distribution(4).unwrap();
        assert!(d.weights().iter().all(|w| *w == ratio(1, 4)));
        assert_eq!(uniform_distribution(1).unwrap().weights(), &[int(1)]);
        let three = uniform_distribution(3).unwrap();
        assert_eq!(three.mass(0..3), int(1));
        assert!(uniform_distribution(0).is_err());
    }

    #[test]
    fn btl_examples() {
        let u = UtilityProfile::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        assert_eq!(btl_distribution(&u).weights(), &[ratio(1, 2), ratio(1, 2)]);

        let u = UtilityProfile::new(vec![vec![ratio(1, 4), ratio(3, 4)]]).unwrap();
        assert_eq!(btl_distribution(&u).weights(), &[ratio(1, 4), ratio(3, 4)]);

        let u = UtilityProfile::new(vec![vec![int(1), int(0)], vec![ratio(1, 2), ratio(1, 2)]]).unwrap();
        // (1 + 1/2)/2 and (0 + 1/2)/2
        assert_eq!(btl_distribution(&u).weights(), &[ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn distribution_validation() {
        assert!(AlternativeDistribution::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(AlternativeDistribution::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(AlternativeDistribution::new(vec![int(1), int(0)]).is_ok());
        let d = AlternativeDistribution::parse("# weights\n1/2\n0.25\n\n.25\n").unwrap();
        assert_eq!(d.weights(), &[ratio(1, 2), ratio(1, 4), ratio(1, 4)]);
        match AlternativeDistribution::parse("1/2\nx\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn utility_csv_and_validation() {
        let u = UtilityProfile::parse_csv("1,0\n0.5, 1/2\n").unwrap();
        assert_eq!(u.n(), 2);
        assert_eq!(u.rows()[1], vec![ratio(1, 2), ratio(1, 2)]);
        assert!(UtilityProfile::parse_csv("0.5,0.4\n").is_err());
        assert!(UtilityProfile::parse_csv("2,-1\n").is_err());
        assert!(UtilityProfile::parse_csv("1,0\n1\n").is_err());
    }

    #[test]
    fn restriction_keeps_relative_order() {
        let p = Profile::new(vec![vec![2, 0, 1]]).unwrap();
        let sub = p.restrict(&[0], &[0, 1]).unwrap();
        assert_eq!(sub.ranking(0), &[0, 1]);
        // relabelling follows the order of the selected ids
        let sub = p.restrict(&[0], &[1, 2]).unwrap();
        assert_eq!(sub.ranking(0), &[1, 0]);
    }

    #[test]
    fn insertion_splices_new_alternative() {
        let p = Profile::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let ext = p.with_inserted(&[0, 2]).unwrap();
        assert_eq!(ext.ranking(0), &[2, 0, 1]);
        assert_eq!(ext.ranking(1), &[1, 0, 2]);
        assert!(p.with_inserted(&[0, 3]).is_err());
        assert!(p.with_inserted(&[0]).is_err());
    }

    #[test]
    fn rejects_invalid_rankings() {
        assert!(Profile::new(vec![]).is_err());
        assert!(Profile::new(vec![vec![]]).is_err());
        assert!(Profile::new(vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(Profile::new(vec![vec![0, 1], vec![0, 2]]).is_err());
        assert!(Profile::new(vec![vec![0, 1], vec![0]]).is_err());
    }
}
