//! Strict-order ballot files.
//!
//! ```text
//! # comment lines start with '#'
//! # ALTERNATIVE NAME 0: optional display name
//! 2: 1,0,2
//! 1: 0,1,2
//! ```
//!
//! Each data line is `COUNT: id,id,...` with a positive count and a complete
//! strict order over `0..m`; `m` comes from the first data line.

use std::fmt::Write;

use super::{permutation_positions, Profile};
use crate::{Error, Result};

const NAME_PREFIX: &str = "ALTERNATIVE NAME ";

pub(super) fn parse(text: &str) -> Result<Profile> {
    let mut rankings = Vec::new();
    let mut m = None;
    let mut names: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((alt, name)) = parse_name(comment.trim()) {
                names.push((alt, name));
            }
            continue;
        }
        let (count, ballot) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(lineno, format!("malformed line {line:?}: expected `COUNT: id,id,...`")))?;
        let count: usize = count
            .trim()
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Error::parse(lineno, format!("count {:?} is not a positive integer", count.trim())))?;
        let ballot = ballot
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(lineno, format!("alternative id {:?} is not a nonnegative integer", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = *m.get_or_insert(ballot.len());
        permutation_positions(&ballot, m).map_err(|msg| Error::parse(lineno, msg))?;
        if ballot.len() != m {
            return Err(Error::parse(
                lineno,
                format!("ballot ranks {} alternatives, expected {m}", ballot.len()),
            ));
        }
        rankings.extend(std::iter::repeat_n(ballot, count));
    }

    if rankings.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), "empty file: no ballots"));
    }
    let profile = Profile::new(rankings)?;
    if names.is_empty() {
        return Ok(profile);
    }
    let mut table = vec![String::new(); profile.m()];
    for (alt, name) in names {
        if alt < table.len() {
            table[alt] = name;
        }
    }
    profile.with_names(table)
}

fn parse_name(comment: &str) -> Option<(usize, String)> {
    let rest = comment.strip_prefix(NAME_PREFIX)?;
    let (id, name) = rest.split_once(':')?;
    Some((id.trim().parse().ok()?, name.trim().to_string()))
}

/// Groups identical ballots in order of first appearance.
pub(super) fn serialize(profile: &Profile) -> String {
    let mut order: Vec<&[usize]> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for r in profile.rankings() {
        match order.iter().position(|o| *o == r.as_slice()) {
            Some(k) => counts[k] += 1,
            None => {
                order.push(r);
                counts.push(1);
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "# NUMBER ALTERNATIVES: {}", profile.m());
    let _ = writeln!(out, "# NUMBER VOTERS: {}", profile.n());
    if let Some(names) = profile.names() {
        for (a, name) in names.iter().enumerate() {
            let _ = writeln!(out, "# {NAME_PREFIX}{a}: {name}");
        }
    }
    for (ballot, count) in order.iter().zip(&counts) {
        let ids: Vec<String> = ballot.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{count}: {}", ids.join(","));
    }
    out
}
