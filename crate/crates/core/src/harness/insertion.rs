use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::profile::{AlternativeDistribution, Profile};
use crate::pvc::{critical_epsilon, CriticalEpsilonResult};
use crate::{Error, Result};

/// An outside statement placed into every voter's ranking.
///
/// File format: the first non-comment line is the label, then one
/// `voter_id,position` line per voter; `position` is the statement's rank in
/// that voter's extended ballot (0 = top, m = bottom).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertedStatement {
    pub label: String,
    pub positions: Vec<usize>,
}

impl InsertedStatement {
    pub fn parse(text: &str) -> Result<Self> {
        let mut label = None;
        let mut entries: Vec<(usize, usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if label.is_none() {
                label = Some(line.to_string());
                continue;
            }
            let (voter, pos) = line
                .split_once(',')
                .ok_or_else(|| Error::parse(line_no, "expected `voter_id,position`"))?;
            let field = |s: &str, what: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("bad {what} {:?}", s.trim())))
            };
            entries.push((field(voter, "voter id")?, field(pos, "position")?, line_no));
        }
        let label = label.ok_or_else(|| Error::parse(0, "insertion file has no label line"))?;
        let mut positions = vec![None; entries.len()];
        for (voter, pos, line_no) in entries {
            let slot = positions
                .get_mut(voter)
                .ok_or_else(|| Error::parse(line_no, format!("voter {voter} out of range: voters must be numbered 0..n")))?;
            if slot.replace(pos).is_some() {
                return Err(Error::parse(line_no, format!("voter {voter} listed twice")));
            }
        }
        let positions = positions
            .into_iter()
            .map(|p| p.expect("n distinct ids in 0..n cover every voter"))
            .collect();
        Ok(InsertedStatement { label, positions })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.label);
        for (voter, pos) in self.positions.iter().enumerate() {
            out.push_str(&format!("{voter},{pos}\n"));
        }
        out
    }
}

/// Critical ε of an inserted statement. The statement becomes alternative `m`
/// with weight zero; the original weights are left as they are.
pub fn evaluate_insertion(
    profile: &Profile,
    dist: &AlternativeDistribution,
    statement: &InsertedStatement,
) -> Result<CriticalEpsilonResult> {
    dist.check_matches(profile)?;
    let extended = profile.with_inserted(&statement.positions)?;
    let extended_dist = dist.with_zero_mass_alternative();
    critical_epsilon(&extended, &extended_dist, profile.m())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pvc::max_blocking_slack;
    use crate::rational::{int, zero};

    fn profile() -> Profile {
        Profile::new(vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn last_and_first() {
        let p = profile();
        let d = AlternativeDistribution::uniform(3).unwrap();
        let last = InsertedStatement {
            label: "last".into(),
            positions: vec![3; 3],
        };
        assert_eq!(evaluate_insertion(&p, &d, &last).unwrap().value, int(1));
        let first = InsertedStatement {
            label: "first".into(),
            positions: vec![0; 3],
        };
        assert_eq!(evaluate_insertion(&p, &d, &first).unwrap().value, zero());
    }

    #[test]
    fn matches_brute_force() {
        let p = profile();
        let d = AlternativeDistribution::uniform(3).unwrap();
        let s = InsertedStatement {
            label: "mid".into(),
            positions: vec![1, 2, 0],
        };
        let flow = evaluate_insertion(&p, &d, &s).unwrap();
        let ext = p.with_inserted(&s.positions).unwrap();
        let brute = max_blocking_slack(&ext, &d.with_zero_mass_alternative(), 3).unwrap();
        assert_eq!(flow.value, brute.value);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let s = InsertedStatement::parse("# generated\nconsensus statement\n1,2\n0,0\n").unwrap();
        assert_eq!(s.label, "consensus statement");
        assert_eq!(s.positions, vec![0, 2]);
        assert_eq!(InsertedStatement::parse(&s.to_text()).unwrap(), s);

        assert!(InsertedStatement::parse("").is_err());
        let dup = InsertedStatement::parse("x\n0,1\n0,2\n").unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 3, .. }));
        assert!(InsertedStatement::parse("x\n0,1\n5,2\n").is_err());
        assert!(InsertedStatement::parse("x\n0;1\n").is_err());
        let p = profile();
        let d = AlternativeDistribution::uniform(3).unwrap();
        let bad = InsertedStatement {
            label: "bad".into(),
            positions: vec![4, 0, 0],
        };
        assert!(evaluate_insertion(&p, &d, &bad).is_err());
    }
}
