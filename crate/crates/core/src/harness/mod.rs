//! Rule benchmarking by critical ε.
//!
//! Each replication fixes a full profile, draws several small subsamples,
//! runs every configured rule on each subsample and scores the winner by its
//! critical ε in the full profile. Inserted outside statements are scored the
//! same way with zero weight.

mod aggregate;
pub mod cli;
mod config;
mod insertion;

use std::fs;
use std::path::Path;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::profile::{subsample, AlternativeDistribution, Profile};
use crate::pvc::{critical_epsilon, max_blocking_slack, BRUTE_FORCE_CAP};
use crate::rational::parse_rational;
use crate::rules::run_rule;
use crate::{AltId, Error, Rational, Result};

pub use aggregate::{aggregate, default_cdf_grid, CdfRow, RuleSummary, Summary, SummaryRow};
pub use config::{ComponentSpec, ExperimentConfig, NamedReference, ReferenceSpec, SyntheticSpec};
pub use insertion::{evaluate_insertion, InsertedStatement};

/// Full profiles with at most this many voters are audited by brute force.
pub const AUDIT_MAX_VOTERS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub replication: usize,
    /// `None` for inserted statements, which do not depend on a subsample.
    pub subsample: Option<usize>,
    /// Rule name, or `insert:<label>` for an inserted statement.
    pub rule: String,
    /// Full-profile id; an inserted statement has id `m`.
    pub winner: AltId,
    #[serde(with = "crate::rational::serde_string")]
    pub critical_epsilon: Rational,
    pub trace_steps: usize,
}

/// Independent seed for task `(a, b)` under `master`: word `2b` of ChaCha
/// stream `a`.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(a);
    rng.set_word_pos(2 * b as u128);
    rng.next_u64()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<EvaluationRecord>> {
    cfg.validate()?;
    let insertions = cfg
        .insertions
        .iter()
        .map(InsertedStatement::from_file)
        .collect::<Result<Vec<_>>>()?;
    let per_rep = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep, &insertions))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_rep.into_iter().flatten().collect())
}

fn run_replication(
    cfg: &ExperimentConfig,
    rep: usize,
    insertions: &[InsertedStatement],
) -> Result<Vec<EvaluationRecord>> {
    let full = cfg.full_profile(rep)?;
    let dist = cfg.load_distribution(&full)?;
    if cfg.sub_voters > full.n() || cfg.sub_alts > full.m() {
        return Err(Error::invalid(format!(
            "subsample {}×{} exceeds the full profile {}×{}",
            cfg.sub_voters,
            cfg.sub_alts,
            full.n(),
            full.m()
        )));
    }
    let audit = cfg.audit && full.n() <= AUDIT_MAX_VOTERS.min(BRUTE_FORCE_CAP);
    let score = |alt: AltId, profile: &Profile, dist: &AlternativeDistribution| -> Result<Rational> {
        let value = critical_epsilon(profile, dist, alt)?.value;
        if audit {
            let brute = max_blocking_slack(profile, dist, alt)?.value;
            if brute != value {
                return Err(Error::invalid(format!(
                    "audit failed for alternative {alt}: flow {value}, brute force {brute}"
                )));
            }
        }
        Ok(value)
    };

    let mut records = (0..cfg.subsamples_per_replication)
        .into_par_iter()
        .map(|sub| {
            let task_seed = derive_seed(cfg.seed, rep as u64, sub as u64);
            let (sub_profile, map) = subsample(&full, cfg.sub_voters, cfg.sub_alts, task_seed)?;
            cfg.rules
                .iter()
                .map(|&rule| {
                    let outcome = run_rule(rule, &sub_profile, task_seed)?;
                    let winner = map.parent_alt(outcome.winner);
                    Ok(EvaluationRecord {
                        replication: rep,
                        subsample: Some(sub),
                        rule: rule.name().to_string(),
                        winner,
                        critical_epsilon: score(winner, &full, &dist)?,
                        trace_steps: outcome.trace.len(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    for statement in insertions {
        let extended = full.with_inserted(&statement.positions)?;
        let extended_dist = dist.with_zero_mass_alternative();
        records.push(EvaluationRecord {
            replication: rep,
            subsample: None,
            rule: format!("insert:{}", statement.label),
            winner: full.m(),
            critical_epsilon: score(full.m(), &extended, &extended_dist)?,
            trace_steps: 0,
        });
    }
    Ok(records)
}

/// CDF grid from the config, or the default one.
pub fn config_grid(cfg: &ExperimentConfig) -> Result<Vec<Rational>> {
    match &cfg.cdf_grid {
        Some(points) => points.iter().map(|p| parse_rational(p)).collect(),
        None => Ok(default_cdf_grid()),
    }
}

pub fn records_to_jsonl(records: &[EvaluationRecord]) -> String {
    aggregate::to_jsonl(records)
}

pub fn records_to_csv(records: &[EvaluationRecord]) -> Result<String> {
    #[derive(Serialize)]
    struct Row<'a> {
        replication: usize,
        subsample: Option<usize>,
        rule: &'a str,
        winner: AltId,
        critical_epsilon: String,
        trace_steps: usize,
    }
    let rows: Vec<Row> = records
        .iter()
        .map(|r| Row {
            replication: r.replication,
            subsample: r.subsample,
            rule: &r.rule,
            winner: r.winner,
            critical_epsilon: r.critical_epsilon.to_string(),
            trace_steps: r.trace_steps,
        })
        .collect();
    aggregate::to_csv(&rows)
}

pub fn parse_records(text: &str) -> Result<Vec<EvaluationRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, e.to_string())))
        .collect()
}

/// Writes `records.jsonl`, `summary.csv` and `cdf.csv` into `dir`.
pub fn write_outputs(dir: &Path, records: &[EvaluationRecord], grid: &[Rational]) -> Result<Summary> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let summary = aggregate(records, grid)?;
    let write = |name: &str, body: String| {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(path, e))
    };
    write("records.jsonl", records_to_jsonl(records))?;
    write("summary.csv", summary.summary_csv()?)?;
    write("cdf.csv", summary.cdf_csv()?)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::zero;
    use crate::rules::RuleKind;

    fn synthetic_cfg(voters: usize, alts: usize) -> ExperimentConfig {
        ExperimentConfig {
            synthetic: Some(SyntheticSpec {
                voters,
                alternatives: alts,
                components: Vec::new(),
            }),
            sub_voters: voters,
            sub_alts: alts,
            replications: 3,
            subsamples_per_replication: 2,
            rules: vec![RuleKind::Vbc],
            seed: 9,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn full_information_vbc_is_in_the_core() {
        let records = run_experiment(&synthetic_cfg(9, 7)).unwrap();
        assert_eq!(records.len(), 6);
        assert!(records.iter().all(|r| r.critical_epsilon == zero()));
    }

    #[test]
    fn deterministic_and_audited() {
        let cfg = ExperimentConfig {
            sub_voters: 4,
            sub_alts: 3,
            rules: RuleKind::ALL.to_vec(),
            ..synthetic_cfg(10, 6)
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(records_to_jsonl(&a), records_to_jsonl(&b));
        assert_eq!(a.len(), 3 * 2 * RuleKind::ALL.len());
        assert!(a.iter().all(|r| r.critical_epsilon >= zero() && r.critical_epsilon <= Rational::from_integer(1.into())));
        assert_eq!(parse_records(&records_to_jsonl(&a)).unwrap(), a);
    }

    #[test]
    fn oversized_subsample_is_rejected() {
        let cfg = ExperimentConfig {
            sub_voters: 11,
            ..synthetic_cfg(10, 6)
        };
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for a in 0..20 {
            for b in 0..20 {
                assert!(seen.insert(derive_seed(1, a, b)));
            }
        }
    }
}
