use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::EvaluationRecord;
use crate::rational::{ratio, to_f64};
use crate::rules::RuleKind;
use crate::{Error, Rational, Result};

/// Per-rule statistics of critical ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSummary {
    pub rule: String,
    pub count: usize,
    pub mean: Rational,
    /// Nearest-rank 99th percentile.
    pub p99: Rational,
    pub frac_lt_001: Rational,
    /// `(ε, fraction of records with critical ε ≤ ε)` for each grid point.
    pub cdf: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub rules: Vec<RuleSummary>,
}

#[derive(Debug, Serialize)]
pub struct SummaryRow<'a> {
    pub rule: &'a str,
    pub mean: f64,
    pub p99: f64,
    #[serde(rename = "frac_lt_0.01")]
    pub frac_lt_001: f64,
}

#[derive(Debug, Serialize)]
pub struct CdfRow<'a> {
    pub rule: &'a str,
    pub epsilon: f64,
    pub cumulative_fraction: f64,
}

/// `0, 0.01, …, 0.5` and `1`.
pub fn default_cdf_grid() -> Vec<Rational> {
    let mut grid: Vec<Rational> = (0..=50).map(|k| ratio(k, 100)).collect();
    grid.push(ratio(1, 1));
    grid
}

/// Known rules first in their usual order, then anything else by name.
fn rule_order(name: &str) -> (usize, String) {
    let rank = RuleKind::ALL
        .iter()
        .position(|r| r.name() == name)
        .unwrap_or(RuleKind::ALL.len());
    (rank, name.to_string())
}

pub fn aggregate(records: &[EvaluationRecord], grid: &[Rational]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::invalid("nothing to aggregate"));
    }
    let mut groups: BTreeMap<(usize, String), Vec<&Rational>> = BTreeMap::new();
    for r in records {
        groups.entry(rule_order(&r.rule)).or_default().push(&r.critical_epsilon);
    }
    let threshold = ratio(1, 100);
    let rules = groups
        .into_iter()
        .map(|((_, rule), mut values)| {
            values.sort();
            let count = values.len();
            let n = Rational::from_integer(BigInt::from(count));
            let mean = values.iter().copied().sum::<Rational>() / &n;
            let rank = (99 * count).div_ceil(100).max(1);
            let p99 = values[rank - 1].clone();
            let below = values.iter().filter(|v| ***v < threshold).count();
            let cdf = grid
                .iter()
                .map(|g| {
                    let k = values.partition_point(|v| *v <= g);
                    (g.clone(), Rational::from_integer(BigInt::from(k)) / &n)
                })
                .collect();
            RuleSummary {
                rule,
                count,
                mean,
                p99,
                frac_lt_001: Rational::from_integer(BigInt::from(below)) / &n,
                cdf,
            }
        })
        .collect();
    Ok(Summary { rules })
}

impl Summary {
    pub fn get(&self, rule: &str) -> Option<&RuleSummary> {
        self.rules.iter().find(|r| r.rule == rule)
    }

    pub fn rows(&self) -> Vec<SummaryRow<'_>> {
        self.rules
            .iter()
            .map(|r| SummaryRow {
                rule: &r.rule,
                mean: to_f64(&r.mean),
                p99: to_f64(&r.p99),
                frac_lt_001: to_f64(&r.frac_lt_001),
            })
            .collect()
    }

    pub fn cdf_rows(&self) -> Vec<CdfRow<'_>> {
        self.rules
            .iter()
            .flat_map(|r| {
                r.cdf.iter().map(move |(e, f)| CdfRow {
                    rule: &r.rule,
                    epsilon: to_f64(e),
                    cumulative_fraction: to_f64(f),
                })
            })
            .collect()
    }

    pub fn summary_csv(&self) -> Result<String> {
        to_csv(&self.rows())
    }

    pub fn cdf_csv(&self) -> Result<String> {
        to_csv(&self.cdf_rows())
    }

    /// One JSON object per line.
    pub fn summary_jsonl(&self) -> String {
        to_jsonl(&self.rows())
    }

    pub fn cdf_jsonl(&self) -> String {
        to_jsonl(&self.cdf_rows())
    }
}

pub(crate) fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub(crate) fn to_jsonl<T: Serialize>(rows: &[T]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, zero};

    fn record(rule: &str, eps: Rational) -> EvaluationRecord {
        EvaluationRecord {
            replication: 0,
            subsample: Some(0),
            rule: rule.into(),
            winner: 0,
            critical_epsilon: eps,
            trace_steps: 0,
        }
    }

    #[test]
    fn single_record() {
        let s = aggregate(&[record("vbc", ratio(3, 10))], &default_cdf_grid()).unwrap();
        let r = s.get("vbc").unwrap();
        assert_eq!(r.mean, ratio(3, 10));
        assert_eq!(r.p99, ratio(3, 10));
        assert_eq!(r.frac_lt_001, zero());
    }

    #[test]
    fn all_zero() {
        let records: Vec<_> = (0..7).map(|_| record("borda", zero())).collect();
        let s = aggregate(&records, &[zero(), int(1)]).unwrap();
        let r = s.get("borda").unwrap();
        assert_eq!(r.frac_lt_001, int(1));
        assert_eq!(r.cdf, vec![(zero(), int(1)), (int(1), int(1))]);
    }

    #[test]
    fn nearest_rank_p99_and_order() {
        let mut records: Vec<_> = (0..200).map(|k| record("plurality", ratio(k, 200))).collect();
        records.push(record("vbc", zero()));
        let s = aggregate(&records, &default_cdf_grid()).unwrap();
        // rank ⌈0.99·200⌉ = 198 → value 197/200
        assert_eq!(s.get("plurality").unwrap().p99, ratio(197, 200));
        assert_eq!(s.rules[0].rule, "vbc");
        records.reverse();
        assert_eq!(aggregate(&records, &default_cdf_grid()).unwrap(), s);
        assert!(s.summary_csv().unwrap().starts_with("rule,mean,p99,frac_lt_0.01\n"));
        assert!(s.cdf_csv().unwrap().starts_with("rule,epsilon,cumulative_fraction\n"));
    }

    #[test]
    fn empty_is_an_error() {
        assert!(aggregate(&[], &default_cdf_grid()).is_err());
    }
}
