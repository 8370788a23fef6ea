//! The `pvc` command line.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 when the input data is
//! rejected. Diagnostics go to the error stream.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::{
    aggregate, config_grid, derive_seed, evaluate_insertion, parse_records, run_experiment, write_outputs,
    ExperimentConfig, InsertedStatement, Summary,
};
use crate::profile::{btl_distribution, AlternativeDistribution, Profile, UtilityProfile};
use crate::pvc::{classic_pvc, critical_epsilon, epsilon_pvc, max_blocking_slack, BlockingWitness, Method};
use crate::querysim::{find_epsilon_pvc_element, judge_run, OracleEnvironment, QueryMode, QueryTrace};
use crate::rational::parse_rational;
use crate::rules::{default_veto_order, run_rule, vote_by_veto, RuleKind, TraceStep};
use crate::{AltId, Error, Rational, Result};

#[derive(Debug, Parser)]
#[command(name = "pvc", version, about = "Proportional veto core computations and rule benchmarks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Flow,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Min,
    Pairwise,
}

#[derive(Debug, Args)]
struct DistArgs {
    /// Alternative weights, one per line (default: uniform).
    #[arg(long, conflicts_with = "btl")]
    dist: Option<PathBuf>,
    /// Utility matrix (CSV, one row per voter) turned into BTL weights.
    #[arg(long)]
    btl: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a profile and print its grouped ballots.
    Parse {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Critical ε of one or all alternatives.
    CriticalEpsilon {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, conflicts_with = "all")]
        alt: Option<AltId>,
        #[arg(long)]
        all: bool,
        /// Include a blocking coalition when the value is positive.
        #[arg(long)]
        witness: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Flow)]
        method: MethodArg,
    },
    /// The ε-PVC, or the classic PVC with --classic.
    Pvc {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_parser = rational_arg, required_unless_present = "classic")]
        epsilon: Option<Rational>,
        #[arg(long, conflicts_with_all = ["epsilon", "dist", "btl"])]
        classic: bool,
    },
    /// Run a voting rule.
    Vote {
        #[arg(long, value_parser = rule_arg)]
        rule: RuleKind,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Voter order for `--rule veto` (m − 1 comma-separated ids);
        /// defaults to cycling through the voters.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        #[arg(long)]
        trace: bool,
    },
    /// Repeated query-bounded elicitation, judged against the full profile.
    Simulate {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Rational,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        #[arg(long, value_enum, default_value_t = ModeArg::Min)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a benchmark described by a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Directory for records.jsonl, summary.csv and cdf.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise a records.jsonl file.
    Aggregate {
        #[arg(long)]
        records: PathBuf,
        /// Comma-separated ε grid for the CDF.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        grid: Option<Vec<Rational>>,
        /// Print the CDF instead of the summary.
        #[arg(long)]
        cdf: bool,
    },
    /// Critical ε of outside statements inserted with zero weight.
    InsertEval {
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, required = true, num_args = 1..)]
        insertion: Vec<PathBuf>,
    },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rule_arg(s: &str) -> std::result::Result<RuleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load_dist(args: &DistArgs, profile: &Profile) -> Result<AlternativeDistribution> {
    let dist = match (&args.dist, &args.btl) {
        (Some(path), _) => AlternativeDistribution::from_file(path)?,
        (None, Some(path)) => btl_distribution(&UtilityProfile::from_file(path)?),
        (None, None) => AlternativeDistribution::uniform(profile.m())?,
    };
    dist.check_matches(profile)?;
    Ok(dist)
}

struct Emitter<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

impl Emitter<'_> {
    /// JSON lines from `json`, or a CSV table from `csv` rows.
    fn emit<J: Serialize, C: Serialize>(&mut self, json: &[J], csv_rows: &[C]) -> Result<()> {
        let text = match self.format {
            Format::Json => super::aggregate::to_jsonl(json),
            Format::Csv => super::aggregate::to_csv(csv_rows)?,
        };
        self.write(&text)
    }

    fn write(&mut self, text: &str) -> Result<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))
    }

    fn summary(&mut self, summary: &Summary, cdf: bool) -> Result<()> {
        if cdf {
            let rows = summary.cdf_rows();
            self.emit(&rows, &rows)
        } else {
            let rows = summary.rows();
            self.emit(&rows, &rows)
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let mut em = Emitter {
        format: cli.format,
        out,
    };
    match cli.command {
        Command::Parse { profile } => {
            let p = Profile::from_file(&profile)?;
            #[derive(Serialize)]
            struct Ballot {
                count: usize,
                ranking: Vec<AltId>,
            }
            #[derive(Serialize)]
            struct Parsed<'a> {
                n: usize,
                m: usize,
                names: Option<&'a [String]>,
                ballots: Vec<Ballot>,
            }
            #[derive(Serialize)]
            struct Row {
                count: usize,
                ranking: String,
            }
            let counts = p.ballot_counts();
            let rows: Vec<Row> = counts
                .iter()
                .map(|(r, c)| Row {
                    count: *c,
                    ranking: join(r),
                })
                .collect();
            let parsed = Parsed {
                n: p.n(),
                m: p.m(),
                names: p.names(),
                ballots: counts
                    .into_iter()
                    .map(|(ranking, count)| Ballot { count, ranking })
                    .collect(),
            };
            em.emit(&[parsed], &rows)
        }
        Command::CriticalEpsilon {
            profile,
            dist,
            alt,
            all,
            witness,
            method,
        } => {
            let p = Profile::from_file(&profile)?;
            let d = load_dist(&dist, &p)?;
            let alts: Vec<AltId> = match (alt, all) {
                (Some(a), _) => {
                    if a >= p.m() {
                        return Err(Error::invalid(format!("alternative {a} out of range (m = {})", p.m())));
                    }
                    vec![a]
                }
                (None, _) => (0..p.m()).collect(),
            };
            #[derive(Serialize)]
            struct Json {
                alt: AltId,
                critical_epsilon: String,
                method: Method,
                #[serde(skip_serializing_if = "Option::is_none")]
                witness: Option<BlockingWitness>,
            }
            #[derive(Serialize)]
            struct Row {
                alt: AltId,
                critical_epsilon: String,
                coalition: String,
                blocking_set: String,
                slack: String,
            }
            let mut json = Vec::new();
            let mut rows = Vec::new();
            for a in alts {
                let r = match method {
                    MethodArg::Flow => critical_epsilon(&p, &d, a)?,
                    MethodArg::BruteForce => max_blocking_slack(&p, &d, a)?,
                };
                let w = if witness { r.witness.clone() } else { None };
                rows.push(Row {
                    alt: a,
                    critical_epsilon: r.value.to_string(),
                    coalition: w.as_ref().map(|w| join(&w.coalition)).unwrap_or_default(),
                    blocking_set: w.as_ref().map(|w| join(&w.blocking_set)).unwrap_or_default(),
                    slack: w.as_ref().map(|w| w.slack.to_string()).unwrap_or_default(),
                });
                json.push(Json {
                    alt: a,
                    critical_epsilon: r.value.to_string(),
                    method: r.method,
                    witness: w,
                });
            }
            em.emit(&json, &rows)
        }
        Command::Pvc {
            profile,
            dist,
            epsilon,
            classic,
        } => {
            let p = Profile::from_file(&profile)?;
            let members = if classic {
                classic_pvc(&p)?
            } else {
                let d = load_dist(&dist, &p)?;
                epsilon_pvc(&p, &d, &epsilon.expect("required unless --classic"))?
            };
            #[derive(Serialize)]
            struct Json {
                pvc: Vec<AltId>,
            }
            #[derive(Serialize)]
            struct Row {
                alt: AltId,
            }
            let rows: Vec<Row> = members.iter().map(|&alt| Row { alt }).collect();
            em.emit(&[Json { pvc: members }], &rows)
        }
        Command::Vote {
            rule,
            profile,
            seed,
            order,
            trace,
        } => {
            let p = Profile::from_file(&profile)?;
            let outcome = match (rule, order) {
                (RuleKind::Veto, order) => {
                    vote_by_veto(&p, &order.unwrap_or_else(|| default_veto_order(p.n(), p.m())))?
                }
                (_, Some(_)) => return Err(Error::invalid("--order only applies to --rule veto")),
                (rule, None) => run_rule(rule, &p, seed)?,
            };
            #[derive(Serialize)]
            struct Json<'a> {
                winner: AltId,
                rule: RuleKind,
                #[serde(skip_serializing_if = "Option::is_none")]
                trace: Option<&'a [TraceStep]>,
            }
            #[derive(Serialize)]
            struct Row {
                winner: AltId,
                rule: RuleKind,
            }
            em.emit(
                &[Json {
                    winner: outcome.winner,
                    rule: outcome.rule,
                    trace: trace.then_some(&outcome.trace[..]),
                }],
                &[Row {
                    winner: outcome.winner,
                    rule: outcome.rule,
                }],
            )
        }
        Command::Simulate {
            profile,
            dist,
            epsilon,
            delta,
            mode,
            runs,
            seed,
        } => {
            let p = Profile::from_file(&profile)?;
            let d = load_dist(&dist, &p)?;
            let mode = match mode {
                ModeArg::Min => QueryMode::Min,
                ModeArg::Pairwise => QueryMode::Pairwise,
            };
            simulate(&mut em, &p, &d, &epsilon, &delta, mode, runs, seed)
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let grid = config_grid(&cfg)?;
            let records = run_experiment(&cfg)?;
            let summary = match out {
                Some(dir) => write_outputs(&dir, &records, &grid)?,
                None => aggregate(&records, &grid)?,
            };
            em.summary(&summary, false)
        }
        Command::Aggregate { records, grid, cdf } => {
            let text = read(&records)?;
            let records = parse_records(&text)?;
            let grid = grid.unwrap_or_else(super::default_cdf_grid);
            em.summary(&aggregate(&records, &grid)?, cdf)
        }
        Command::InsertEval {
            profile,
            dist,
            insertion,
        } => {
            let p = Profile::from_file(&profile)?;
            let d = load_dist(&dist, &p)?;
            #[derive(Serialize)]
            struct Json {
                label: String,
                alt: AltId,
                critical_epsilon: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                witness: Option<BlockingWitness>,
            }
            #[derive(Serialize)]
            struct Row {
                label: String,
                alt: AltId,
                critical_epsilon: String,
            }
            let mut json = Vec::new();
            let mut rows = Vec::new();
            for path in insertion {
                let statement = InsertedStatement::from_file(&path)?;
                let r = evaluate_insertion(&p, &d, &statement)?;
                rows.push(Row {
                    label: statement.label.clone(),
                    alt: r.alt,
                    critical_epsilon: r.value.to_string(),
                });
                json.push(Json {
                    label: statement.label,
                    alt: r.alt,
                    critical_epsilon: r.value.to_string(),
                    witness: r.witness,
                });
            }
            em.emit(&json, &rows)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    em: &mut Emitter<'_>,
    profile: &Profile,
    dist: &AlternativeDistribution,
    eps: &Rational,
    delta: &Rational,
    mode: QueryMode,
    runs: usize,
    seed: u64,
) -> Result<()> {
    #[derive(Serialize)]
    struct RunJson {
        run: usize,
        survivor: AltId,
        critical_epsilon: String,
        in_eps_pvc: bool,
        in_sample_pvc: bool,
        trace: QueryTrace,
    }
    #[derive(Serialize)]
    struct RunRow {
        run: usize,
        survivor: AltId,
        critical_epsilon: String,
        in_eps_pvc: bool,
        in_sample_pvc: bool,
        generative: u64,
        min_queries: u64,
        pairwise: u64,
    }
    #[derive(Serialize)]
    struct SummaryJson {
        summary: SummaryBody,
    }
    #[derive(Serialize)]
    struct SummaryBody {
        runs: usize,
        tau: u64,
        in_eps_pvc: usize,
        in_sample_pvc: usize,
        failure_rate: f64,
    }
    if runs == 0 {
        return Err(Error::invalid("--runs must be at least 1"));
    }
    let mut json = Vec::with_capacity(runs);
    let mut rows = Vec::with_capacity(runs);
    let mut tau = 0;
    for run in 0..runs {
        let mut env = OracleEnvironment::new(profile.clone(), dist.clone(), derive_seed(seed, run as u64, 0))?;
        let result = find_epsilon_pvc_element(&mut env, eps, delta, mode, derive_seed(seed, run as u64, 1))?;
        let verdict = judge_run(&result, &env, eps)?;
        tau = result.tau;
        rows.push(RunRow {
            run,
            survivor: result.survivor,
            critical_epsilon: verdict.critical_epsilon.to_string(),
            in_eps_pvc: verdict.in_eps_pvc,
            in_sample_pvc: verdict.in_sample_pvc,
            generative: result.trace.generative,
            min_queries: result.trace.min_queries,
            pairwise: result.trace.pairwise,
        });
        json.push(RunJson {
            run,
            survivor: result.survivor,
            critical_epsilon: verdict.critical_epsilon.to_string(),
            in_eps_pvc: verdict.in_eps_pvc,
            in_sample_pvc: verdict.in_sample_pvc,
            trace: result.trace,
        });
    }
    if em.format == Format::Csv {
        return em.emit(&json, &rows);
    }
    let hits = json.iter().filter(|r| r.in_eps_pvc).count();
    let summary = SummaryJson {
        summary: SummaryBody {
            runs,
            tau,
            in_eps_pvc: hits,
            in_sample_pvc: json.iter().filter(|r| r.in_sample_pvc).count(),
            failure_rate: (runs - hits) as f64 / runs as f64,
        },
    };
    em.emit(&json, &rows)?;
    em.emit(&[summary], &rows[..0])
}
