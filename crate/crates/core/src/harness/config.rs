use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::profile::{
    btl_distribution, generate_synthetic, AlternativeDistribution, MixtureComponent, Profile, SyntheticModel,
    UtilityProfile,
};
use crate::rational::parse_rational;
use crate::rules::RuleKind;
use crate::{AltId, Error, Result};

/// Experiment description, usually read from a TOML file.
///
/// ```toml
/// seed = 7
/// replications = 10
/// rules = ["vbc", "borda", "plurality"]
/// distribution = "uniform"        # or "weights.txt", or "btl:utilities.csv"
///
/// [synthetic]                     # or: profile = "election.soc"
/// voters = 100
/// alternatives = 100
/// [[synthetic.components]]
/// share = "7/20"
/// phi = 0.7
/// [[synthetic.components]]
/// share = "7/20"
/// phi = 0.7
/// reference = "reversed"
/// [[synthetic.components]]
/// share = "3/10"
/// phi = 0.9
/// reference = "center-out"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub profile: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSpec>,
    #[serde(default = "default_distribution")]
    pub distribution: String,
    #[serde(default = "default_sub")]
    pub sub_voters: usize,
    #[serde(default = "default_sub")]
    pub sub_alts: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_subsamples")]
    pub subsamples_per_replication: usize,
    #[serde(default = "default_rules")]
    pub rules: Vec<RuleKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub insertions: Vec<PathBuf>,
    /// Re-check every critical ε by brute force when the full profile has at
    /// most 12 voters.
    #[serde(default = "default_true")]
    pub audit: bool,
    /// ε values at which the CDF is sampled; decimal or `p/q` strings.
    #[serde(default)]
    pub cdf_grid: Option<Vec<String>>,
}

/// Synthetic full profile. No components means impartial culture; otherwise
/// a mixture of Mallows blocs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub voters: usize,
    pub alternatives: usize,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub share: String,
    pub phi: f64,
    #[serde(default)]
    pub reference: ReferenceSpec,
}

/// Reference ranking of a Mallows bloc: a named shape over the axis
/// `0, 1, …, m−1`, or an explicit ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceSpec {
    Named(NamedReference),
    Explicit(Vec<AltId>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedReference {
    /// `0 ≻ 1 ≻ … ≻ m−1`.
    Identity,
    /// `m−1 ≻ … ≻ 0`.
    Reversed,
    /// Middle of the axis first, then outwards; the lower id first on ties.
    CenterOut,
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        ReferenceSpec::Named(NamedReference::Identity)
    }
}

impl ReferenceSpec {
    pub fn ranking(&self, m: usize) -> Vec<AltId> {
        match self {
            ReferenceSpec::Explicit(r) => r.clone(),
            ReferenceSpec::Named(NamedReference::Identity) => (0..m).collect(),
            ReferenceSpec::Named(NamedReference::Reversed) => (0..m).rev().collect(),
            ReferenceSpec::Named(NamedReference::CenterOut) => {
                let mut r: Vec<AltId> = (0..m).collect();
                r.sort_by_key(|&j| ((2 * j as i64 - (m as i64 - 1)).abs(), j));
                r
            }
        }
    }
}

fn default_distribution() -> String {
    "uniform".into()
}
fn default_sub() -> usize {
    20
}
fn default_replications() -> usize {
    10
}
fn default_subsamples() -> usize {
    4
}
fn default_rules() -> Vec<RuleKind> {
    RuleKind::BENCHMARK.to_vec()
}
fn default_true() -> bool {
    true
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            profile: None,
            synthetic: None,
            distribution: default_distribution(),
            sub_voters: default_sub(),
            sub_alts: default_sub(),
            replications: default_replications(),
            subsamples_per_replication: default_subsamples(),
            rules: default_rules(),
            seed: 0,
            insertions: Vec::new(),
            audit: true,
            cdf_grid: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::parse(line, e.message().to_string())
        })
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = cfg.profile.as_mut() {
            rebase(p);
        }
        cfg.insertions.iter_mut().for_each(rebase);
        if let Some(rest) = cfg.distribution.strip_prefix("btl:") {
            cfg.distribution = format!("btl:{}", base.join(rest).display());
        } else if cfg.distribution != "uniform" {
            cfg.distribution = base.join(&cfg.distribution).display().to_string();
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.profile, &self.synthetic) {
            (Some(_), Some(_)) => return Err(Error::invalid("set either profile or synthetic, not both")),
            (None, None) => return Err(Error::invalid("config needs a profile file or a synthetic section")),
            _ => {}
        }
        if self.replications == 0 || self.subsamples_per_replication == 0 {
            return Err(Error::invalid("replications and subsamples per replication must be at least 1"));
        }
        if self.sub_voters == 0 || self.sub_alts == 0 {
            return Err(Error::invalid("subsample sizes must be at least 1"));
        }
        if self.rules.is_empty() {
            return Err(Error::invalid("no rules configured"));
        }
        Ok(())
    }

    /// The full profile for replication `rep`. A synthetic profile gets a fresh
    /// seed per replication; a file profile is the same every time.
    pub fn full_profile(&self, rep: usize) -> Result<Profile> {
        if let Some(path) = &self.profile {
            return Profile::from_file(path);
        }
        let spec = self
            .synthetic
            .as_ref()
            .ok_or_else(|| Error::invalid("config needs a profile file or a synthetic section"))?;
        let seed = super::derive_seed(self.seed, rep as u64, u32::MAX as u64);
        generate_synthetic(&spec.model()?, spec.voters, spec.alternatives, seed)
    }

    pub fn load_distribution(&self, profile: &Profile) -> Result<AlternativeDistribution> {
        let dist = match self.distribution.as_str() {
            "uniform" => AlternativeDistribution::uniform(profile.m())?,
            other => match other.strip_prefix("btl:") {
                Some(path) => btl_distribution(&UtilityProfile::from_file(path)?),
                None => AlternativeDistribution::from_file(other)?,
            },
        };
        dist.check_matches(profile)?;
        Ok(dist)
    }
}

impl SyntheticSpec {
    pub fn model(&self) -> Result<SyntheticModel> {
        if self.components.is_empty() {
            return Ok(SyntheticModel::ImpartialCulture);
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(MixtureComponent {
                    share: parse_rational(&c.share)?,
                    phi: c.phi,
                    reference: c.reference.ranking(self.alternatives),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SyntheticModel::Mixture(components))
    }
}
