//! Proportional veto core toolkit.
//!
//! The crate computes the ε-proportional veto core of finite preference
//! profiles under weighted alternative distributions, runs the veto family of
//! voting rules (and the usual comparison rules), simulates query-bounded
//! elicitation of a core element, and benchmarks voting rules by the critical
//! ε of their winners.
//!
//! All weights are exact rationals ([`Rational`]); blocking comparisons are
//! strict and must never be decided in floating point.
//!
//! ```
//! use pvc_core::profile::{AlternativeDistribution, Profile};
//! use pvc_core::pvc::{critical_epsilon, epsilon_pvc};
//! use pvc_core::Rational;
//!
//! let profile = Profile::parse_soc("1: 0,1").unwrap();
//! let uniform = AlternativeDistribution::uniform(2).unwrap();
//! let result = critical_epsilon(&profile, &uniform, 1).unwrap();
//! assert_eq!(result.value, Rational::new(1.into(), 2.into()));
//! assert_eq!(epsilon_pvc(&profile, &uniform, &Rational::from_integer(0.into())).unwrap(), vec![0]);
//! ```
//!
//! Runnable examples (`cargo run --example NAME`):
//!
//! - `profile_io`: SOC files, restriction, subsampling, synthetic profiles
//! - `critical_epsilon`: critical ε with blocking witnesses
//! - `epsilon_pvc`: cores across a sweep of ε
//! - `voting_rules`: every rule, γ-veto and the VBC trace
//! - `btl_distribution`: weights from cardinal utilities
//! - `statement_insertion`: scoring an outside statement
//! - `query_elicitation`: finding a core element from queries alone
//! - `lower_bounds`: why identifying a core element costs more than finding one
//! - `rule_benchmark`: the subsampling benchmark from a TOML config

pub mod error;
pub mod harness;
pub mod profile;
pub mod pvc;
pub mod querysim;
pub mod rational;
pub mod rules;

pub use error::{Error, Result};
pub use rational::Rational;

/// Dense alternative identifier, `0..m`.
pub type AltId = usize;
/// Dense voter identifier, `0..n`.
pub type VoterId = usize;
