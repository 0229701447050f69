//! Messages sent by undercover agents, and the attack that breaks
//! Quorum-Sensing while leaving the median rule nearly untouched.

use serde::{Deserialize, Serialize};

use crate::analysis::estimate::{designated_rebel_rate, estimate_output_risk, Estimate};
use crate::analysis::oracle::{median_high_probability, median_many_probability};
use crate::channel::{Message, Mode, HUGE_VALUE};
use crate::error::{Error, Result};
use crate::graph::build_complete;
use crate::population::{regime, PopulationParams, Regime, RoleSampler};
use crate::rebel_protocols::{MedianParams, QuorumSensingParams, RebelProtocol};
use crate::round::{run_trials, RoundSetup};

/// Static message of every undercover agent in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AttackStrategy {
    ConstantValue(f64),
    HugePositive,
    HugeNegative,
    /// Sends what a rebel with the given `epsilon` would.
    MimicRebel(f64),
}

pub fn undercover_message(strategy: AttackStrategy) -> Message {
    match strategy {
        AttackStrategy::ConstantValue(v) | AttackStrategy::MimicRebel(v) => Message(v),
        AttackStrategy::HugePositive => Message(HUGE_VALUE),
        AttackStrategy::HugeNegative => Message(-HUGE_VALUE),
    }
}

/// Outcome of running Quorum-Sensing and the median rule side by side with
/// planted undercover agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakDemo {
    pub n: usize,
    pub epsilon: f64,
    pub rho: f64,
    pub undercover: usize,
    pub trials: u64,
    /// Pooled over all gated rebels.
    pub qs_output_risk: Estimate,
    /// One rebel per trial; its interval is valid despite shared signals.
    pub qs_designated: Estimate,
    /// Exact Quorum-Sensing false-positive rate without any undercover agent.
    pub qs_clean_oracle: f64,
    pub median_output_risk: Estimate,
    pub median_designated: Estimate,
    /// Exact median-rule rate without any undercover agent.
    pub median_clean_oracle: f64,
    /// Exact median-rule rate with every undercover neighbour counted high.
    pub median_attacked_oracle: f64,
    /// The designated-rebel Quorum-Sensing interval excludes its clean oracle.
    pub qs_corrupted: bool,
}

/// Complete network of `n` agents, `undercover` of them planted sending the
/// huge message, everyone else a rebel with probability `rho`.
pub fn qs_break_demo(
    n: usize,
    undercover: usize,
    epsilon: f64,
    rho: f64,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<BreakDemo> {
    if regime(rho) != Regime::Few {
        return Err(Error::param(format!("rho = {rho} is not in the few-rebels regime")));
    }
    if undercover >= n {
        return Err(Error::param("undercover agents must leave room for rebels"));
    }
    let net = build_complete(n)?;
    let sampler = RoleSampler {
        params: PopulationParams::new(rho, 0.0)?,
        planted_rebels: None,
        planted_undercover: undercover,
    };
    let run = |protocol: RebelProtocol| -> Result<(Estimate, Estimate)> {
        let setup = RoundSetup::new(net.clone(), Mode::Public, protocol, sampler).with_attack(AttackStrategy::HugePositive);
        let records = run_trials(&setup, seed, trials, threads)?;
        Ok((estimate_output_risk(&records)?.gated, designated_rebel_rate(&records)?))
    };
    let (qs, qs_designated) = run(RebelProtocol::QuorumSensing(QuorumSensingParams::new(epsilon)?))?;
    let median_params = MedianParams::new(epsilon)?;
    let (median, median_designated) = run(RebelProtocol::Median(median_params))?;

    let degree = n - 1;
    let qs_clean_oracle = crate::analysis::oracle::qs_many_probability(degree, rho, epsilon);
    let p_high = median_high_probability(rho, epsilon, 0.0);
    let frac = median_params.threshold_fraction();
    Ok(BreakDemo {
        n,
        epsilon,
        rho,
        undercover,
        trials,
        qs_corrupted: !qs_designated.contains(qs_clean_oracle),
        qs_output_risk: qs,
        qs_designated,
        qs_clean_oracle,
        median_output_risk: median,
        median_designated,
        median_clean_oracle: median_many_probability(degree, p_high, frac, 0, 0),
        median_attacked_oracle: median_many_probability(degree, p_high, frac, undercover, undercover),
    })
}
