//! Rebel messaging and decision rules.
//!
//! Every decision rule is gated on degree: an agent whose degree is below the
//! median degree of the network stays silent whatever it hears.
//!
//! Comparison conventions: the Quorum-Sensing mean test is inclusive (`>=`),
//! while "above", "exceeds" and "more than" in the count-based rules are strict.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{is_huge_signal, Message};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RebelOutput {
    Many,
    Silent,
}

impl RebelOutput {
    pub fn is_many(self) -> bool {
        self == RebelOutput::Many
    }

    fn from_bool(many: bool) -> Self {
        if many {
            RebelOutput::Many
        } else {
            RebelOutput::Silent
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuorumSensingParams {
    pub epsilon: f64,
}

impl QuorumSensingParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(QuorumSensingParams { epsilon })
    }
}

/// Range of `epsilon` over which the median rule carries its guarantee.
pub const MEDIAN_EPSILON_RANGE: (f64, f64) = (0.04, 0.2);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedianParams {
    pub epsilon: f64,
}

impl MedianParams {
    /// Accepts any positive `epsilon`; use [`MedianParams::in_guaranteed_range`]
    /// to warn when it falls outside `[0.04, 0.2]`.
    pub fn new(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(MedianParams { epsilon })
    }

    pub fn in_guaranteed_range(&self) -> bool {
        (MEDIAN_EPSILON_RANGE.0..=MEDIAN_EPSILON_RANGE.1).contains(&self.epsilon)
    }

    /// Margin `7 eps / 30` below one half.
    pub fn margin(&self) -> f64 {
        7.0 * self.epsilon / 30.0
    }

    /// Fraction of high signals that must be exceeded: `1/2 - 7 eps / 30`.
    pub fn threshold_fraction(&self) -> f64 {
        0.5 - self.margin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfImmolationParams {
    /// Probability that a rebel sends the huge message.
    pub q: f64,
    /// Huge-signal count threshold, scaled by `deg / median_deg`.
    pub tau: f64,
    /// Constant the parameters were derived from, if any.
    pub c: Option<f64>,
}

impl SelfImmolationParams {
    pub fn new(q: f64, tau: f64) -> Result<Self> {
        let params = SelfImmolationParams { q, tau, c: None };
        params.validate()?;
        Ok(params)
    }

    /// `q = c ln n / median_deg`, `tau = c ln n / 2`.
    pub fn from_constant(c: f64, n: usize, median_deg: usize) -> Result<Self> {
        if !(c > 0.0) || median_deg == 0 || n < 2 {
            return Err(Error::param(format!(
                "need c > 0, n >= 2 and a positive median degree (c = {c}, n = {n}, median = {median_deg})"
            )));
        }
        let log_n = (n as f64).ln();
        let params = SelfImmolationParams {
            q: c * log_n / median_deg as f64,
            tau: c * log_n / 2.0,
            c: Some(c),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::param(format!("immolation rate q = {} outside (0, 1]", self.q)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::param(format!("threshold tau = {} must be positive", self.tau)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineMessage {
    AlwaysZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineDecider {
    AlwaysMany,
    NeverMany,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("epsilon = {epsilon} must be positive and finite")))
    }
}

fn check_signals(signals: &[f64]) -> Result<()> {
    if signals.is_empty() {
        Err(Error::input("decision rule needs at least one signal"))
    } else {
        Ok(())
    }
}

pub fn qs_message(params: &QuorumSensingParams) -> Message {
    Message(params.epsilon)
}

pub fn qs_decide(
    signals: &[f64],
    deg_i: usize,
    median_deg: usize,
    params: &QuorumSensingParams,
) -> Result<RebelOutput> {
    check_signals(signals)?;
    if deg_i < median_deg {
        return Ok(RebelOutput::Silent);
    }
    let mean = signals.iter().sum::<f64>() / signals.len() as f64;
    Ok(RebelOutput::from_bool(mean >= params.epsilon / 2.0))
}

pub fn median_message(params: &MedianParams) -> Message {
    Message(params.epsilon)
}

/// Number of signals strictly above `epsilon`.
pub fn high_signal_count(signals: &[f64], epsilon: f64) -> usize {
    signals.iter().filter(|&&s| s > epsilon).count()
}

pub fn median_decide(
    signals: &[f64],
    deg_i: usize,
    median_deg: usize,
    params: &MedianParams,
) -> Result<RebelOutput> {
    check_signals(signals)?;
    if deg_i < median_deg {
        return Ok(RebelOutput::Silent);
    }
    let count = high_signal_count(signals, params.epsilon) as f64;
    Ok(RebelOutput::from_bool(count > params.threshold_fraction() * deg_i as f64))
}

/// Draws exactly one coin from `rng`.
pub fn si_message<R: Rng + ?Sized>(params: &SelfImmolationParams, rng: &mut R) -> Message {
    if rng.random_bool(params.q) {
        Message::HUGE
    } else {
        Message::ZERO
    }
}

pub fn huge_signal_count(signals: &[f64]) -> usize {
    signals.iter().filter(|&&s| is_huge_signal(s)).count()
}

pub fn si_decide(
    signals: &[f64],
    deg_i: usize,
    median_deg: usize,
    params: &SelfImmolationParams,
) -> Result<RebelOutput> {
    check_signals(signals)?;
    if deg_i < median_deg || median_deg == 0 {
        return Ok(RebelOutput::Silent);
    }
    let needed = params.tau * deg_i as f64 / median_deg as f64;
    Ok(RebelOutput::from_bool(huge_signal_count(signals) as f64 > needed))
}

pub fn baseline_message(kind: BaselineMessage) -> Message {
    match kind {
        BaselineMessage::AlwaysZero => Message::ZERO,
    }
}

pub fn baseline_decide(kind: BaselineDecider) -> RebelOutput {
    match kind {
        BaselineDecider::AlwaysMany => RebelOutput::Many,
        BaselineDecider::NeverMany => RebelOutput::Silent,
    }
}

/// A complete rebel protocol: one messaging rule and one decision rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RebelProtocol {
    QuorumSensing(QuorumSensingParams),
    Median(MedianParams),
    SelfImmolation(SelfImmolationParams),
    /// Rebels announce zero, like obedient citizens, and decide by a constant rule.
    Baseline(BaselineDecider),
}

impl RebelProtocol {
    pub fn name(&self) -> &'static str {
        match self {
            RebelProtocol::QuorumSensing(_) => "quorum_sensing",
            RebelProtocol::Median(_) => "median",
            RebelProtocol::SelfImmolation(_) => "self_immolation",
            RebelProtocol::Baseline(BaselineDecider::AlwaysMany) => "always_many",
            RebelProtocol::Baseline(BaselineDecider::NeverMany) => "never_many",
        }
    }

    pub fn message<R: Rng + ?Sized>(&self, rng: &mut R) -> Message {
        match self {
            RebelProtocol::QuorumSensing(p) => qs_message(p),
            RebelProtocol::Median(p) => median_message(p),
            RebelProtocol::SelfImmolation(p) => si_message(p, rng),
            RebelProtocol::Baseline(_) => baseline_message(BaselineMessage::AlwaysZero),
        }
    }

    pub fn decide(&self, signals: &[f64], deg_i: usize, median_deg: usize) -> Result<RebelOutput> {
        match self {
            RebelProtocol::QuorumSensing(p) => qs_decide(signals, deg_i, median_deg, p),
            RebelProtocol::Median(p) => median_decide(signals, deg_i, median_deg, p),
            RebelProtocol::SelfImmolation(p) => si_decide(signals, deg_i, median_deg, p),
            RebelProtocol::Baseline(kind) => {
                check_signals(signals)?;
                Ok(baseline_decide(*kind))
            }
        }
    }

    /// The message value a rebel sends when it is not indistinguishable from
    /// an obedient citizen; `None` for the baselines.
    pub fn rebel_level(&self) -> Option<f64> {
        match self {
            RebelProtocol::QuorumSensing(p) => Some(p.epsilon),
            RebelProtocol::Median(p) => Some(p.epsilon),
            RebelProtocol::SelfImmolation(_) => Some(Message::HUGE.value()),
            RebelProtocol::Baseline(_) => None,
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match self {
            RebelProtocol::QuorumSensing(p) => Some(p.epsilon),
            RebelProtocol::Median(p) => Some(p.epsilon),
            _ => None,
        }
    }
}
