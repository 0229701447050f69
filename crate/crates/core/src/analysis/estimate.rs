//! Trial records and the estimators folded over them.

use serde::{Deserialize, Serialize};

use super::normal::normal_quantile;
use crate::error::{Error, Result};
use crate::police_protocols::PoliceKind;
use crate::population::{regime, Regime, Role};
use crate::rebel_protocols::RebelOutput;

/// Confidence level used throughout.
pub const CONFIDENCE: f64 = 0.99;

/// Fewest trials accepted by [`estimate_success`].
pub const MIN_SUCCESS_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RebelEntry {
    pub agent: u32,
    /// Whether the rebel's degree reaches the median degree.
    pub gated: bool,
    pub output: RebelOutput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoliceArrests {
    pub police: PoliceKind,
    /// One flag per agent.
    pub arrested: Vec<bool>,
}

/// Everything one simulated round leaves behind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub rho: f64,
    pub roles: Vec<Role>,
    pub rebels: Vec<RebelEntry>,
    pub arrests: Vec<PoliceArrests>,
    /// Rebels whose message was the huge sentinel.
    pub huge_emitters: usize,
}

impl TrialRecord {
    pub fn many_count(&self) -> usize {
        self.rebels.iter().filter(|r| r.output.is_many()).count()
    }

    /// Fraction of rebels that output "many" (0 when there are no rebels).
    pub fn fraction_many(&self) -> f64 {
        if self.rebels.is_empty() {
            0.0
        } else {
            self.many_count() as f64 / self.rebels.len() as f64
        }
    }

    /// At least a third of the rebels output "many".
    pub fn succeeded(&self) -> bool {
        !self.rebels.is_empty() && 3 * self.many_count() >= self.rebels.len()
    }

    pub fn arrests_of(&self, police: &PoliceKind) -> Option<&[bool]> {
        self.arrests
            .iter()
            .find(|a| &a.police == police)
            .map(|a| a.arrested.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Wilson score interval for a binomial proportion.
///
/// # Panics
///
/// Panics if `trials == 0` or `successes > trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Interval {
    assert!(trials >= 1 && successes <= trials, "need 0 <= successes <= trials, trials >= 1");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = normal_quantile(0.5 + confidence / 2.0);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Interval {
        lo: if successes == 0 { 0.0 } else { (center - half).max(0.0) },
        hi: if successes == trials { 1.0 } else { (center + half).min(1.0) },
    }
}

/// A binomial proportion with its 99% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InsufficientSample("no observations".into()));
        }
        let ci = wilson_interval(successes, trials, CONFIDENCE);
        Ok(Estimate {
            successes,
            trials,
            value: successes as f64 / trials as f64,
            lo: ci.lo,
            hi: ci.hi,
        })
    }

    pub fn interval(&self) -> Interval {
        Interval { lo: self.lo, hi: self.hi }
    }

    /// Binomial standard error of the point estimate.
    pub fn se(&self) -> f64 {
        (self.value * (1.0 - self.value) / self.trials as f64).sqrt()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.interval().contains(x)
    }
}

/// Probability that at least a third of the rebels output "many" under the
/// many-rebels regime.
pub fn estimate_success(trials: &[TrialRecord]) -> Result<Estimate> {
    if trials.len() < MIN_SUCCESS_TRIALS {
        return Err(Error::InsufficientSample(format!(
            "{} trials, need at least {MIN_SUCCESS_TRIALS}",
            trials.len()
        )));
    }
    require_regime(trials, Regime::Many)?;
    let successes = trials.iter().filter(|t| t.succeeded()).count();
    Estimate::from_counts(successes as u64, trials.len() as u64)
}

/// Per-rebel false-positive frequency under the few-rebels regime, pooled over
/// rebels and trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputRiskEstimate {
    /// Only rebels whose degree reaches the median degree.
    pub gated: Estimate,
    /// All rebels; ungated ones never output and count as silent.
    pub all: Estimate,
}

pub fn estimate_output_risk(trials: &[TrialRecord]) -> Result<OutputRiskEstimate> {
    require_regime(trials, Regime::Few)?;
    let (many_all, total_all) = pooled_rate(trials, |_| true);
    let (many_gated, total_gated) = pooled_rate(trials, |e| e.gated);
    if total_gated == 0 {
        return Err(Error::InsufficientSample("no rebel reached the median degree".into()));
    }
    Ok(OutputRiskEstimate {
        gated: Estimate::from_counts(many_gated, total_gated)?,
        all: Estimate::from_counts(many_all, total_all)?,
    })
}

/// Pooled per-rebel "many" rate over any regime, restricted by `keep`.
pub fn pooled_rate(trials: &[TrialRecord], keep: impl Fn(&RebelEntry) -> bool) -> (u64, u64) {
    trials
        .iter()
        .flat_map(|t| t.rebels.iter())
        .filter(|e| keep(e))
        .fold((0, 0), |(many, total), e| (many + e.output.is_many() as u64, total + 1))
}

pub fn per_rebel_rate(trials: &[TrialRecord], gated_only: bool) -> Result<Estimate> {
    let (many, total) = pooled_rate(trials, |e| e.gated || !gated_only);
    Estimate::from_counts(many, total)
}

/// "Many" rate of one designated rebel per trial: the lowest-indexed rebel
/// that passes the degree gate. Trials are independent, so unlike the pooled
/// rate this estimate's interval is valid even when the rebels of one trial
/// share neighbours and roles. Trials without a gated rebel are skipped.
pub fn designated_rebel_rate(trials: &[TrialRecord]) -> Result<Estimate> {
    let (many, total) = trials
        .iter()
        .filter_map(|t| t.rebels.iter().find(|e| e.gated))
        .fold((0u64, 0u64), |(m, n), e| (m + e.output.is_many() as u64, n + 1));
    Estimate::from_counts(many, total)
}

/// Standard error of the pooled per-rebel "many" rate that treats each trial
/// as one cluster (ratio-estimator linearisation). Rebels restricted by
/// `gated_only` as in [`per_rebel_rate`].
pub fn pooled_rate_cluster_se(trials: &[TrialRecord], gated_only: bool) -> f64 {
    let per_trial: Vec<(f64, f64)> = trials
        .iter()
        .map(|t| {
            t.rebels
                .iter()
                .filter(|e| e.gated || !gated_only)
                .fold((0.0, 0.0), |(m, n), e| (m + e.output.is_many() as u8 as f64, n + 1.0))
        })
        .collect();
    let k = per_trial.len() as f64;
    let (many, total) = per_trial.iter().fold((0.0, 0.0), |(m, n), (a, b)| (m + a, n + b));
    if k < 2.0 || total == 0.0 {
        return f64::NAN;
    }
    let rate = many / total;
    let mean_total = total / k;
    let ss: f64 = per_trial.iter().map(|(m, n)| (m - rate * n).powi(2)).sum();
    (ss / (k * (k - 1.0))).sqrt() / mean_total
}

/// Rebel arrest rate minus obedient arrest rate against one police.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MessageRiskEstimate {
    pub risk: f64,
    /// Newcombe hybrid-score interval for the difference of proportions.
    pub lo: f64,
    pub hi: f64,
    pub rebel: Estimate,
    pub obedient: Estimate,
}

impl MessageRiskEstimate {
    pub fn se(&self) -> f64 {
        (self.rebel.se().powi(2) + self.obedient.se().powi(2)).sqrt()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Undercover agents cooperate with the police and are excluded from both pools.
pub fn estimate_message_risk(trials: &[TrialRecord], police: &PoliceKind) -> Result<MessageRiskEstimate> {
    let mut counts = [[0u64; 2]; 2]; // [rebel, obedient] x [arrested, total]
    for t in trials {
        let arrests = t
            .arrests_of(police)
            .ok_or_else(|| Error::input(format!("trial {} has no {} arrests", t.trial, police.label())))?;
        for (role, &arrested) in t.roles.iter().zip(arrests) {
            let slot = match role {
                Role::Rebel => 0,
                Role::Obedient => 1,
                Role::Undercover => continue,
            };
            counts[slot][0] += arrested as u64;
            counts[slot][1] += 1;
        }
    }
    if counts[0][1] == 0 || counts[1][1] == 0 {
        return Err(Error::InsufficientSample(
            "message risk needs both rebels and obedient citizens".into(),
        ));
    }
    let rebel = Estimate::from_counts(counts[0][0], counts[0][1])?;
    let obedient = Estimate::from_counts(counts[1][0], counts[1][1])?;
    let risk = rebel.value - obedient.value;
    let lo = risk - ((rebel.value - rebel.lo).powi(2) + (obedient.hi - obedient.value).powi(2)).sqrt();
    let hi = risk + ((rebel.hi - rebel.value).powi(2) + (obedient.value - obedient.lo).powi(2)).sqrt();
    Ok(MessageRiskEstimate {
        risk,
        lo,
        hi,
        rebel,
        obedient,
    })
}

fn require_regime(trials: &[TrialRecord], wanted: Regime) -> Result<()> {
    match trials.iter().find(|t| regime(t.rho) != wanted) {
        Some(t) => Err(Error::input(format!(
            "trial {} ran at rho = {}, expected the {wanted} regime",
            t.trial, t.rho
        ))),
        None => Ok(()),
    }
}

/// Empirical message risk against one police, measured separately in each regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoliceRisk {
    pub police: PoliceKind,
    pub many: Option<MessageRiskEstimate>,
    pub few: Option<MessageRiskEstimate>,
}

/// Success, output-risk and message-risk of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub success: Estimate,
    /// Per-rebel "many" rate under the many regime (gated rebels).
    pub many_rate: Estimate,
    pub output_risk: OutputRiskEstimate,
    /// Worst case over all polices.
    pub message_risk_analytic: f64,
    pub message_risk_empirical: Vec<PoliceRisk>,
    /// `output_risk.gated + message_risk_analytic`.
    pub total_risk: f64,
    /// Trial-clustered standard error of `output_risk.gated`.
    pub output_risk_se: f64,
    pub trials: usize,
    pub regime_many_rho: f64,
    pub regime_few_rho: f64,
}

impl RiskReport {
    pub fn from_trials(
        many: &[TrialRecord],
        few: &[TrialRecord],
        police: &[PoliceKind],
        message_risk_analytic: f64,
    ) -> Result<Self> {
        let success = estimate_success(many)?;
        let output_risk = estimate_output_risk(few)?;
        let message_risk_empirical = police
            .iter()
            .map(|p| PoliceRisk {
                police: *p,
                many: estimate_message_risk(many, p).ok(),
                few: estimate_message_risk(few, p).ok(),
            })
            .collect();
        Ok(RiskReport {
            success,
            many_rate: per_rebel_rate(many, true)?,
            total_risk: output_risk.gated.value + message_risk_analytic,
            output_risk_se: pooled_rate_cluster_se(few, true),
            output_risk,
            message_risk_analytic,
            message_risk_empirical,
            trials: many.len().min(few.len()),
            regime_many_rho: many.first().map_or(f64::NAN, |t| t.rho),
            regime_few_rho: few.first().map_or(f64::NAN, |t| t.rho),
        })
    }

    pub fn police_risk(&self, police: &PoliceKind) -> Option<&PoliceRisk> {
        self.message_risk_empirical.iter().find(|r| &r.police == police)
    }

    /// One standard error of the total risk. The analytic part is exact and
    /// the output risk is clustered by trial.
    pub fn total_risk_se(&self) -> f64 {
        self.output_risk_se
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn record(trial: u64, rho: f64, outputs: &[bool], arrests: Option<(PoliceKind, Vec<bool>, Vec<Role>)>) -> TrialRecord {
        let (arrests, roles) = match arrests {
            Some((police, arrested, roles)) => (vec![PoliceArrests { police, arrested }], roles),
            None => (Vec::new(), vec![Role::Rebel; outputs.len()]),
        };
        TrialRecord {
            trial,
            rho,
            roles,
            rebels: outputs
                .iter()
                .enumerate()
                .map(|(i, &m)| RebelEntry {
                    agent: i as u32,
                    gated: true,
                    output: if m { RebelOutput::Many } else { RebelOutput::Silent },
                })
                .collect(),
            arrests,
            huge_emitters: 0,
        }
    }

    #[test]
    fn wilson_reference_points() {
        let zero = wilson_interval(0, 100, 0.99);
        assert_eq!(zero.lo, 0.0);
        assert!(zero.hi < 0.07, "{zero:?}");
        // z^2 / (n + z^2) with z = 2.5758293035489
        let z2 = 2.575_829_303_548_901f64.powi(2);
        assert_abs_diff_eq!(zero.hi, z2 / (100.0 + z2), epsilon = 1e-12);

        let half = wilson_interval(50, 100, 0.99);
        assert_abs_diff_eq!(half.lo + half.hi, 1.0, epsilon = 1e-12);
        assert_eq!(wilson_interval(100, 100, 0.99).hi, 1.0);
    }

    #[test]
    fn success_counts_a_third() {
        let many: Vec<_> = (0..100).map(|t| record(t, 0.9, &[true, false, false], None)).collect();
        assert_eq!(estimate_success(&many).unwrap().value, 1.0);
        let short: Vec<_> = (0..100).map(|t| record(t, 0.9, &[true, false, false, false], None)).collect();
        assert_eq!(estimate_success(&short).unwrap().value, 0.0);
    }

    #[test]
    fn success_preconditions() {
        let few: Vec<_> = (0..100).map(|t| record(t, 0.2, &[true], None)).collect();
        assert!(matches!(estimate_success(&few), Err(Error::InvalidInput(_))));
        let tiny: Vec<_> = (0..10).map(|t| record(t, 0.9, &[true], None)).collect();
        assert!(matches!(estimate_success(&tiny), Err(Error::InsufficientSample(_))));
    }

    #[test]
    fn output_risk_pools_rebels() {
        let few: Vec<_> = (0..10).map(|t| record(t, 0.2, &[true, false, false, false], None)).collect();
        let est = estimate_output_risk(&few).unwrap();
        assert_eq!(est.gated.value, 0.25);
        assert_eq!(est.gated.trials, 40);
        let never: Vec<_> = (0..10).map(|t| record(t, 0.1, &[false; 5], None)).collect();
        assert_eq!(estimate_output_risk(&never).unwrap().gated.value, 0.0);
        let many: Vec<_> = (0..10).map(|t| record(t, 0.8, &[true], None)).collect();
        assert!(estimate_output_risk(&many).is_err());
    }

    #[test]
    fn designated_rebel_and_cluster_se() {
        let mixed: Vec<_> = (0..10)
            .map(|t| record(t, 0.2, &[t % 2 == 0, true, true], None))
            .collect();
        let est = designated_rebel_rate(&mixed).unwrap();
        assert_eq!((est.successes, est.trials), (5, 10));
        // identical trials carry no between-trial variation
        let same: Vec<_> = (0..10).map(|t| record(t, 0.2, &[true, false], None)).collect();
        assert_eq!(pooled_rate_cluster_se(&same, true), 0.0);
        // one rebel per trial reduces to the binomial standard error (k - 1 denominator)
        let single: Vec<_> = (0..4).map(|t| record(t, 0.2, &[t < 2], None)).collect();
        assert_abs_diff_eq!(pooled_rate_cluster_se(&single, true), (1.0f64 / 12.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn message_risk_difference() {
        let police = PoliceKind::NpThreshold;
        let roles = vec![Role::Rebel, Role::Rebel, Role::Obedient, Role::Obedient, Role::Undercover];
        let arrested = vec![true, true, true, false, true];
        let trials: Vec<_> = (0..50)
            .map(|t| record(t, 0.4, &[false, false], Some((police, arrested.clone(), roles.clone()))))
            .collect();
        let est = estimate_message_risk(&trials, &police).unwrap();
        assert_abs_diff_eq!(est.risk, 0.5);
        assert!(est.lo < 0.5 && est.hi > 0.5);
        assert_eq!(est.rebel.trials, 100);
        assert!(estimate_message_risk(&trials, &PoliceKind::NoArrest).is_err());

        let no_obedient: Vec<_> = (0..5)
            .map(|t| record(t, 1.0, &[false], Some((police, vec![true], vec![Role::Rebel]))))
            .collect();
        assert!(matches!(
            estimate_message_risk(&no_obedient, &police),
            Err(Error::InsufficientSample(_))
        ));
    }
}
