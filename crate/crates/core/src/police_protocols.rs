//! Arrest strategies of the surveilling police.
//!
//! The police decides on each agent from the noised copies of the messages
//! that agent sent. No concrete strategy can beat the total variation
//! distance between the two signal laws, so [`analytic_message_risk`] is the
//! worst case over all polices; the strategies here are used to measure how
//! close concrete tests come to it.

use serde::{Deserialize, Serialize};

use crate::analysis::tv_gauss;
use crate::channel::Mode;
use crate::error::{Error, Result};
use crate::rebel_protocols::RebelProtocol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrestDecision {
    pub arrested: bool,
}

impl ArrestDecision {
    pub const RELEASE: ArrestDecision = ArrestDecision { arrested: false };
    pub const ARREST: ArrestDecision = ArrestDecision { arrested: true };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PoliceKind {
    /// Runs the rebels' own decision rule on an agent's outgoing signals.
    Reverse(RebelProtocol),
    /// Likelihood-ratio test between the obedient and rebel signal laws.
    NpThreshold,
    NoArrest,
}

impl PoliceKind {
    pub fn label(&self) -> &'static str {
        match self {
            PoliceKind::Reverse(_) => "reverse",
            PoliceKind::NpThreshold => "np_threshold",
            PoliceKind::NoArrest => "no_arrest",
        }
    }

    /// A reverse police must simulate exactly the protocol the rebels run.
    pub fn validate(&self, protocol: &RebelProtocol) -> Result<()> {
        match self {
            PoliceKind::Reverse(decider) if decider != protocol => Err(Error::InvalidConfiguration(format!(
                "reverse police simulates {} but rebels run {}",
                decider.name(),
                protocol.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn decide(
        &self,
        view: &[f64],
        deg_u: usize,
        median_deg: usize,
        protocol: &RebelProtocol,
    ) -> Result<ArrestDecision> {
        match self {
            PoliceKind::Reverse(decider) => reverse_police(view, deg_u, median_deg, decider),
            PoliceKind::NpThreshold => match protocol.rebel_level() {
                Some(level) => np_threshold_police(view, level),
                // rebels and obedient citizens send the same thing
                None => Ok(no_arrest()),
            },
            PoliceKind::NoArrest => Ok(no_arrest()),
        }
    }
}

/// Arrests `u` iff the rebel rule, fed `u`'s outgoing police-view signals as
/// if they were incoming, outputs "many". The degree gate uses `deg_u`, not
/// the length of the view (which is 1 in public mode).
pub fn reverse_police(
    police_view_u: &[f64],
    deg_u: usize,
    median_deg: usize,
    decider: &RebelProtocol,
) -> Result<ArrestDecision> {
    let output = decider.decide(police_view_u, deg_u, median_deg)?;
    Ok(ArrestDecision {
        arrested: output.is_many(),
    })
}

/// Likelihood-ratio test of `N(0,1)^k` against `N(level,1)^k`, which reduces
/// to comparing the sample mean with `level / 2`.
pub fn np_threshold_police(police_view_u: &[f64], level: f64) -> Result<ArrestDecision> {
    if police_view_u.is_empty() {
        return Err(Error::input("threshold police needs at least one signal"));
    }
    if !(level > 0.0) {
        return Err(Error::param(format!("signal level {level} must be positive")));
    }
    let mean = police_view_u.iter().sum::<f64>() / police_view_u.len() as f64;
    Ok(ArrestDecision {
        arrested: mean >= level / 2.0,
    })
}

pub fn no_arrest() -> ArrestDecision {
    ArrestDecision::RELEASE
}

/// Exact optimal relative message-risk against `copies` observed signals:
/// `2 Phi(eps sqrt(copies) / 2) - 1`.
pub fn analytic_message_risk(epsilon: f64, copies: usize) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::param(format!("epsilon = {epsilon} must be positive")));
    }
    if copies == 0 {
        return Err(Error::param("need at least one observed copy"));
    }
    Ok(tv_gauss(epsilon, copies))
}

/// Worst-case message-risk of a protocol, averaged over agents.
///
/// In public mode every agent is observed once. In private mode an agent of
/// degree `d` is observed `d` times; agents without neighbours send nothing
/// and carry no risk. A self-immolating rebel is identified exactly when it
/// sends the huge message, so its risk is `q` in either mode.
pub fn protocol_message_risk(protocol: &RebelProtocol, mode: Mode, degrees: &[usize]) -> f64 {
    match protocol {
        RebelProtocol::QuorumSensing(_) | RebelProtocol::Median(_) => {
            let eps = protocol.epsilon().expect("epsilon protocols");
            match mode {
                Mode::Public => tv_gauss(eps, 1),
                Mode::Private => {
                    if degrees.is_empty() {
                        return 0.0;
                    }
                    let total: f64 = degrees
                        .iter()
                        .map(|&d| if d == 0 { 0.0 } else { tv_gauss(eps, d) })
                        .sum();
                    total / degrees.len() as f64
                }
            }
        }
        RebelProtocol::SelfImmolation(p) => p.q,
        RebelProtocol::Baseline(_) => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rebel_protocols::{BaselineDecider, MedianParams, QuorumSensingParams};
    use approx::assert_abs_diff_eq;

    fn qs(eps: f64) -> RebelProtocol {
        RebelProtocol::QuorumSensing(QuorumSensingParams::new(eps).unwrap())
    }

    #[test]
    fn reverse_police_releases_quiet_agents() {
        let view = vec![-1.0; 50];
        assert!(!reverse_police(&view, 50, 50, &qs(0.2)).unwrap().arrested);
        let loud = vec![1.0; 50];
        assert!(reverse_police(&loud, 50, 50, &qs(0.2)).unwrap().arrested);
        // degree gate comes from deg_u
        assert!(!reverse_police(&loud, 49, 50, &qs(0.2)).unwrap().arrested);
        // public mode: a single signal stands for the whole mean
        assert!(reverse_police(&[0.3], 50, 50, &qs(0.2)).unwrap().arrested);
    }

    #[test]
    fn reverse_police_must_match_protocol() {
        let police = PoliceKind::Reverse(qs(0.2));
        assert!(police.validate(&qs(0.2)).is_ok());
        let err = police.validate(&RebelProtocol::Median(MedianParams::new(0.2).unwrap()));
        assert!(matches!(err, Err(Error::InvalidConfiguration(_))));
        assert!(PoliceKind::NpThreshold.validate(&qs(0.1)).is_ok());
    }

    #[test]
    fn threshold_police() {
        assert!(!np_threshold_police(&[0.0], 0.2).unwrap().arrested);
        assert!(np_threshold_police(&[0.1], 0.2).unwrap().arrested);
        assert!(matches!(np_threshold_police(&[], 0.2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn analytic_risk_values() {
        // 2 Phi(0.1) - 1, 2 Phi(5) - 1 and 2 Phi(2) - 1 from mpmath
        assert_abs_diff_eq!(analytic_message_risk(0.2, 1).unwrap(), 0.079_655_674_554_058, epsilon = 1e-12);
        assert!(analytic_message_risk(0.2, 1).unwrap() <= 0.2 / 2f64.sqrt());
        assert_abs_diff_eq!(analytic_message_risk(0.1, 10_000).unwrap(), 0.999_999_426_696_856, epsilon = 1e-12);
        assert_abs_diff_eq!(analytic_message_risk(0.2, 400).unwrap(), 0.954_499_736_103_642, epsilon = 1e-12);
        assert!(analytic_message_risk(1e-9, 1).unwrap() < 1e-9);
        assert!(analytic_message_risk(0.0, 1).is_err());
        assert!(analytic_message_risk(0.1, 0).is_err());
    }

    #[test]
    fn pinsker_consistency_on_grid() {
        for i in 1..=100 {
            let eps = i as f64 / 100.0;
            assert!(analytic_message_risk(eps, 1).unwrap() <= eps / 2f64.sqrt());
        }
    }

    #[test]
    fn no_arrest_never_arrests() {
        let p = qs(0.2);
        for view in [vec![100.0], vec![-3.0, 7.0]] {
            assert!(!PoliceKind::NoArrest.decide(&view, 2, 1, &p).unwrap().arrested);
        }
    }

    #[test]
    fn baseline_protocols_are_invisible() {
        let p = RebelProtocol::Baseline(BaselineDecider::AlwaysMany);
        assert!(!PoliceKind::NpThreshold.decide(&[5.0], 1, 1, &p).unwrap().arrested);
        assert_eq!(protocol_message_risk(&p, Mode::Private, &[3, 3]), 0.0);
    }

    #[test]
    fn protocol_risk_by_mode() {
        let p = qs(0.2);
        assert_abs_diff_eq!(protocol_message_risk(&p, Mode::Public, &[400; 3]), tv_gauss(0.2, 1));
        assert_abs_diff_eq!(protocol_message_risk(&p, Mode::Private, &[400; 3]), tv_gauss(0.2, 400));
        let mixed = protocol_message_risk(&p, Mode::Private, &[0, 400]);
        assert_abs_diff_eq!(mixed, tv_gauss(0.2, 400) / 2.0);
    }
}
