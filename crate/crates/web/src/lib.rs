//! Browser bindings for the interactive demo page.
//!
//! Every export returns a JSON string so the page can stay framework-free.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use covert_core::analysis::divergence::{pinsker_bound, tv_gauss};
use covert_core::analysis::estimate::TrialRecord;
use covert_core::analysis::oracle::qs_many_probability;
use covert_core::channel::Mode;
use covert_core::graph::build_random_regular;
use covert_core::police_protocols::PoliceKind;
use covert_core::population::{PopulationParams, Role, RoleSampler};
use covert_core::rebel_protocols::{MedianParams, QuorumSensingParams, RebelProtocol};
use covert_core::round::{play_round, RoundSetup};

const MAX_AGENTS: usize = 5000;
const MAX_STEPS: usize = 2000;

#[derive(Serialize)]
struct RiskPoint {
    epsilon: f64,
    output_risk: f64,
    public_message_risk: f64,
    private_message_risk: f64,
    public_total: f64,
    private_total: f64,
    success_per_rebel: f64,
}

/// Exact Quorum-Sensing risk curves for a regular network of degree `degree`.
#[wasm_bindgen]
pub fn risk_curves(degree: usize, eps_min: f64, eps_max: f64, steps: usize) -> Result<String, String> {
    if degree == 0 {
        return Err("degree must be positive".into());
    }
    let grid = grid(eps_min, eps_max, steps)?;
    let points: Vec<RiskPoint> = grid
        .into_iter()
        .map(|eps| {
            let output_risk = qs_many_probability(degree, 0.2, eps);
            let public = tv_gauss(eps, 1);
            let private = tv_gauss(eps, degree);
            RiskPoint {
                epsilon: eps,
                output_risk,
                public_message_risk: public,
                private_message_risk: private,
                public_total: output_risk + public,
                private_total: output_risk + private,
                success_per_rebel: qs_many_probability(degree, 0.8, eps),
            }
        })
        .collect();
    to_json(&points)
}

#[derive(Serialize)]
struct PinskerPoint {
    epsilon: f64,
    total_variation: f64,
    bound: f64,
}

/// Total variation between `N(0,1)` and `N(eps,1)` next to `eps / sqrt(2)`.
#[wasm_bindgen]
pub fn pinsker_curve(eps_max: f64, steps: usize) -> Result<String, String> {
    let points: Vec<PinskerPoint> = grid(0.0, eps_max, steps)?
        .into_iter()
        .map(|eps| PinskerPoint {
            epsilon: eps,
            total_variation: tv_gauss(eps, 1),
            bound: pinsker_bound(eps),
        })
        .collect();
    to_json(&points)
}

#[derive(Serialize)]
struct RoundSummary {
    n: usize,
    degree: usize,
    rebels: usize,
    undercover: usize,
    rebels_many: usize,
    fraction_many: f64,
    succeeded: bool,
    rebel_arrest_rate: f64,
    obedient_arrest_rate: f64,
    /// Role and output of each agent: "rebel-many", "rebel", "obedient" or "undercover".
    agents: Vec<&'static str>,
    /// Arrest flag of each agent under the threshold police.
    arrested: Vec<bool>,
}

/// Plays one round on a small random regular network.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn simulate_round(
    n: usize,
    degree: usize,
    protocol: &str,
    epsilon: f64,
    rho: f64,
    undercover_prob: f64,
    private_mode: bool,
    seed: u64,
) -> Result<String, String> {
    if n > MAX_AGENTS {
        return Err(format!("at most {MAX_AGENTS} agents in the browser"));
    }
    let net = build_random_regular(n, degree, seed).map_err(|e| e.to_string())?;
    let protocol = match protocol {
        "quorum_sensing" => RebelProtocol::QuorumSensing(QuorumSensingParams::new(epsilon).map_err(|e| e.to_string())?),
        "median" => RebelProtocol::Median(MedianParams::new(epsilon).map_err(|e| e.to_string())?),
        other => return Err(format!("unknown protocol {other:?}")),
    };
    let params = PopulationParams::new(rho, undercover_prob).map_err(|e| e.to_string())?;
    let mode = if private_mode { Mode::Private } else { Mode::Public };
    let setup = RoundSetup::new(net, mode, protocol, RoleSampler::independent(params))
        .with_police(vec![PoliceKind::NpThreshold]);
    let record = play_round(&setup, seed, 0).map_err(|e| e.to_string())?;
    to_json(&summarize(&record, n, degree))
}

fn summarize(record: &TrialRecord, n: usize, degree: usize) -> RoundSummary {
    let arrested = record.arrests[0].arrested.clone();
    let mut agents: Vec<&'static str> = record
        .roles
        .iter()
        .map(|r| match r {
            Role::Rebel => "rebel",
            Role::Obedient => "obedient",
            Role::Undercover => "undercover",
        })
        .collect();
    for e in &record.rebels {
        if e.output.is_many() {
            agents[e.agent as usize] = "rebel-many";
        }
    }
    let rate = |role: Role| {
        let (hits, total) = record
            .roles
            .iter()
            .zip(&arrested)
            .filter(|(r, _)| **r == role)
            .fold((0usize, 0usize), |(h, t), (_, &a)| (h + a as usize, t + 1));
        if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        }
    };
    RoundSummary {
        n,
        degree,
        rebels: record.rebels.len(),
        undercover: record.roles.iter().filter(|r| **r == Role::Undercover).count(),
        rebels_many: record.many_count(),
        fraction_many: record.fraction_many(),
        succeeded: record.succeeded(),
        rebel_arrest_rate: rate(Role::Rebel),
        obedient_arrest_rate: rate(Role::Obedient),
        agents,
        arrested,
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, String> {
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
        return Err(format!("need 0 <= lo < hi, got [{lo}, {hi}]"));
    }
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must lie in 2..={MAX_STEPS}"));
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}
