//! Monte Carlo rebel decisions against their exact oracles on small networks.

use covert_core::analysis::estimate::designated_rebel_rate;
use covert_core::analysis::oracle::{median_high_probability, median_many_probability, qs_many_probability};
use covert_core::channel::Mode;
use covert_core::graph::build_random_regular;
use covert_core::population::{PopulationParams, RoleSampler};
use covert_core::rebel_protocols::{MedianParams, QuorumSensingParams, RebelProtocol};
use covert_core::round::{run_trials, RoundSetup};
use covert_core::undercover_attacks::AttackStrategy;

const N: usize = 400;
const DEGREE: usize = 40;
const TRIALS: u64 = 1500;

fn designated_rate(mode: Mode, protocol: RebelProtocol, rho: f64, seed: u64) -> covert_core::analysis::estimate::Estimate {
    attacked_designated_rate(mode, protocol, rho, 0.0, seed)
}

fn attacked_designated_rate(
    mode: Mode,
    protocol: RebelProtocol,
    rho: f64,
    undercover_prob: f64,
    seed: u64,
) -> covert_core::analysis::estimate::Estimate {
    let net = build_random_regular(N, DEGREE, seed).unwrap();
    let sampler = RoleSampler::independent(PopulationParams::new(rho, undercover_prob).unwrap());
    let setup = RoundSetup::new(net, mode, protocol, sampler).with_attack(AttackStrategy::HugePositive);
    let trials = run_trials(&setup, seed, TRIALS, None).unwrap();
    designated_rebel_rate(&trials).unwrap()
}

#[test]
fn quorum_sensing_matches_binomial_mixture_oracle() {
    let eps = 0.3;
    for (mode, rho) in [(Mode::Public, 0.8), (Mode::Public, 0.2), (Mode::Private, 0.8), (Mode::Private, 0.2)] {
        let protocol = RebelProtocol::QuorumSensing(QuorumSensingParams::new(eps).unwrap());
        let est = designated_rate(mode, protocol, rho, 31);
        let oracle = qs_many_probability(DEGREE, rho, eps);
        assert!(est.contains(oracle), "{mode} rho={rho}: oracle {oracle}, measured {est:?}");
    }
}

#[test]
fn median_matches_binomial_oracle() {
    let eps = 0.1;
    let params = MedianParams::new(eps).unwrap();
    for rho in [0.8, 0.2] {
        let est = designated_rate(Mode::Private, RebelProtocol::Median(params), rho, 47);
        let oracle = median_many_probability(DEGREE, median_high_probability(rho, eps, 0.0), params.threshold_fraction(), 0, 0);
        assert!(est.contains(oracle), "rho={rho}: oracle {oracle}, measured {est:?}");
    }
}

#[test]
fn median_with_huge_undercover_matches_shifted_oracle() {
    let eps = 0.1;
    let params = MedianParams::new(eps).unwrap();
    for u in [0.001, 0.01] {
        for rho in [0.8, 0.2] {
            let est = attacked_designated_rate(Mode::Private, RebelProtocol::Median(params), rho, u, 53);
            let p_high = median_high_probability(rho, eps, u);
            let oracle = median_many_probability(DEGREE, p_high, params.threshold_fraction(), 0, 0);
            assert!(est.contains(oracle), "u={u} rho={rho}: oracle {oracle}, measured {est:?}");
        }
    }
}
