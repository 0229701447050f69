//! One communication round: roles, messages, channel, rebel decisions and
//! police arrests.

use crate::analysis::estimate::{PoliceArrests, RebelEntry, TrialRecord};
use crate::channel::{Channel, Message, Mode};
use crate::error::Result;
use crate::graph::{DegreeStats, Network};
use crate::police_protocols::PoliceKind;
use crate::population::{Role, RoleSampler};
use crate::rebel_protocols::{RebelOutput, RebelProtocol};
use crate::rng::{derive, Stream};
use crate::undercover_attacks::{undercover_message, AttackStrategy};

/// Everything a round needs besides the seed and trial index.
#[derive(Debug, Clone)]
pub struct RoundSetup {
    pub net: Network,
    pub stats: DegreeStats,
    pub mode: Mode,
    pub protocol: RebelProtocol,
    pub police: Vec<PoliceKind>,
    pub sampler: RoleSampler,
    pub attack: AttackStrategy,
    pub channel: Channel,
}

impl RoundSetup {
    pub fn new(net: Network, mode: Mode, protocol: RebelProtocol, sampler: RoleSampler) -> Self {
        let stats = net.degree_stats();
        RoundSetup {
            net,
            stats,
            mode,
            protocol,
            police: Vec::new(),
            sampler,
            attack: AttackStrategy::HugePositive,
            channel: Channel::unit(),
        }
    }

    pub fn with_police(mut self, police: Vec<PoliceKind>) -> Self {
        self.police = police;
        self
    }

    pub fn with_attack(mut self, attack: AttackStrategy) -> Self {
        self.attack = attack;
        self
    }

    pub fn with_sampler(mut self, sampler: RoleSampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.sampler.params.validate()?;
        for p in &self.police {
            p.validate(&self.protocol)?;
        }
        Ok(())
    }

    pub fn median_degree(&self) -> usize {
        self.stats.median_degree
    }
}

/// Plays trial `trial` of the experiment keyed by `seed`.
pub fn play_round(setup: &RoundSetup, seed: u64, trial: u64) -> Result<TrialRecord> {
    let net = &setup.net;
    let n = net.n();
    let median = setup.median_degree();
    let roles = setup.sampler.sample(n, &mut derive(seed, trial, Stream::Roles))?.into_roles();

    let mut coins = derive(seed, trial, Stream::ProtocolCoins);
    let mut huge_emitters = 0;
    let messages: Vec<Message> = roles
        .iter()
        .map(|role| match role {
            Role::Rebel => {
                let m = setup.protocol.message(&mut coins);
                huge_emitters += m.is_huge() as usize;
                m
            }
            Role::Obedient => Message::ZERO,
            Role::Undercover => undercover_message(setup.attack),
        })
        .collect();

    let mut receiver_rng = derive(seed, trial, Stream::ReceiverNoise);
    let transcript = if setup.police.is_empty() {
        setup.channel.emit_unobserved(setup.mode, &messages, net, &mut receiver_rng)?
    } else {
        let mut police_rng = derive(seed, trial, Stream::PoliceNoise);
        setup
            .channel
            .emit(setup.mode, &messages, net, &mut receiver_rng, &mut police_rng)?
    };

    let mut rebels = Vec::new();
    for (j, role) in roles.iter().enumerate() {
        if *role != Role::Rebel {
            continue;
        }
        let deg = net.degree(j);
        let signals = transcript.received(j);
        let output = if signals.is_empty() {
            RebelOutput::Silent
        } else {
            setup.protocol.decide(signals, deg, median)?
        };
        rebels.push(RebelEntry {
            agent: j as u32,
            gated: deg >= median,
            output,
        });
    }

    let mut arrests = Vec::with_capacity(setup.police.len());
    for police in &setup.police {
        let mut arrested = vec![false; n];
        for (i, flag) in arrested.iter_mut().enumerate() {
            let view = transcript.police_view(i);
            if roles[i] == Role::Undercover || view.is_empty() {
                continue;
            }
            *flag = police.decide(view, net.degree(i), median, &setup.protocol)?.arrested;
        }
        arrests.push(PoliceArrests {
            police: *police,
            arrested,
        });
    }

    Ok(TrialRecord {
        trial,
        rho: setup.sampler.effective_rho(n),
        roles,
        rebels,
        arrests,
        huge_emitters,
    })
}

/// Plays trials `0..trials` and returns them in trial order. `threads`
/// bounds the worker count when the `parallel` feature is on; the records
/// do not depend on it.
pub fn run_trials(setup: &RoundSetup, seed: u64, trials: u64, threads: Option<usize>) -> Result<Vec<TrialRecord>> {
    setup.validate()?;
    run_indices(setup, seed, 0..trials, threads)
}

#[cfg(feature = "parallel")]
fn run_indices(
    setup: &RoundSetup,
    seed: u64,
    indices: std::ops::Range<u64>,
    threads: Option<usize>,
) -> Result<Vec<TrialRecord>> {
    use rayon::prelude::*;
    let work = || {
        indices
            .clone()
            .into_par_iter()
            .map(|t| play_round(setup, seed, t))
            .collect::<Result<Vec<_>>>()
    };
    match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| crate::Error::InvalidConfiguration(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_indices(
    setup: &RoundSetup,
    seed: u64,
    indices: std::ops::Range<u64>,
    _threads: Option<usize>,
) -> Result<Vec<TrialRecord>> {
    indices.map(|t| play_round(setup, seed, t)).collect()
}
