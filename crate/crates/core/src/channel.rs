//! Gaussian noise channel under public and private emission.
//!
//! Every transmitted message reaches its receiver as `m + N(0, 1)`, and the
//! police sees its own independently noised copy. In public mode an agent
//! announces once, so the police holds one signal per agent; in private mode
//! the agent sends one copy per neighbour and the police taps every copy.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AgentId, Network};

/// Finite stand-in for an unbounded message.
pub const HUGE_VALUE: f64 = 1e6;
/// Signals at or above this value are read as carrying a huge message.
pub const HUGE_THRESHOLD: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Message(pub f64);

impl Message {
    pub const ZERO: Message = Message(0.0);
    pub const HUGE: Message = Message(HUGE_VALUE);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_huge(self) -> bool {
        self.0 >= HUGE_THRESHOLD
    }
}

pub fn is_huge_signal(signal: f64) -> bool {
    signal >= HUGE_THRESHOLD
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Public,
    Private,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Public => "public",
            Mode::Private => "private",
        })
    }
}

/// Noise level of the channel. Only unit variance is available outside of
/// debug builds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    std_dev: f64,
}

impl Default for Channel {
    fn default() -> Self {
        Channel { std_dev: 1.0 }
    }
}

impl Channel {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Test hook for a channel with a different noise variance.
    pub fn with_variance(variance: f64) -> Result<Self> {
        if variance == 1.0 {
            return Ok(Self::unit());
        }
        if !cfg!(debug_assertions) {
            return Err(Error::InvalidConfiguration(
                "noise variance overrides are test-only".into(),
            ));
        }
        if !(variance >= 0.0) {
            return Err(Error::param(format!("noise variance {variance} must be >= 0")));
        }
        Ok(Channel {
            std_dev: variance.sqrt(),
        })
    }

    fn noise<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        z * self.std_dev
    }

    pub fn emit<R1, R2>(
        &self,
        mode: Mode,
        messages: &[Message],
        net: &Network,
        receiver_rng: &mut R1,
        police_rng: &mut R2,
    ) -> Result<Transcript>
    where
        R1: Rng + ?Sized,
        R2: Rng + ?Sized,
    {
        self.emit_inner(mode, messages, net, receiver_rng, Some(police_rng))
    }

    /// Like [`Channel::emit`] but without a police tap; every police view is
    /// empty. The receivers' signals are identical to those of `emit` for the
    /// same receiver stream.
    pub fn emit_unobserved<R1>(
        &self,
        mode: Mode,
        messages: &[Message],
        net: &Network,
        receiver_rng: &mut R1,
    ) -> Result<Transcript>
    where
        R1: Rng + ?Sized,
    {
        self.emit_inner::<R1, R1>(mode, messages, net, receiver_rng, None)
    }

    fn emit_inner<R1, R2>(
        &self,
        mode: Mode,
        messages: &[Message],
        net: &Network,
        receiver_rng: &mut R1,
        police_rng: Option<&mut R2>,
    ) -> Result<Transcript>
    where
        R1: Rng + ?Sized,
        R2: Rng + ?Sized,
    {
        if messages.len() != net.n() {
            return Err(Error::input(format!(
                "{} messages for {} agents",
                messages.len(),
                net.n()
            )));
        }
        let mut received = Vec::with_capacity(net.slot_count());
        for j in 0..net.n() {
            for &i in net.neighbors(j) {
                received.push(messages[i as usize].0 + self.noise(receiver_rng));
            }
        }
        let (police_view, police_offsets) = match (police_rng, mode) {
            (None, _) => (Vec::new(), vec![0; net.n() + 1]),
            (Some(rng), Mode::Public) => {
                let view = messages.iter().map(|m| m.0 + self.noise(rng)).collect();
                (view, (0..=net.n()).collect())
            }
            (Some(rng), Mode::Private) => {
                let mut view = Vec::with_capacity(net.slot_count());
                for (i, m) in messages.iter().enumerate() {
                    for _ in 0..net.degree(i) {
                        view.push(m.0 + self.noise(rng));
                    }
                }
                (view, net.offsets().to_vec())
            }
        };
        Ok(Transcript {
            mode,
            received,
            receiver_offsets: net.offsets().to_vec(),
            police_view,
            police_offsets,
        })
    }
}

/// All signals of one communication round.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    mode: Mode,
    received: Vec<f64>,
    receiver_offsets: Vec<usize>,
    police_view: Vec<f64>,
    police_offsets: Vec<usize>,
}

impl Transcript {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Signals received by agent `j`, aligned with `net.neighbors(j)`.
    pub fn received(&self, j: usize) -> &[f64] {
        &self.received[self.receiver_offsets[j]..self.receiver_offsets[j + 1]]
    }

    /// `(sender, signal)` pairs received by agent `j`.
    pub fn received_from<'a>(
        &'a self,
        net: &'a Network,
        j: usize,
    ) -> impl Iterator<Item = (AgentId, f64)> + 'a {
        net.neighbors(j).iter().copied().zip(self.received(j).iter().copied())
    }

    /// The police's noised copies of the messages sent by agent `i`:
    /// one entry in public mode, one per neighbour in private mode.
    pub fn police_view(&self, i: usize) -> &[f64] {
        &self.police_view[self.police_offsets[i]..self.police_offsets[i + 1]]
    }

    pub fn agent_count(&self) -> usize {
        self.receiver_offsets.len() - 1
    }
}

pub fn emit_public<R1, R2>(
    messages: &[Message],
    net: &Network,
    receiver_rng: &mut R1,
    police_rng: &mut R2,
) -> Result<Transcript>
where
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
{
    Channel::unit().emit(Mode::Public, messages, net, receiver_rng, police_rng)
}

pub fn emit_private_uniform<R1, R2>(
    messages: &[Message],
    net: &Network,
    receiver_rng: &mut R1,
    police_rng: &mut R2,
) -> Result<Transcript>
where
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
{
    Channel::unit().emit(Mode::Private, messages, net, receiver_rng, police_rng)
}
