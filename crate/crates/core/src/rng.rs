//! Seed derivation for reproducible trials.
//!
//! Every trial owns a family of independent ChaCha streams keyed by
//! `(master seed, trial index, purpose)`. Keeping purposes apart means that,
//! for example, adding a police observer never shifts the receiver noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a derived stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Roles = 1,
    ReceiverNoise = 2,
    PoliceNoise = 3,
    ProtocolCoins = 4,
    Topology = 5,
    Experiment = 6,
}

pub fn derive(master: u64, trial: u64, stream: Stream) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&(stream as u64).to_le_bytes());
    key[24..].copy_from_slice(b"covert\0\0");
    ChaCha8Rng::from_seed(key)
}

/// Stream for one-off uses outside trials (graph construction, demos).
pub fn seeded(seed: u64) -> ChaCha8Rng {
    derive(seed, u64::MAX, Stream::Topology)
}

/// Master seed of the `index`-th independent sub-experiment.
pub fn sub_seed(master: u64, index: u64) -> u64 {
    use rand::Rng;
    derive(master, index, Stream::Experiment).random()
}
