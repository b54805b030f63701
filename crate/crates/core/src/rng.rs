//! Deterministic per-trial randomness.
//!
//! Every trial gets its own ChaCha8 key built from `(seed, trial)`. Each
//! consumer (message choice, index sequence, error flags, adversary) reads
//! from its own ChaCha stream under that key, so lazily extending one
//! stream never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DOMAIN_TRIAL: u8 = 0;
const DOMAIN_CODEBOOK: u8 = 1;

/// Independent sub-streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Message = 0,
    Index = 1,
    Errors = 2,
    Adversary = 3,
}

/// Random-stream handle for a single `(seed, trial)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRng {
    key: [u8; 32],
}

impl TrialRng {
    pub fn stream(&self, which: Stream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(which as u64);
        rng
    }
}

fn key(seed: u64, trial: u64, domain: u8) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16] = domain;
    key
}

pub fn derive_trial_rng(seed: u64, trial: u64) -> TrialRng {
    TrialRng {
        key: key(seed, trial, DOMAIN_TRIAL),
    }
}

/// Stream used for codebook construction; disjoint from every trial stream.
pub fn codebook_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(key(seed, 0, DOMAIN_CODEBOOK))
}
