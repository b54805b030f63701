use rand_chacha::ChaCha8Rng;

use super::{draw_flag, draw_index, ErrorFlags, IndexSequence};
use crate::rng::{Stream, TrialRng};

/// Lazily materialized index sequence and error flags of one trial.
///
/// Entries are drawn on demand from dedicated streams, so peeking ahead
/// (as the strong adversary does) yields exactly the values the reads will
/// later consume.
#[derive(Debug, Clone)]
pub struct ReadStreams {
    m: usize,
    p: f64,
    index_rng: ChaCha8Rng,
    error_rng: ChaCha8Rng,
    indices: Vec<usize>,
    flags: Vec<bool>,
}

impl ReadStreams {
    pub fn new(m: usize, p: f64, index_rng: ChaCha8Rng, error_rng: ChaCha8Rng) -> Self {
        Self {
            m,
            p,
            index_rng,
            error_rng,
            indices: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn from_trial(rng: &TrialRng, m: usize, p: f64) -> Self {
        Self::new(m, p, rng.stream(Stream::Index), rng.stream(Stream::Errors))
    }

    pub fn ensure(&mut self, len: usize) {
        while self.indices.len() < len {
            self.indices.push(draw_index(self.m, &mut self.index_rng));
            self.flags.push(draw_flag(self.p, &mut self.error_rng));
        }
    }

    /// Index and error flag of read `time` (1-based).
    pub fn read(&mut self, time: usize) -> (usize, bool) {
        self.ensure(time);
        (self.indices[time - 1], self.flags[time - 1])
    }

    pub fn prefix(&mut self, len: usize) -> (IndexSequence, ErrorFlags) {
        self.ensure(len);
        (
            IndexSequence {
                entries: self.indices[..len].to_vec(),
            },
            ErrorFlags {
                flags: self.flags[..len].to_vec(),
            },
        )
    }

    /// Everything drawn so far.
    pub fn drawn(&self) -> (&[usize], &[bool]) {
        (&self.indices, &self.flags)
    }
}
