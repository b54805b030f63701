//! Read sampling, sequencing errors, and the adversaries that decide what
//! an erroneous read shows the decoder.

mod registry;
mod streams;

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::SPartition;
use crate::codebook::{restriction, Codebook, IndexSet};
use crate::decoder::{stopping_time_no_errors, NoErrorStop};
use crate::types::Molecule;

pub use registry::{
    Activity, Adversary, AdversaryRegistry, ErrorFiller, Honest, Strong, TrialContext, Uniform, UniformIndex, Weak,
};
pub use streams::ReadStreams;

/// Index class hit by each read, `entries[j - 1] = f(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSequence {
    pub entries: Vec<usize>,
}

/// Sequencing-error indicator per read, `flags[j - 1]` for read `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorFlags {
    pub flags: Vec<bool>,
}

pub fn sample_index_sequence<R: Rng + ?Sized>(m: usize, horizon: usize, rng: &mut R) -> IndexSequence {
    IndexSequence {
        entries: (0..horizon).map(|_| draw_index(m, rng)).collect(),
    }
}

pub fn sample_error_flags<R: Rng + ?Sized>(p: f64, horizon: usize, rng: &mut R) -> ErrorFlags {
    ErrorFlags {
        flags: (0..horizon).map(|_| draw_flag(p, rng)).collect(),
    }
}

pub(crate) fn draw_index<R: Rng + ?Sized>(m: usize, rng: &mut R) -> usize {
    rng.gen_range(0..m)
}

pub(crate) fn draw_flag<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    rng.gen_bool(p)
}

/// An error that still returns the molecule that was sampled.
pub fn observe_honest(sampled: Molecule) -> Molecule {
    sampled
}

/// Uniform over all `M * V` molecules, the sampled one included.
pub fn observe_uniform<R: Rng + ?Sized>(_sampled: Molecule, m: usize, v: usize, rng: &mut R) -> Molecule {
    Molecule::new(rng.gen_range(0..m), rng.gen_range(0..v))
}

/// Keeps the index and draws the payload uniformly from `[0, V)`.
pub fn observe_uniform_index<R: Rng + ?Sized>(sampled: Molecule, v: usize, rng: &mut R) -> Molecule {
    Molecule::new(sampled.index, rng.gen_range(0..v))
}

/// Error-free decoding outcome of every message along one index sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoErrorOutcomes {
    /// `stops[m]`: stop of message `m` within the horizon, if any.
    pub stops: Vec<Option<NoErrorStop>>,
    /// Messages that stop within the horizon and decode to themselves.
    pub u1: BTreeSet<usize>,
    /// Messages that stop within the horizon on some other message.
    pub u2: BTreeSet<usize>,
}

impl NoErrorOutcomes {
    pub fn compute(cb: &Codebook, f: &[usize], h_m: usize) -> Self {
        let stops: Vec<_> = (0..cb.len())
            .map(|m| stopping_time_no_errors(cb, m, f, h_m))
            .collect();
        let (mut u1, mut u2) = (BTreeSet::new(), BTreeSet::new());
        for (m, stop) in stops.iter().enumerate() {
            match stop {
                Some(s) if s.decoded == m => {
                    u1.insert(m);
                }
                Some(_) => {
                    u2.insert(m);
                }
                None => {}
            }
        }
        Self { stops, u1, u2 }
    }
}

/// Strong adversary: sees the decoder, the whole index sequence and every
/// future error flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongAdversaryPlan {
    pub active: bool,
    /// Smallest message in `u1`, other than the true one, agreeing with it
    /// on every index read at a `t2` time.
    pub m_prime: Option<usize>,
    pub t1: BTreeSet<usize>,
    pub t2: BTreeSet<usize>,
    pub psi: bool,
    pub outcomes: NoErrorOutcomes,
}

impl StrongAdversaryPlan {
    pub fn t_m(&self, m: usize) -> Option<NoErrorStop> {
        self.outcomes.stops[m]
    }
}

/// Prepares the strong adversary for true message `m`. It becomes active
/// only when every `t1` read is erroneous, a confusable `m'` exists in
/// `u1`, and `psi` holds.
pub fn strong_prepare(
    cb: &Codebook,
    m: usize,
    f: &IndexSequence,
    flags: &ErrorFlags,
    h_m: usize,
    part: &SPartition,
    psi: bool,
) -> StrongAdversaryPlan {
    let outcomes = NoErrorOutcomes::compute(cb, &f.entries, h_m);
    let errors_cover_t1 = part.in_s && part.t1.iter().all(|&j| flags.flags[j - 1]);
    let t2_indices = part.t2_indices(&f.entries);
    let word = cb.word(m);
    let m_prime = outcomes.u1.iter().copied().find(|&other| {
        other != m && {
            let w = cb.word(other);
            t2_indices.iter().all(|&i| w.payloads[i] == word.payloads[i])
        }
    });
    StrongAdversaryPlan {
        active: errors_cover_t1 && m_prime.is_some() && psi,
        m_prime,
        t1: part.t1.clone(),
        t2: part.t2.clone(),
        psi,
        outcomes,
    }
}

pub fn observe_strong(plan: &StrongAdversaryPlan, cb: &Codebook, time: usize, sampled: Molecule, error: bool) -> Molecule {
    match plan.m_prime {
        Some(target) if plan.active && error && plan.t1.contains(&time) => cb.word(target).molecule(sampled.index),
        _ => sampled,
    }
}

/// Weak adversary: knows the codebook and the true message, nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakAdversaryPlan {
    pub index_set: IndexSet,
    pub m_prime: Option<usize>,
    pub psi: bool,
}

impl WeakAdversaryPlan {
    pub fn active(&self) -> bool {
        self.psi && self.m_prime.is_some()
    }
}

/// Picks a uniform `r_prime_m`-subset of indices, a uniform `m'` among the
/// other messages matching `m` on it, and `psi ~ Bernoulli(p)`.
pub fn weak_prepare<R: Rng + ?Sized>(cb: &Codebook, m: usize, r_prime_m: usize, p: f64, rng: &mut R) -> WeakAdversaryPlan {
    let index_set = IndexSet::new(cb.m(), rand::seq::index::sample(rng, cb.m(), r_prime_m))
        .expect("sampled indices are in range");
    let target = restriction(cb.word(m), &index_set).expect("index set in range");
    let matching: Vec<usize> = (0..cb.len())
        .filter(|&other| other != m && restriction(cb.word(other), &index_set).expect("in range") == target)
        .collect();
    let m_prime = (!matching.is_empty()).then(|| matching[rng.gen_range(0..matching.len())]);
    let psi = rng.gen_bool(p);
    WeakAdversaryPlan { index_set, m_prime, psi }
}

pub fn observe_weak(plan: &WeakAdversaryPlan, cb: &Codebook, sampled: Molecule, error: bool) -> Molecule {
    match plan.m_prime {
        Some(target) if plan.psi && error => cb.word(target).molecule(sampled.index),
        _ => sampled,
    }
}

/// The sufficient conditions under which a weak-adversary trial must end
/// in a wrong decision within `h_m` reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakConditions {
    /// `m'` is set and its error-free run stops on itself within `h_m`.
    pub m_prime_in_u1: bool,
    /// With `t1` the reads up to `h_m` whose index lies outside the index
    /// set: `|t1| <= flip_budget`, so the remaining reads only touch the set.
    pub t1_within_budget: bool,
    pub errors_cover_t1: bool,
    pub psi: bool,
}

impl WeakConditions {
    pub fn all(&self) -> bool {
        self.m_prime_in_u1 && self.t1_within_budget && self.errors_cover_t1 && self.psi
    }
}

/// Post-hoc check of the weak-adversary error conditions for a realized
/// index sequence and error pattern.
pub fn weak_conditions(
    plan: &WeakAdversaryPlan,
    cb: &Codebook,
    f: &IndexSequence,
    flags: &ErrorFlags,
    h_m: usize,
    flip_budget: usize,
) -> WeakConditions {
    let m_prime_in_u1 = plan.m_prime.is_some_and(|mp| {
        stopping_time_no_errors(cb, mp, &f.entries, h_m).is_some_and(|s| s.decoded == mp)
    });
    let t1: Vec<usize> = (1..=h_m)
        .filter(|&j| !plan.index_set.contains(f.entries[j - 1]))
        .collect();
    WeakConditions {
        m_prime_in_u1,
        t1_within_budget: t1.len() <= flip_budget,
        errors_cover_t1: t1.iter().all(|&j| flags.flags[j - 1]),
        psi: plan.psi,
    }
}
