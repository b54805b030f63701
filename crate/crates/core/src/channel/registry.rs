use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    observe_strong, observe_uniform, observe_uniform_index, observe_weak, strong_prepare, weak_prepare, ReadStreams,
    StrongAdversaryPlan, WeakAdversaryPlan,
};
use crate::analysis::s_membership;
use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::types::Molecule;

/// What an adversary may know when a trial starts.
#[derive(Debug, Clone, Copy)]
pub struct TrialContext<'a> {
    pub codebook: &'a Codebook,
    pub message: usize,
    pub p: f64,
    /// Read horizon of the converse adversaries.
    pub h_m: usize,
    /// Size of the index set the converse adversaries keep untouched.
    pub r_prime_m: usize,
    /// Most reads the converse adversaries may corrupt.
    pub flip_budget: usize,
}

/// Per-trial state of a prepared adversary.
pub trait ErrorFiller {
    /// Molecule shown to the decoder at read `time`.
    fn observe(&mut self, time: usize, sampled: Molecule, error: bool) -> Molecule;

    fn activity(&self) -> Activity<'_> {
        Activity::Passive
    }
}

pub enum Activity<'p> {
    Passive,
    Strong(&'p StrongAdversaryPlan),
    Weak(&'p WeakAdversaryPlan),
}

/// A named error-filling strategy.
pub trait Adversary: Send + Sync {
    fn name(&self) -> &'static str;

    /// `reads` may be inspected ahead of time; `rng` is the adversary's own
    /// stream for the trial.
    fn prepare<'a>(
        &self,
        ctx: &TrialContext<'a>,
        reads: &mut ReadStreams,
        rng: ChaCha8Rng,
    ) -> Box<dyn ErrorFiller + 'a>;
}

pub struct Honest;

struct HonestFiller;

impl ErrorFiller for HonestFiller {
    fn observe(&mut self, _time: usize, sampled: Molecule, _error: bool) -> Molecule {
        super::observe_honest(sampled)
    }
}

impl Adversary for Honest {
    fn name(&self) -> &'static str {
        "honest"
    }

    fn prepare<'a>(&self, _: &TrialContext<'a>, _: &mut ReadStreams, _: ChaCha8Rng) -> Box<dyn ErrorFiller + 'a> {
        Box::new(HonestFiller)
    }
}

/// Erroneous reads show a uniformly random molecule out of all `M * V`.
pub struct Uniform;

/// Erroneous reads keep their index and get a uniformly random payload.
pub struct UniformIndex;

struct UniformFiller {
    m: usize,
    v: usize,
    keep_index: bool,
    rng: ChaCha8Rng,
}

impl ErrorFiller for UniformFiller {
    fn observe(&mut self, _time: usize, sampled: Molecule, error: bool) -> Molecule {
        match (error, self.keep_index) {
            (false, _) => sampled,
            (true, false) => observe_uniform(sampled, self.m, self.v, &mut self.rng),
            (true, true) => observe_uniform_index(sampled, self.v, &mut self.rng),
        }
    }
}

fn uniform_filler<'a>(ctx: &TrialContext<'a>, rng: ChaCha8Rng, keep_index: bool) -> Box<dyn ErrorFiller + 'a> {
    Box::new(UniformFiller {
        m: ctx.codebook.m(),
        v: ctx.codebook.params.v,
        keep_index,
        rng,
    })
}

impl Adversary for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn prepare<'a>(&self, ctx: &TrialContext<'a>, _: &mut ReadStreams, rng: ChaCha8Rng) -> Box<dyn ErrorFiller + 'a> {
        uniform_filler(ctx, rng, false)
    }
}

impl Adversary for UniformIndex {
    fn name(&self) -> &'static str {
        "uniform-index"
    }

    fn prepare<'a>(&self, ctx: &TrialContext<'a>, _: &mut ReadStreams, rng: ChaCha8Rng) -> Box<dyn ErrorFiller + 'a> {
        uniform_filler(ctx, rng, true)
    }
}

pub struct Strong;

struct StrongFiller<'a> {
    plan: StrongAdversaryPlan,
    cb: &'a Codebook,
}

impl ErrorFiller for StrongFiller<'_> {
    fn observe(&mut self, time: usize, sampled: Molecule, error: bool) -> Molecule {
        observe_strong(&self.plan, self.cb, time, sampled, error)
    }

    fn activity(&self) -> Activity<'_> {
        Activity::Strong(&self.plan)
    }
}

impl Adversary for Strong {
    fn name(&self) -> &'static str {
        "strong"
    }

    fn prepare<'a>(
        &self,
        ctx: &TrialContext<'a>,
        reads: &mut ReadStreams,
        mut rng: ChaCha8Rng,
    ) -> Box<dyn ErrorFiller + 'a> {
        let cb = ctx.codebook;
        let (f, flags) = reads.prefix(ctx.h_m);
        let part = s_membership(&f.entries, ctx.h_m, ctx.flip_budget, ctx.r_prime_m);
        let psi = rng.gen_bool(ctx.p);
        let plan = strong_prepare(cb, ctx.message, &f, &flags, ctx.h_m, &part, psi);
        Box::new(StrongFiller { plan, cb })
    }
}

pub struct Weak;

struct WeakFiller<'a> {
    plan: WeakAdversaryPlan,
    cb: &'a Codebook,
}

impl ErrorFiller for WeakFiller<'_> {
    fn observe(&mut self, _time: usize, sampled: Molecule, error: bool) -> Molecule {
        observe_weak(&self.plan, self.cb, sampled, error)
    }

    fn activity(&self) -> Activity<'_> {
        Activity::Weak(&self.plan)
    }
}

impl Adversary for Weak {
    fn name(&self) -> &'static str {
        "weak"
    }

    // causal: never touches `reads`
    fn prepare<'a>(&self, ctx: &TrialContext<'a>, _: &mut ReadStreams, mut rng: ChaCha8Rng) -> Box<dyn ErrorFiller + 'a> {
        let plan = weak_prepare(ctx.codebook, ctx.message, ctx.r_prime_m, ctx.p, &mut rng);
        Box::new(WeakFiller { plan, cb: ctx.codebook })
    }
}

/// Adversaries by name.
pub struct AdversaryRegistry {
    entries: Vec<Box<dyn Adversary>>,
}

impl AdversaryRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// Registers `adversary`, replacing any entry with the same name.
    pub fn register(mut self, adversary: Box<dyn Adversary>) -> Self {
        self.entries.retain(|a| a.name() != adversary.name());
        self.entries.push(adversary);
        self
    }

    pub fn get(&self, name: &str) -> Result<&dyn Adversary> {
        self.entries
            .iter()
            .find(|a| a.name() == name)
            .map(|a| a.as_ref())
            .ok_or_else(|| Error::UnknownAdversary(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|a| a.name()).collect()
    }
}

impl Default for AdversaryRegistry {
    fn default() -> Self {
        Self::empty()
            .register(Box::new(Honest))
            .register(Box::new(Uniform))
            .register(Box::new(UniformIndex))
            .register(Box::new(Strong))
            .register(Box::new(Weak))
    }
}
