use rand::Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::channel::{weak_conditions, Activity, Adversary, AdversaryRegistry, ReadStreams, TrialContext, WeakConditions};
use crate::codebook::Codebook;
use crate::decoder::{Decoder, NoErrorStop, Step};
use crate::error::Result;
use crate::rng::{derive_trial_rng, Stream};
use crate::types::{ReadRecord, Trace, Verdict};

/// What the adversary did in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryReport {
    Passive,
    Strong {
        psi: bool,
        active: bool,
        m_prime: Option<usize>,
        m_prime_stop: Option<NoErrorStop>,
    },
    Weak {
        active: bool,
        m_prime: Option<usize>,
        conditions: WeakConditions,
    },
}

impl AdversaryReport {
    pub fn active(&self) -> bool {
        match *self {
            AdversaryReport::Passive => false,
            AdversaryReport::Strong { active, .. } | AdversaryReport::Weak { active, .. } => active,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub message: usize,
    pub verdict: Verdict,
    pub adversary: AdversaryReport,
    /// Present when the trial was run with recording on.
    pub trace: Option<Trace>,
}

/// Runs trial `trial`: draws the message, streams reads through the
/// adversary into the decoder, and classifies the result.
pub fn run_trial(cfg: &ExperimentConfig, cb: &Codebook, adversary: &dyn Adversary, trial: u64, record: bool) -> TrialOutcome {
    let p = cfg.params.p;
    let rng = derive_trial_rng(cfg.params.seed, trial);
    let message = rng.stream(Stream::Message).gen_range(0..cb.len());
    let mut reads = ReadStreams::from_trial(&rng, cb.m(), p);
    let ctx = TrialContext {
        codebook: cb,
        message,
        p,
        h_m: cfg.h_m(),
        r_prime_m: cfg.r_prime_m(),
        flip_budget: cfg.flip_budget(),
    };
    let mut filler = adversary.prepare(&ctx, &mut reads, rng.stream(Stream::Adversary));

    let word = cb.word(message);
    let read_cap = cfg.params.read_cap();
    let mut decoder = Decoder::new(cb);
    let mut records = Vec::new();
    let mut verdict = Verdict::Truncated { read_cap };
    for time in 1..=read_cap {
        let (index, error) = reads.read(time);
        let sampled = word.molecule(index);
        let observed = filler.observe(time, sampled, error);
        if record {
            records.push(ReadRecord {
                time,
                sampled,
                error,
                observed,
            });
        }
        match decoder.step(observed) {
            Step::Continue => {}
            Step::Stop(decided) => {
                verdict = Verdict::Decided {
                    message: decided,
                    reads: time,
                };
                break;
            }
            Step::Fail => {
                verdict = Verdict::Failed { reads: time };
                break;
            }
        }
    }

    let report = match filler.activity() {
        Activity::Passive => AdversaryReport::Passive,
        Activity::Strong(plan) => AdversaryReport::Strong {
            psi: plan.psi,
            active: plan.active,
            m_prime: plan.m_prime,
            m_prime_stop: plan.m_prime.and_then(|mp| plan.t_m(mp)),
        },
        Activity::Weak(plan) => {
            let (f, flags) = reads.prefix(ctx.h_m);
            AdversaryReport::Weak {
                active: plan.active(),
                m_prime: plan.m_prime,
                conditions: weak_conditions(plan, cb, &f, &flags, ctx.h_m, ctx.flip_budget),
            }
        }
    };

    TrialOutcome {
        trial,
        message,
        verdict,
        adversary: report,
        trace: record.then(|| Trace {
            records,
            verdict,
            true_message: message,
        }),
    }
}

/// Aggregated Monte Carlo statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub trials: usize,
    /// Decided on a wrong message.
    pub errors: usize,
    pub failures: usize,
    pub truncated: usize,
    /// Trials in which the adversary was active.
    pub active: usize,
    pub pe_hat: f64,
    pub pe_ci95: (f64, f64),
    pub mean_reads: f64,
    pub stderr_reads: f64,
}

impl RunSummary {
    pub fn bad(&self) -> usize {
        self.errors + self.failures + self.truncated
    }
}

/// Integer counters; merging is associative and commutative, so any trial
/// order gives the same totals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counters {
    trials: usize,
    errors: usize,
    failures: usize,
    truncated: usize,
    active: usize,
    sum_reads: u128,
    sum_sq_reads: u128,
}

impl Counters {
    fn of(outcome: &TrialOutcome) -> Self {
        let n = outcome.verdict.reads() as u128;
        let (mut errors, mut failures, mut truncated) = (0, 0, 0);
        match outcome.verdict {
            Verdict::Decided { message, .. } if message != outcome.message => errors = 1,
            Verdict::Decided { .. } => {}
            Verdict::Failed { .. } => failures = 1,
            Verdict::Truncated { .. } => truncated = 1,
        }
        Self {
            trials: 1,
            errors,
            failures,
            truncated,
            active: usize::from(outcome.adversary.active()),
            sum_reads: n,
            sum_sq_reads: n * n,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            errors: self.errors + o.errors,
            failures: self.failures + o.failures,
            truncated: self.truncated + o.truncated,
            active: self.active + o.active,
            sum_reads: self.sum_reads + o.sum_reads,
            sum_sq_reads: self.sum_sq_reads + o.sum_sq_reads,
        }
    }

    fn summary(self) -> RunSummary {
        let n = self.trials as f64;
        let bad = self.errors + self.failures + self.truncated;
        let mean = self.sum_reads as f64 / n;
        let var = if self.trials > 1 {
            let centered = self.sum_sq_reads as f64 - (self.sum_reads as f64).powi(2) / n;
            (centered / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        RunSummary {
            trials: self.trials,
            errors: self.errors,
            failures: self.failures,
            truncated: self.truncated,
            active: self.active,
            pe_hat: bad as f64 / n,
            pe_ci95: wilson_interval(bad, self.trials),
            mean_reads: mean,
            stderr_reads: (var / n).sqrt(),
        }
    }
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

pub fn run_trials(cfg: &ExperimentConfig) -> Result<RunSummary> {
    run_trials_with(cfg, Execution::Parallel)
}

/// Builds the codebook from `cfg.params.seed` and runs `cfg.trials` trials.
pub fn run_trials_with(cfg: &ExperimentConfig, exec: Execution) -> Result<RunSummary> {
    let cfg = cfg.clone().validate()?;
    let registry = AdversaryRegistry::default();
    let adversary = registry.get(&cfg.adversary)?;
    let cb = Codebook::generate(&cfg.params)?;
    Ok(run_on_codebook(&cfg, &cb, adversary, exec))
}

pub(crate) fn run_on_codebook(cfg: &ExperimentConfig, cb: &Codebook, adversary: &dyn Adversary, exec: Execution) -> RunSummary {
    let one = |t: u64| Counters::of(&run_trial(cfg, cb, adversary, t, false));
    let trials = cfg.trials as u64;
    let totals = match exec {
        Execution::Serial => (0..trials).map(one).fold(Counters::default(), Counters::merge),
        Execution::Parallel => (0..trials)
            .into_par_iter()
            .map(one)
            .reduce(Counters::default, Counters::merge),
    };
    totals.summary()
}
