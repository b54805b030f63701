use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::csv::{fmt_sig9, Table};
use super::runner::{run_on_codebook, run_trial, AdversaryReport, Execution, RunSummary};
use crate::analysis::{
    achievable_exponent, converse_valid, error_prob_upper_bound, expected_z, expected_z1, race_dp, rprime_window,
    s_membership, strong_converse_factor, weak_converse_factor, z_stats,
};
use crate::channel::{sample_index_sequence, AdversaryRegistry};
use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::rng::{derive_trial_rng, Stream};
use crate::types::Verdict;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub summary: RunSummary,
    /// Union bound on the error race; NaN when undefined.
    pub bound: f64,
    /// Exact race probability.
    pub dp: f64,
}

/// One run per `p`, same codebook and trial seeds throughout.
///
/// The race columns use `dM + 1` errors (what it takes to push the true
/// codeword out of consistency) against `ceil(theta M) + dM + 1` fresh
/// error-free molecules (enough to rule out every other codeword).
pub fn sweep_p(cfg: &ExperimentConfig, p_list: &[f64]) -> Result<Vec<SweepRow>> {
    if p_list.is_empty() {
        return Err(Error::Domain("empty p list".into()));
    }
    let base = cfg.clone().validate()?;
    let registry = AdversaryRegistry::default();
    let adversary = registry.get(&base.adversary)?;
    let mut cb = Codebook::generate(&base.params)?;
    let zeros = base.params.d_m + 1;
    let ones = base.params.acquisition_threshold();
    p_list
        .iter()
        .map(|&p| {
            let mut cfg = base.clone();
            cfg.params.p = p;
            let cfg = cfg.validate()?;
            cb.params.p = p;
            let summary = run_on_codebook(&cfg, &cb, adversary, Execution::Parallel);
            let m = cfg.params.m;
            let bound = if ones <= m {
                error_prob_upper_bound(m, p, zeros, ones).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            Ok(SweepRow {
                p,
                summary,
                bound,
                dp: race_dp(m, p, zeros, ones),
            })
        })
        .collect()
}

pub fn summary_header() -> Vec<&'static str> {
    vec![
        "trials",
        "errors",
        "failures",
        "truncated",
        "active",
        "pe_hat",
        "pe_lo",
        "pe_hi",
        "mean_reads",
        "stderr_reads",
    ]
}

pub fn summary_cells(s: &RunSummary) -> Vec<String> {
    vec![
        s.trials.to_string(),
        s.errors.to_string(),
        s.failures.to_string(),
        s.truncated.to_string(),
        s.active.to_string(),
        fmt_sig9(s.pe_hat),
        fmt_sig9(s.pe_ci95.0),
        fmt_sig9(s.pe_ci95.1),
        fmt_sig9(s.mean_reads),
        fmt_sig9(s.stderr_reads),
    ]
}

impl RunSummary {
    pub fn to_table(&self, adversary: &str, p: f64) -> Table {
        let mut header = vec!["adversary", "p"];
        header.extend(summary_header());
        let mut t = Table::new(&header);
        let mut row = vec![adversary.to_string(), fmt_sig9(p)];
        row.extend(summary_cells(self));
        t.push(row);
        t
    }
}

impl SweepRow {
    pub fn table(rows: &[SweepRow]) -> Table {
        let mut header = vec!["p"];
        header.extend(summary_header());
        header.extend(["bound", "dp"]);
        let mut t = Table::new(&header);
        for r in rows {
            let mut row = vec![fmt_sig9(r.p)];
            row.extend(summary_cells(&r.summary));
            row.push(fmt_sig9(r.bound));
            row.push(fmt_sig9(r.dp));
            t.push(row);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub r0: f64,
    pub c: f64,
    pub delta: f64,
    pub converse_ok: bool,
}

/// Achievable exponent against coverage for each `r0`. Grid points below
/// the zero-exponent coverage are skipped.
pub fn emit_exponent_curves(r0_list: &[f64], c_grid: &[f64]) -> Result<Vec<CurveRow>> {
    if r0_list.is_empty() || c_grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    Ok(r0_list
        .iter()
        .flat_map(|&r0| {
            c_grid.iter().filter_map(move |&c| {
                achievable_exponent(c, r0).ok().map(|delta| CurveRow {
                    r0,
                    c,
                    delta,
                    converse_ok: converse_valid(c, delta),
                })
            })
        })
        .collect())
}

impl CurveRow {
    pub fn table(rows: &[CurveRow]) -> Table {
        let mut t = Table::new(&["R0", "c", "delta", "converse_ok"]);
        for r in rows {
            t.push(vec![
                fmt_sig9(r.r0),
                fmt_sig9(r.c),
                fmt_sig9(r.delta),
                u8::from(r.converse_ok).to_string(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SMembershipRow {
    pub m: usize,
    pub h_m: usize,
    pub d_m: usize,
    pub r_prime_m: usize,
    pub trials: usize,
    pub fraction: f64,
    /// Fraction passing the sufficient test `Z - min(Z1, dM) <= R'M`.
    pub sufficient_fraction: f64,
    pub mean_z: f64,
    pub sd_z: f64,
    pub expected_z: f64,
    pub mean_z1: f64,
    pub sd_z1: f64,
    pub expected_z1: f64,
}

/// Fraction of random index sequences that admit a flippable split, for
/// each `M`, at read horizon `floor(c_ratio * c * M)`, `dM = floor(delta M)`
/// and `R'M = floor(R' M)` with `R'` the midpoint of the admissible window.
pub fn s_membership_experiment(
    m_list: &[usize],
    c: f64,
    delta: f64,
    c_ratio: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<SMembershipRow>> {
    if !converse_valid(c, delta) {
        return Err(Error::Domain(format!("delta={delta} not below c e^-c at c={c}")));
    }
    let r0 = 1.0 - delta - (-c).exp();
    let cpp = c_ratio * c;
    let (lo, hi) = rprime_window(cpp, delta, r0).ok_or_else(|| Error::Domain("empty R' window".into()))?;
    let r_prime = 0.5 * (lo + hi);
    if trials == 0 {
        return Err(Error::Domain("trials must be positive".into()));
    }

    Ok(m_list
        .iter()
        .map(|&m| {
            let mf = m as f64;
            let h_m = (cpp * mf).floor() as usize;
            let d_m = (delta * mf).floor() as usize;
            let r_prime_m = (r_prime * mf).floor() as usize;
            let (hits, suff, z, z_sq, z1, z1_sq) = (0..trials as u64)
                .into_par_iter()
                .map(|t| {
                    let mut rng = derive_trial_rng(seed, t).stream(Stream::Index);
                    let f = sample_index_sequence(m, h_m, &mut rng);
                    let part = s_membership(&f.entries, h_m, d_m, r_prime_m);
                    let zs = z_stats(&f.entries, h_m);
                    let (z, z1) = (zs.z as u64, zs.z1 as u64);
                    (u64::from(part.in_s), u64::from(part.sufficient), z, z * z, z1, z1 * z1)
                })
                .reduce(
                    || (0, 0, 0, 0, 0, 0),
                    |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3, a.4 + b.4, a.5 + b.5),
                );
            let n = trials as f64;
            let sd = |sum: u64, sq: u64| {
                let mean = sum as f64 / n;
                ((sq as f64 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0)).sqrt()
            };
            SMembershipRow {
                m,
                h_m,
                d_m,
                r_prime_m,
                trials,
                fraction: hits as f64 / n,
                sufficient_fraction: suff as f64 / n,
                mean_z: z as f64 / n,
                sd_z: sd(z, z_sq),
                expected_z: expected_z(m, h_m),
                mean_z1: z1 as f64 / n,
                sd_z1: sd(z1, z1_sq),
                expected_z1: expected_z1(m, h_m),
            }
        })
        .collect())
}

impl SMembershipRow {
    pub fn table(rows: &[SMembershipRow]) -> Table {
        let mut t = Table::new(&[
            "M",
            "h_m",
            "d_m",
            "r_prime_m",
            "trials",
            "fraction",
            "sufficient_fraction",
            "mean_z",
            "sd_z",
            "expected_z",
            "mean_z1",
            "sd_z1",
            "expected_z1",
        ]);
        for r in rows {
            t.push(vec![
                r.m.to_string(),
                r.h_m.to_string(),
                r.d_m.to_string(),
                r.r_prime_m.to_string(),
                r.trials.to_string(),
                fmt_sig9(r.fraction),
                fmt_sig9(r.sufficient_fraction),
                fmt_sig9(r.mean_z),
                fmt_sig9(r.sd_z),
                fmt_sig9(r.expected_z),
                fmt_sig9(r.mean_z1),
                fmt_sig9(r.sd_z1),
                fmt_sig9(r.expected_z1),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConverseRow {
    pub trial: u64,
    pub message: usize,
    pub psi: bool,
    /// Adversary substituted molecules (strong) / had a target and psi (weak).
    pub active: bool,
    /// The conditions that force a wrong decision held.
    pub conditions: bool,
    pub m_prime: Option<usize>,
    pub verdict: Verdict,
    pub erred: bool,
    /// `conditions` held but the forced outcome did not happen.
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConverseReport {
    pub adversary: String,
    pub rows: Vec<ConverseRow>,
    pub trials: usize,
    pub psi_count: usize,
    pub active_count: usize,
    pub conditions_count: usize,
    pub errors: usize,
    pub errors_when_conditions: usize,
    pub violations: usize,
    /// `p^{dM+1}` (strong) or `2^{-M} p^{dM+1}` (weak).
    pub scale: f64,
}

/// Runs the strong or weak adversary and checks, trial by trial, that the
/// error-forcing conditions always end in a wrong decision within `h_m`
/// reads.
pub fn converse_experiment(cfg: &ExperimentConfig) -> Result<ConverseReport> {
    let cfg = cfg.clone().validate()?;
    if cfg.adversary != "strong" && cfg.adversary != "weak" {
        return Err(Error::Domain(format!(
            "converse needs the strong or weak adversary, got '{}'",
            cfg.adversary
        )));
    }
    let registry = AdversaryRegistry::default();
    let adversary = registry.get(&cfg.adversary)?;
    let cb = Codebook::generate(&cfg.params)?;
    let h_m = cfg.h_m();

    let rows: Vec<ConverseRow> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let out = run_trial(&cfg, &cb, adversary, t, false);
            let erred = out.verdict.is_error(out.message);
            let (psi, active, conditions, m_prime, forced_ok) = match out.adversary {
                AdversaryReport::Strong {
                    psi,
                    active,
                    m_prime,
                    m_prime_stop,
                } => {
                    let ok = match (m_prime, m_prime_stop) {
                        (Some(mp), Some(stop)) => {
                            stop.time <= h_m
                                && out.verdict
                                    == Verdict::Decided {
                                        message: mp,
                                        reads: stop.time,
                                    }
                        }
                        _ => false,
                    };
                    (psi, active, active, m_prime, ok)
                }
                AdversaryReport::Weak {
                    active,
                    m_prime,
                    conditions,
                } => {
                    let ok = erred && out.verdict.decided().is_some() && out.verdict.reads() <= h_m;
                    (conditions.psi, active, conditions.all(), m_prime, ok)
                }
                AdversaryReport::Passive => unreachable!("converse adversaries report their plan"),
            };
            ConverseRow {
                trial: t,
                message: out.message,
                psi,
                active,
                conditions,
                m_prime,
                verdict: out.verdict,
                erred,
                violation: conditions && !forced_ok,
            }
        })
        .collect();

    let count = |pred: fn(&ConverseRow) -> bool| rows.iter().filter(|r| pred(r)).count();
    let (p, d_m) = (cfg.params.p, cfg.params.d_m);
    Ok(ConverseReport {
        adversary: cfg.adversary.clone(),
        trials: rows.len(),
        psi_count: count(|r| r.psi),
        active_count: count(|r| r.active),
        conditions_count: count(|r| r.conditions),
        errors: count(|r| r.erred),
        errors_when_conditions: count(|r| r.conditions && r.erred),
        violations: count(|r| r.violation),
        scale: if cfg.adversary == "strong" {
            strong_converse_factor(p, d_m)
        } else {
            weak_converse_factor(cfg.params.m, p, d_m)
        },
        rows,
    })
}

impl ConverseReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "trial",
            "message",
            "psi",
            "active",
            "conditions",
            "m_prime",
            "verdict",
            "reads",
            "erred",
            "violation",
        ]);
        for r in &self.rows {
            let kind = match r.verdict {
                Verdict::Decided { message, .. } => format!("decided:{message}"),
                Verdict::Failed { .. } => "failed".into(),
                Verdict::Truncated { .. } => "truncated".into(),
            };
            t.push(vec![
                r.trial.to_string(),
                r.message.to_string(),
                u8::from(r.psi).to_string(),
                u8::from(r.active).to_string(),
                u8::from(r.conditions).to_string(),
                r.m_prime.map_or_else(|| "-".into(), |m| m.to_string()),
                kind,
                r.verdict.reads().to_string(),
                u8::from(r.erred).to_string(),
                u8::from(r.violation).to_string(),
            ]);
        }
        let n = self.trials as f64;
        t.trailer = vec![
            format!("adversary={}", self.adversary),
            format!("trials={}", self.trials),
            format!("psi={}", self.psi_count),
            format!("active={}", self.active_count),
            format!("conditions={}", self.conditions_count),
            format!("errors={}", self.errors),
            format!("errors_when_conditions={}", self.errors_when_conditions),
            format!("violations={}", self.violations),
            format!("pe_hat={}", fmt_sig9(self.errors as f64 / n)),
            format!("forced_rate={}", fmt_sig9(self.conditions_count as f64 / n)),
            format!("scale={}", fmt_sig9(self.scale)),
        ];
        t
    }
}
