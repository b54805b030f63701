use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use varread::analysis::coverage_for_exponent;
use varread::codebook::verify_intersections;
use varread::harness::{
    converse_experiment, emit_exponent_curves, run_trial, run_trials, s_membership_experiment, sweep_p, CurveRow,
    ExperimentConfig, SMembershipRow, SweepRow, Table,
};
use varread::channel::AdversaryRegistry;
use varread::{Codebook, SimParams, Trace};

#[derive(Parser)]
#[command(name = "varread", version, about = "Variable-read DNA storage simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a codebook and write it in the text codebook format.
    Codebook(SimArgs),
    /// Run Monte Carlo trials and print a one-row summary.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Also write the trace of this trial.
        #[arg(long)]
        trace_trial: Option<u64>,
        #[arg(long, requires = "trace_trial")]
        trace_out: Option<PathBuf>,
    },
    /// Repeat the simulation for several error probabilities.
    SweepP {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        p_list: Vec<f64>,
    },
    /// Achievable error exponent against coverage depth.
    Curves {
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5,0.75")]
        r0_list: Vec<f64>,
        /// Explicit coverage grid; overrides --c-min/--c-max/--c-steps.
        #[arg(long, value_delimiter = ',')]
        c_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.0)]
        c_min: f64,
        #[arg(long, default_value_t = 5.0)]
        c_max: f64,
        #[arg(long, default_value_t = 101)]
        c_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical frequency of flippable index sequences.
    Smembership {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        m_list: Vec<usize>,
        #[arg(long, default_value_t = 0.3)]
        r0: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Coverage depth; derived from --r0 and --delta when omitted.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 0.9)]
        c_ratio: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the strong or weak adversary and check its forced errors.
    Converse(SimArgs),
    /// Re-decode a trace file against a codebook file.
    Replay {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
}

#[derive(Args, Clone)]
struct SimArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Consistency budget as a fraction of M (dM = floor(delta * M)).
    #[arg(long)]
    delta: Option<f64>,
    /// Consistency budget as an integer; wins over --delta.
    #[arg(long)]
    dm: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, help = "honest | uniform | uniform-index | strong | weak")]
    adversary: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    read_cap: Option<usize>,
    /// Converse read horizon.
    #[arg(long)]
    hm: Option<usize>,
    /// Converse index-set size.
    #[arg(long)]
    rprime_m: Option<usize>,
    /// Reads the converse adversaries may corrupt (default dM+1).
    #[arg(long)]
    flip_budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SimArgs {
    fn config(&self) -> varread::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::new(SimParams::new(20, 16, 16, 0.05, 2, 0.5, 0), "honest", 1000),
        };
        let p = &mut cfg.params;
        if let Some(m) = self.m {
            p.m = m;
        }
        if let Some(k) = self.k {
            p.k = k;
        }
        if let Some(v) = self.v {
            p.v = v;
        }
        if let Some(x) = self.p {
            p.p = x;
        }
        if let Some(delta) = self.delta {
            p.d_m = (delta * p.m as f64).floor() as usize;
        }
        if let Some(dm) = self.dm {
            p.d_m = dm;
        }
        if let Some(theta) = self.theta {
            p.theta = theta;
        }
        if let Some(seed) = self.seed {
            p.seed = seed;
        }
        if self.read_cap.is_some() {
            p.read_cap = self.read_cap;
        }
        if let Some(a) = &self.adversary {
            cfg.adversary = a.clone();
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if self.hm.is_some() {
            cfg.h_m = self.hm;
        }
        if self.rprime_m.is_some() {
            cfg.r_prime_m = self.rprime_m;
        }
        if self.flip_budget.is_some() {
            cfg.flip_budget = self.flip_budget;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.validate()
    }
}

fn output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(table: &Table, command: &str, path: Option<&PathBuf>) -> varread::Result<()> {
    let mut out = output(path)?;
    table.write_to(&mut out, command)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> varread::Result<bool> {
    match cli.command {
        Command::Codebook(sim) => {
            let cfg = sim.config()?;
            let cb = Codebook::generate(&cfg.params)?;
            eprintln!(
                "max pairwise intersection {} (limit < {})",
                verify_intersections(&cb),
                cfg.params.intersection_limit()
            );
            let mut out = output(cfg.out.as_ref())?;
            cb.write_to(&mut out)?;
            out.flush()?;
        }
        Command::Simulate {
            sim,
            trace_trial,
            trace_out,
        } => {
            let cfg = sim.config()?;
            let summary = run_trials(&cfg)?;
            emit(&summary.to_table(&cfg.adversary, cfg.params.p), "simulate", cfg.out.as_ref())?;
            if let Some(trial) = trace_trial {
                let cb = Codebook::generate(&cfg.params)?;
                let registry = AdversaryRegistry::default();
                let outcome = run_trial(&cfg, &cb, registry.get(&cfg.adversary)?, trial, true);
                let trace = outcome.trace.expect("recorded");
                let mut out = output(trace_out.as_ref())?;
                trace.write_to(&mut out)?;
                out.flush()?;
            }
        }
        Command::SweepP { sim, p_list } => {
            let cfg = sim.config()?;
            let rows = sweep_p(&cfg, &p_list)?;
            emit(&SweepRow::table(&rows), "sweep-p", cfg.out.as_ref())?;
        }
        Command::Curves {
            r0_list,
            c_grid,
            c_min,
            c_max,
            c_steps,
            out,
        } => {
            let grid = c_grid.unwrap_or_else(|| {
                let steps = c_steps.max(2);
                (0..steps)
                    .map(|i| c_min + (c_max - c_min) * i as f64 / (steps - 1) as f64)
                    .collect()
            });
            let rows = emit_exponent_curves(&r0_list, &grid)?;
            emit(&CurveRow::table(&rows), "curves", out.as_ref())?;
        }
        Command::Smembership {
            m_list,
            r0,
            delta,
            c,
            c_ratio,
            trials,
            seed,
            out,
        } => {
            let c = match c {
                Some(c) => c,
                None => coverage_for_exponent(r0, delta)?,
            };
            let rows = s_membership_experiment(&m_list, c, delta, c_ratio, trials, seed)?;
            emit(&SMembershipRow::table(&rows), "smembership", out.as_ref())?;
        }
        Command::Converse(sim) => {
            let cfg = sim.config()?;
            let report = converse_experiment(&cfg)?;
            emit(&report.table(), "converse", cfg.out.as_ref())?;
            if report.violations > 0 {
                eprintln!("{} trial(s) met the error conditions without the forced error", report.violations);
                return Ok(false);
            }
        }
        Command::Replay { sim, codebook, trace } => {
            let cfg = sim.config()?;
            let cb = Codebook::read_from(BufReader::new(File::open(codebook)?), &cfg.params)?;
            let trace = Trace::read_from(BufReader::new(File::open(trace)?))?;
            let cap = trace.verdict.reads().max(cfg.params.read_cap());
            let cap = match trace.verdict {
                varread::Verdict::Truncated { read_cap } => read_cap,
                _ => cap,
            };
            let verdict = varread::decoder::run(&cb, trace.records.iter().map(|r| r.observed), cap);
            println!("recorded {}", trace.verdict);
            println!("replayed {verdict}");
            return Ok(verdict == trace.verdict);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
