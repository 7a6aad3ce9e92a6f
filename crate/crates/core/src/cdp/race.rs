//! Fair interleaving of the prover and the model finder on one question.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use super::{Budget, Schedule};
use crate::fol::{Clause, FiniteStructure};
use crate::model::{Cell, ModelSearch, ModelSearchResult, SizeReport};
use crate::prover::{Exhausted, Proof, ProverStats, SaturationLimits, Saturation, SaturationOutcome};

/// How the prover's run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProverEnd {
    Refuted,
    /// No refutation exists: the refuted question is satisfiable.
    Saturated,
    OutOf(Exhausted),
    /// Stopped because the model finder won or the budget ran out.
    Stopped,
}

/// How the model finder's run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelEnd {
    Found(usize),
    NoModelUpTo(usize),
    /// Stopped while searching this size.
    Stopped(usize),
}

/// Per-process accounting of one race.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessReport {
    pub prover_stats: ProverStats,
    pub prover_end: ProverEnd,
    pub model_time: Duration,
    pub sizes: Vec<SizeReport>,
    pub model_end: ModelEnd,
    /// Models rejected by the acceptance check.
    pub rejected: usize,
    pub elapsed: Duration,
    pub timed_out: bool,
}

impl ProcessReport {
    pub fn prover_time(&self) -> Duration {
        self.prover_stats.elapsed
    }
}

pub(crate) enum RaceOutcome {
    Refuted(Proof),
    Model { structure: FiniteStructure, size: usize },
    Undecided,
}

pub(crate) struct Race {
    pub outcome: RaceOutcome,
    pub report: ProcessReport,
}

/// Acceptance test for found models, and the cells that identify a
/// rejected model.
pub(crate) struct Acceptance<'a> {
    pub accept: &'a (dyn Fn(&FiniteStructure) -> bool + Sync),
    pub keep: &'a (dyn Fn(&Cell) -> bool + Sync),
}

fn limits_of(budget: &Budget) -> SaturationLimits {
    SaturationLimits { max_time: None, ..budget.limits }
}

fn prover_end(o: &SaturationOutcome) -> ProverEnd {
    match o {
        SaturationOutcome::Refutation(_) => ProverEnd::Refuted,
        SaturationOutcome::Saturated => ProverEnd::Saturated,
        SaturationOutcome::ResourceOut(r) if r.reason == Exhausted::Cancelled => ProverEnd::Stopped,
        SaturationOutcome::ResourceOut(r) => ProverEnd::OutOf(r.reason),
    }
}

fn model_end(r: &ModelSearchResult) -> ModelEnd {
    match r {
        ModelSearchResult::Model { size, .. } => ModelEnd::Found(*size),
        ModelSearchResult::NoModelUpTo(n) => ModelEnd::NoModelUpTo(*n),
        ModelSearchResult::Cancelled(n) => ModelEnd::Stopped(*n),
    }
}

/// Races a refutation of `refute` against a model of `satisfy`.
pub(crate) fn race(refute: &[Clause], satisfy: &[Clause], budget: &Budget, acc: &Acceptance<'_>) -> Race {
    match budget.schedule {
        Schedule::RoundRobin => round_robin(refute, satisfy, budget, acc),
        Schedule::Threads => threads(refute, satisfy, budget, acc),
    }
}

fn round_robin(refute: &[Clause], satisfy: &[Clause], budget: &Budget, acc: &Acceptance<'_>) -> Race {
    let start = Instant::now();
    let mut prover = Saturation::new(refute, limits_of(budget), budget.options);
    let mut search = ModelSearch::new(satisfy, budget.n_max);
    let mut p_end: Option<ProverEnd> = None;
    let mut m_end: Option<ModelEnd> = None;
    let mut rejected = 0;
    let mut timed_out = false;
    let outcome = loop {
        if p_end.is_none() {
            if let Some(o) = prover.step() {
                p_end = Some(prover_end(&o));
                if let SaturationOutcome::Refutation(proof) = o {
                    break RaceOutcome::Refuted(proof);
                }
            }
        }
        if m_end.is_none() {
            match search.step(budget.quantum) {
                Some(ModelSearchResult::Model { structure, size }) => {
                    if (acc.accept)(&structure) {
                        m_end = Some(ModelEnd::Found(size));
                        break RaceOutcome::Model { structure, size };
                    }
                    rejected += 1;
                    search.reject(acc.keep);
                }
                Some(r) => m_end = Some(model_end(&r)),
                None => {}
            }
        }
        if p_end.is_some() && m_end.is_some() {
            break RaceOutcome::Undecided;
        }
        if start.elapsed() >= budget.time {
            timed_out = true;
            break RaceOutcome::Undecided;
        }
    };
    let report = ProcessReport {
        prover_stats: prover.stats(),
        prover_end: p_end.unwrap_or(ProverEnd::Stopped),
        model_time: search.elapsed(),
        sizes: search.reports().to_vec(),
        model_end: m_end.unwrap_or(ModelEnd::Stopped(search.size())),
        rejected,
        elapsed: start.elapsed(),
        timed_out,
    };
    Race { outcome, report }
}

/// Model search alone for a model with fewer than `below` elements. Used
/// once another direction of the same goal already has a countermodel of
/// size `below`, so refuting this direction would not change the verdict.
pub(crate) fn search_below(satisfy: &[Clause], below: usize, budget: &Budget) -> Race {
    let start = Instant::now();
    let mut search = ModelSearch::new(satisfy, below.saturating_sub(1));
    let mut timed_out = false;
    let (outcome, end) = loop {
        match search.step(budget.quantum) {
            Some(ModelSearchResult::Model { structure, size }) => break (RaceOutcome::Model { structure, size }, ModelEnd::Found(size)),
            Some(r) => break (RaceOutcome::Undecided, model_end(&r)),
            None if start.elapsed() >= budget.time => {
                timed_out = true;
                break (RaceOutcome::Undecided, ModelEnd::Stopped(search.size()));
            }
            None => {}
        }
    };
    let report = ProcessReport {
        prover_stats: ProverStats::default(),
        prover_end: ProverEnd::Stopped,
        model_time: search.elapsed(),
        sizes: search.reports().to_vec(),
        model_end: end,
        rejected: 0,
        elapsed: start.elapsed(),
        timed_out,
    };
    Race { outcome, report }
}

enum Msg {
    Prover(SaturationOutcome),
    Model(ModelSearchResult),
}

fn threads(refute: &[Clause], satisfy: &[Clause], budget: &Budget, acc: &Acceptance<'_>) -> Race {
    let start = Instant::now();
    let cancel = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<Msg>();
    let limits = limits_of(budget);
    thread::scope(|s| {
        let ptx = tx.clone();
        let cancel_ref = &cancel;
        let p = s.spawn(move || {
            let mut prover = Saturation::new(refute, limits, budget.options);
            let out = prover.run(Some(cancel_ref));
            ptx.send(Msg::Prover(out)).ok();
            prover.stats()
        });
        let m = s.spawn(move || {
            let mut search = ModelSearch::new(satisfy, budget.n_max);
            let mut rejected = 0;
            loop {
                let r = search.run(Some(cancel_ref));
                if let ModelSearchResult::Model { structure, .. } = &r {
                    if !(acc.accept)(structure) {
                        rejected += 1;
                        search.reject(acc.keep);
                        continue;
                    }
                }
                tx.send(Msg::Model(r)).ok();
                break;
            }
            (search.elapsed(), search.reports().to_vec(), search.size(), rejected)
        });

        let mut p_end: Option<ProverEnd> = None;
        let mut m_end: Option<ModelEnd> = None;
        let mut timed_out = false;
        let outcome = loop {
            let left = budget.time.saturating_sub(start.elapsed());
            match rx.recv_timeout(left) {
                Ok(Msg::Prover(o)) => {
                    p_end = Some(prover_end(&o));
                    if let SaturationOutcome::Refutation(proof) = o {
                        break RaceOutcome::Refuted(proof);
                    }
                }
                Ok(Msg::Model(r)) => {
                    m_end = Some(model_end(&r));
                    if let ModelSearchResult::Model { structure, size } = r {
                        break RaceOutcome::Model { structure, size };
                    }
                }
                Err(_) => {
                    timed_out = true;
                    break RaceOutcome::Undecided;
                }
            }
            if p_end.is_some() && m_end.is_some() {
                break RaceOutcome::Undecided;
            }
        };
        cancel.store(true, Ordering::Relaxed);
        let prover_stats = p.join().expect("prover worker");
        let (model_time, sizes, size, rejected) = m.join().expect("model worker");
        let report = ProcessReport {
            prover_stats,
            prover_end: p_end.unwrap_or(ProverEnd::Stopped),
            model_time,
            sizes,
            model_end: m_end.unwrap_or(ModelEnd::Stopped(size)),
            rejected,
            elapsed: start.elapsed(),
            timed_out,
        };
        Race { outcome, report }
    })
}
