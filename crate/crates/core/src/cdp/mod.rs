//! The combined decision procedure: a resolution refutation of the
//! negated validity question raced against a search for a finite
//! countermodel, with evidence checked independently of the translation.

mod extract;
mod ltl;
mod race;

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

pub use extract::{check_countermodel, extract_lasso, lasso_states, to_kripke, LassoError, ModelCheckError};
pub use ltl::{ltl_decide, LtlOutcome, LtlVerdict};
pub use race::{ModelEnd, ProcessReport, ProverEnd};

use crate::fol::FiniteStructure;
use crate::formula::{print_modal, KripkeModel, ModalFormula};
use crate::model::DEFAULT_N_MAX;
use crate::prover::{Proof, ProverOptions, SaturationLimits};
use crate::translate::{assemble_split, s4_to_s5, Direction, ModalSystem, TranslateError};
use race::{race, search_below, Acceptance, RaceOutcome};

/// How the two searches share the processor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Alternate one given-clause iteration with one DPLL work quantum on
    /// the calling thread. Deterministic.
    #[default]
    RoundRobin,
    /// One worker thread each; the first definitive answer cancels the
    /// other.
    Threads,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Wall-clock limit per question (per direction of a split goal).
    pub time: Duration,
    /// Largest domain size tried.
    pub n_max: usize,
    /// Prover limits; the time limit is taken from `time`.
    pub limits: SaturationLimits,
    pub options: ProverOptions,
    /// DPLL work per round-robin slice.
    pub quantum: u64,
    pub schedule: Schedule,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            time: Duration::from_secs(60),
            n_max: DEFAULT_N_MAX,
            limits: SaturationLimits::default(),
            options: ProverOptions::default(),
            quantum: 2_000,
            schedule: Schedule::RoundRobin,
        }
    }
}

impl Budget {
    pub fn with_time(mut self, time: Duration) -> Self {
        self.time = time;
        self
    }
}

/// Result of one direction of a possibly split goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionResult {
    pub direction: Direction,
    pub goal: ModalFormula,
    pub status: DirectionStatus,
    pub report: ProcessReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectionStatus {
    Proved(Proof),
    Countermodel { model: KripkeModel, structure: FiniteStructure, size: usize },
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Every direction was refuted; proofs in direction order.
    Valid(Vec<(Direction, Proof)>),
    /// The first direction with a countermodel.
    Invalid { direction: Direction, model: KripkeModel, size: usize },
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Valid,
    Invalid,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Valid => "Valid",
            VerdictKind::Invalid => "Invalid",
            VerdictKind::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub goal: ModalFormula,
    pub system: ModalSystem,
    pub outcome: Outcome,
    pub directions: Vec<DirectionResult>,
    pub elapsed: Duration,
    /// The S4 goal `dia box goal` when this verdict on `goal` in S5
    /// stands for it.
    pub reduced_from: Option<ModalFormula>,
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self.outcome {
            Outcome::Valid(_) => VerdictKind::Valid,
            Outcome::Invalid { .. } => VerdictKind::Invalid,
            Outcome::Unknown(_) => VerdictKind::Unknown,
        }
    }

    /// Size of the countermodel when invalid.
    pub fn model_size(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Invalid { size, .. } => Some(*size),
            _ => None,
        }
    }

    /// One-line summary, e.g. `Valid` or `Invalid (2 worlds)`.
    pub fn headline(&self) -> String {
        match &self.outcome {
            Outcome::Valid(_) => "Valid".to_string(),
            Outcome::Invalid { size, .. } => {
                format!("Invalid ({size} world{})", if *size == 1 { "" } else { "s" })
            }
            Outcome::Unknown(why) => format!("Unknown ({why})"),
        }
    }

    /// Structured text: outcome, system, formula, per-direction timings and
    /// sizes tried, then the evidence.
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "outcome: {}", self.headline()).ok();
        writeln!(out, "system: {}", self.system.name()).ok();
        writeln!(out, "formula: {}", print_modal(&self.goal)).ok();
        if let Some(g) = &self.reduced_from {
            writeln!(out, "stands for: {} in S4", print_modal(g)).ok();
        }
        for d in &self.directions {
            let status = match &d.status {
                DirectionStatus::Proved(p) => format!("proved ({} steps)", p.len()),
                DirectionStatus::Countermodel { size, .. } => format!("countermodel of size {size}"),
                DirectionStatus::Undecided => "undecided".to_string(),
            };
            writeln!(out, "direction {}: {}: {status}", d.direction, print_modal(&d.goal)).ok();
            write_process(&mut out, &d.report);
        }
        writeln!(out, "elapsed: {:.3}s", self.elapsed.as_secs_f64()).ok();
        match &self.outcome {
            Outcome::Valid(proofs) => {
                for (d, p) in proofs {
                    writeln!(out, "proof {d}:").ok();
                    out.push_str(&p.to_string());
                }
            }
            Outcome::Invalid { direction, model, .. } => {
                writeln!(out, "countermodel {direction}:").ok();
                out.push_str(&model.to_string());
            }
            Outcome::Unknown(_) => {}
        }
        out
    }
}

pub(crate) fn write_process(out: &mut String, r: &ProcessReport) {
    let s = &r.prover_stats;
    writeln!(
        out,
        "  prover: {:?} in {:.3}s (given {}, generated {}, kept {}, subsumed {})",
        r.prover_end,
        r.prover_time().as_secs_f64(),
        s.given,
        s.generated,
        s.kept,
        s.subsumed
    )
    .ok();
    let tried: Vec<String> = r
        .sizes
        .iter()
        .map(|z| format!("{}:{}", z.size, if z.satisfiable { "sat" } else { "unsat" }))
        .collect();
    writeln!(
        out,
        "  model search: {:?} in {:.3}s (sizes finished [{}]{})",
        r.model_end,
        r.model_time.as_secs_f64(),
        tried.join(" "),
        if r.rejected > 0 { format!(", {} rejected", r.rejected) } else { String::new() }
    )
    .ok();
}

fn unknown_reason(r: &ProcessReport, budget: &Budget) -> String {
    if r.timed_out {
        return format!("time budget of {}s exhausted", budget.time.as_secs_f64());
    }
    let prover = match r.prover_end {
        ProverEnd::Saturated => "prover saturated without refutation".to_string(),
        ProverEnd::OutOf(e) => format!("prover out of resources ({e:?})"),
        ProverEnd::Refuted | ProverEnd::Stopped => "prover stopped".to_string(),
    };
    let model = match r.model_end {
        ModelEnd::NoModelUpTo(n) => format!("no countermodel up to size {n}"),
        _ => "model search stopped".to_string(),
    };
    format!("{prover}; {model}")
}

/// Decides validity of `goal` in `system`. A top-level biconditional is
/// split into its two implications, decided in order; the goal is valid
/// when both are refuted. Once one direction has a countermodel, the later
/// ones are only searched for smaller models, so an invalid verdict
/// carries the goal's smallest countermodel. Every
/// countermodel is re-checked by direct Kripke evaluation and frame
/// property tests before it is reported.
pub fn decide(goal: &ModalFormula, system: &ModalSystem, budget: &Budget) -> Result<Verdict, TranslateError> {
    let start = Instant::now();
    let problems = assemble_split(goal, system)?;
    let indices = goal.modalities();
    let atoms = goal.atoms();
    let accept_all = |_: &FiniteStructure| true;
    let keep_all = |_: &crate::model::Cell| true;
    let acc = Acceptance { accept: &accept_all, keep: &keep_all };

    let mut directions = Vec::new();
    let mut invalid: Option<(Direction, KripkeModel, usize)> = None;
    for (direction, problem) in problems {
        // A countermodel of the goal falsifies one direction, so after the
        // first countermodel only strictly smaller ones matter.
        let r = match &invalid {
            None => race(&problem.refutation_clauses, &problem.countermodel_clauses, budget, &acc),
            Some((_, _, 1)) => break,
            Some((_, _, n)) => search_below(&problem.countermodel_clauses, *n, budget),
        };
        let status = match r.outcome {
            RaceOutcome::Refuted(proof) => DirectionStatus::Proved(proof),
            RaceOutcome::Model { structure, size } => {
                let model = to_kripke(&structure, &indices, &atoms);
                if let Err(e) = check_countermodel(&problem.goal, system, &model) {
                    panic!("extracted countermodel fails its independent check: {e}\n{model}");
                }
                invalid = Some((direction, model.clone(), size));
                DirectionStatus::Countermodel { model, structure, size }
            }
            RaceOutcome::Undecided => DirectionStatus::Undecided,
        };
        directions.push(DirectionResult { direction, goal: problem.goal.clone(), status, report: r.report });
    }
    let outcome = if let Some((direction, model, size)) = invalid {
        Outcome::Invalid { direction, model, size }
    } else if let Some(d) = directions.iter().find(|d| d.status == DirectionStatus::Undecided) {
        Outcome::Unknown(format!("direction {}: {}", d.direction, unknown_reason(&d.report, budget)))
    } else {
        Outcome::Valid(
            directions
                .iter()
                .map(|d| match &d.status {
                    DirectionStatus::Proved(p) => (d.direction, p.clone()),
                    _ => unreachable!("every direction proved"),
                })
                .collect(),
        )
    };
    Ok(Verdict {
        goal: goal.clone(),
        system: system.clone(),
        outcome,
        directions,
        elapsed: start.elapsed(),
        reduced_from: None,
    })
}

/// Decides the S4 goal `dia box phi` by deciding `phi` in S5, which has
/// the same verdict and a much easier first-order translation. A
/// countermodel of `phi` in S5 is an equivalence relation, hence also an
/// S4 countermodel of the goal, and is re-checked as one.
pub fn decide_via_s5(goal: &ModalFormula, budget: &Budget) -> Result<Verdict, TranslateError> {
    let body = s4_to_s5(goal)?;
    let mut v = decide(&body, &ModalSystem::named("S5")?, budget)?;
    if let Outcome::Invalid { model, .. } = &v.outcome {
        if let Err(e) = check_countermodel(goal, &ModalSystem::named("S4")?, model) {
            panic!("S5 countermodel of the body is no S4 countermodel of the goal: {e}\n{model}");
        }
    }
    v.reduced_from = Some(goal.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{eval_modal, parse_modal};
    use crate::translate::assemble;

    fn quick() -> Budget {
        Budget::default().with_time(Duration::from_secs(20))
    }

    fn run(f: &str, s: &str) -> Verdict {
        decide(&parse_modal(f).unwrap(), &ModalSystem::named(s).unwrap(), &quick()).unwrap()
    }

    #[test]
    fn kt_example_is_valid_with_a_replayable_proof() {
        let v = run("box p -> dia p", "KT");
        let Outcome::Valid(proofs) = &v.outcome else { panic!("{}", v.report()) };
        let sys = ModalSystem::named("KT").unwrap();
        let problem = assemble(&v.goal, &sys).unwrap();
        proofs[0].1.replay(&problem.refutation_clauses).unwrap();
    }

    #[test]
    fn four_fails_in_k_on_two_worlds() {
        let v = run("box p -> box box p", "K");
        let Outcome::Invalid { model, size, .. } = &v.outcome else { panic!("{}", v.report()) };
        assert_eq!(*size, 2);
        assert!(!eval_modal(&v.goal, model, model.real_world()).unwrap());
        assert_eq!(v.headline(), "Invalid (2 worlds)");
    }

    #[test]
    fn biconditionals_report_both_directions() {
        let v = run("box box p <-> dia box p", "KD45");
        assert_eq!(v.kind(), VerdictKind::Valid);
        assert_eq!(v.directions.len(), 2);
        let text = v.report();
        assert!(text.contains("direction ->"));
        assert!(text.contains("proof <-:"));
    }

    #[test]
    fn invalid_biconditionals_get_the_smallest_model_over_both_directions() {
        // The forward direction needs two worlds, the backward one.
        let v = run("dia q <-> (box p -> q)", "K");
        assert_eq!(v.model_size(), Some(1), "{}", v.report());
        let Outcome::Invalid { direction, .. } = v.outcome else { unreachable!() };
        assert_eq!(direction, Direction::Backward);
        assert!(matches!(v.directions[0].status, DirectionStatus::Countermodel { size: 2, .. }));
    }

    #[test]
    fn threads_agree_with_round_robin() {
        let budget = Budget { schedule: Schedule::Threads, ..quick() };
        for (f, s, kind) in [("box p -> dia p", "KT", VerdictKind::Valid), ("box p -> p", "K", VerdictKind::Invalid)] {
            let v = decide(&parse_modal(f).unwrap(), &ModalSystem::named(s).unwrap(), &budget).unwrap();
            assert_eq!(v.kind(), kind);
        }
    }

    #[test]
    fn s4_goals_by_their_s5_body() {
        let goal = parse_modal("dia box (box p -> box box p)").unwrap();
        let v = decide_via_s5(&goal, &quick()).unwrap();
        assert_eq!(v.kind(), VerdictKind::Valid);
        assert_eq!(v.goal, parse_modal("box p -> box box p").unwrap());
        assert!(v.report().contains("stands for: dia box"));
        let goal = parse_modal("dia box (dia p -> p)").unwrap();
        let v = decide_via_s5(&goal, &quick()).unwrap();
        let Outcome::Invalid { model, size, .. } = &v.outcome else { panic!("{}", v.report()) };
        assert_eq!(*size, 2);
        check_countermodel(&goal, &ModalSystem::named("S4").unwrap(), model).unwrap();
        assert!(decide_via_s5(&parse_modal("box dia p").unwrap(), &quick()).is_err());
    }

    #[test]
    fn next_time_is_rejected() {
        let e = decide(&parse_modal("X p").unwrap(), &ModalSystem::named("K").unwrap(), &quick());
        assert!(e.is_err());
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let budget = Budget { time: Duration::ZERO, ..Budget::default() };
        let f = parse_modal("dia box p <-> dia box dia box p").unwrap();
        let v = decide(&f, &ModalSystem::named("KD45").unwrap(), &budget).unwrap();
        assert_eq!(v.kind(), VerdictKind::Unknown);
    }
}
