//! Satisfiability of next-time formulas over ultimately periodic words.

use std::time::{Duration, Instant};

use super::race::{race, Acceptance, ProcessReport, RaceOutcome};
use super::{extract_lasso, Budget};
use crate::fol::FiniteStructure;
use crate::formula::{eval_ltl_lasso, print_modal, LassoWord, ModalFormula};
use crate::model::Cell;
use crate::prover::Proof;
use crate::translate::{ltl_assemble, TranslateError, REAL_WORLD, SUCCESSOR};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtlOutcome {
    /// A lasso word satisfying the formula, read from a model of `size`.
    Satisfiable { lasso: LassoWord, structure: FiniteStructure, size: usize },
    Unsatisfiable(Proof),
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtlVerdict {
    pub goal: ModalFormula,
    pub outcome: LtlOutcome,
    pub report: ProcessReport,
    pub elapsed: Duration,
}

impl LtlVerdict {
    pub fn headline(&self) -> String {
        match &self.outcome {
            LtlOutcome::Satisfiable { size, .. } => {
                format!("Satisfiable ({size} state{})", if *size == 1 { "" } else { "s" })
            }
            LtlOutcome::Unsatisfiable(_) => "Unsatisfiable".to_string(),
            LtlOutcome::Unknown(why) => format!("Unknown ({why})"),
        }
    }

    pub fn report(&self) -> String {
        let mut out = format!("outcome: {}\nformula: {}\n", self.headline(), print_modal(&self.goal));
        super::write_process(&mut out, &self.report);
        out.push_str(&format!("elapsed: {:.3}s\n", self.elapsed.as_secs_f64()));
        match &self.outcome {
            LtlOutcome::Satisfiable { lasso, .. } => out.push_str(&format!("lasso: {lasso}\n")),
            LtlOutcome::Unsatisfiable(p) => {
                out.push_str("proof:\n");
                out.push_str(&p.to_string());
            }
            LtlOutcome::Unknown(_) => {}
        }
        out
    }
}

/// Decides satisfiability of `goal` read over `S`-successor lassos. A
/// refutation of the translation proves unsatisfiability, since the
/// reachability closure of any satisfying word models it. A finite model
/// is accepted only when the lasso read along `S` from `w0` satisfies the
/// goal under direct evaluation; otherwise every model with the same
/// successor table, real world and valuation is blocked and search resumes.
pub fn ltl_decide(goal: &ModalFormula, budget: &Budget) -> Result<LtlVerdict, TranslateError> {
    let start = Instant::now();
    let problem = ltl_assemble(goal)?;
    let atoms = goal.atoms();
    let accept = |m: &FiniteStructure| {
        let w0 = m.apply(REAL_WORLD, &[]).unwrap_or(0);
        extract_lasso(m, w0, &atoms)
            .ok()
            .and_then(|w| eval_ltl_lasso(goal, &w).ok())
            .unwrap_or(false)
    };
    let keep = |c: &Cell| match c {
        Cell::Pred { pred, .. } => atoms.contains(pred),
        Cell::Fun { fun, .. } => fun == SUCCESSOR || fun == REAL_WORLD,
    };
    let acc = Acceptance { accept: &accept, keep: &keep };
    let r = race(&problem.clauses, &problem.clauses, budget, &acc);
    let outcome = match r.outcome {
        RaceOutcome::Refuted(p) => LtlOutcome::Unsatisfiable(p),
        RaceOutcome::Model { structure, size } => {
            let w0 = structure.apply(REAL_WORLD, &[]).unwrap_or(0);
            let lasso = extract_lasso(&structure, w0, &atoms).expect("accepted model has a successor table");
            LtlOutcome::Satisfiable { lasso, structure, size }
        }
        RaceOutcome::Undecided if r.report.timed_out => {
            LtlOutcome::Unknown(format!("time budget of {}s exhausted", budget.time.as_secs_f64()))
        }
        RaceOutcome::Undecided => LtlOutcome::Unknown(format!(
            "prover {:?}; model search {:?} with {} lassos rejected",
            r.report.prover_end, r.report.model_end, r.report.rejected
        )),
    };
    Ok(LtlVerdict { goal: goal.clone(), outcome, report: r.report, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_modal;

    fn run(f: &str) -> LtlVerdict {
        ltl_decide(&parse_modal(f).unwrap(), &Budget::default().with_time(Duration::from_secs(20))).unwrap()
    }

    #[test]
    fn eventually_always_has_a_one_state_lasso() {
        let v = run("X X box p");
        let LtlOutcome::Satisfiable { lasso, size, .. } = &v.outcome else { panic!("{}", v.report()) };
        assert_eq!(*size, 1);
        assert!(eval_ltl_lasso(&v.goal, lasso).unwrap());
    }

    #[test]
    fn contradictory_next_is_unsatisfiable() {
        let v = run("X p & X ~p");
        assert!(matches!(v.outcome, LtlOutcome::Unsatisfiable(_)), "{}", v.report());
    }

    #[test]
    fn alternation_needs_two_states() {
        let v = run("p & box (p -> X ~p) & box (~p -> X p)");
        let LtlOutcome::Satisfiable { lasso, size, .. } = &v.outcome else { panic!("{}", v.report()) };
        assert_eq!(*size, 2);
        assert!(eval_ltl_lasso(&v.goal, lasso).unwrap());
    }

    #[test]
    fn indexed_modalities_are_rejected() {
        assert!(ltl_decide(&parse_modal("[a] p").unwrap(), &Budget::default()).is_err());
    }
}
