use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use super::dpll::{Dpll, DpllResult};
use super::ground::{decode, ground_with, Cell, GroundError, PropCnf};
use crate::fol::{eval_clauses, flatten, Clause, FiniteStructure, FlatClause, Signature};

/// Default largest domain size tried.
pub const DEFAULT_N_MAX: usize = 6;

/// DPLL work per [`ModelSearch::run`] slice.
pub const DEFAULT_QUANTUM: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSearchResult {
    /// A model of the least size admitting one, checked against the input.
    Model { structure: FiniteStructure, size: usize },
    /// Every size from 1 to the bound is unsatisfiable.
    NoModelUpTo(usize),
    Cancelled(usize),
}

/// One domain size the search finished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub size: usize,
    pub vars: usize,
    pub clauses: usize,
    pub decisions: u64,
    pub conflicts: u64,
    /// Models found at this size and then rejected.
    pub rejected: usize,
    pub satisfiable: bool,
}

struct Current {
    cnf: PropCnf,
    solver: Dpll,
    rejected: usize,
}

/// Smallest-model search as a resumable state machine: domain sizes
/// `1..=n_max` in order, one grounding and one DPLL run per size.
pub struct ModelSearch {
    clauses: Vec<Clause>,
    flat: Vec<FlatClause>,
    sig: Signature,
    n: usize,
    n_max: usize,
    current: Option<Current>,
    last: Option<Vec<bool>>,
    reports: Vec<SizeReport>,
    result: Option<ModelSearchResult>,
    elapsed: Duration,
    ground_error: Option<GroundError>,
}

impl ModelSearch {
    pub fn new(clauses: &[Clause], n_max: usize) -> Self {
        ModelSearch {
            clauses: clauses.to_vec(),
            flat: flatten(clauses),
            sig: Signature::of_clauses(clauses),
            n: 1,
            n_max: n_max.max(1),
            current: None,
            last: None,
            reports: Vec::new(),
            result: None,
            elapsed: Duration::ZERO,
            ground_error: None,
        }
    }

    pub fn reports(&self) -> &[SizeReport] {
        &self.reports
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    /// Size under search, or reached.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Grounding failure that cut the search short, if any.
    pub fn ground_error(&self) -> Option<&GroundError> {
        self.ground_error.as_ref()
    }

    pub fn outcome(&self) -> Option<&ModelSearchResult> {
        self.result.as_ref()
    }

    /// Ground CNF of the current size, once grounded.
    pub fn cnf(&self) -> Option<&PropCnf> {
        self.current.as_ref().map(|c| &c.cnf)
    }

    fn finish_size(&mut self, satisfiable: bool) {
        if let Some(c) = &self.current {
            let s = c.solver.stats();
            self.reports.push(SizeReport {
                size: self.n,
                vars: c.cnf.num_vars,
                clauses: c.cnf.clauses.len(),
                decisions: s.decisions,
                conflicts: s.conflicts,
                rejected: c.rejected,
                satisfiable,
            });
        }
    }

    /// About `budget` units of DPLL work, or one grounding. `Some` once
    /// finished.
    pub fn step(&mut self, budget: u64) -> Option<ModelSearchResult> {
        if let Some(r) = &self.result {
            return Some(r.clone());
        }
        let started = Instant::now();
        let out = self.advance(budget);
        self.elapsed += started.elapsed();
        if let Some(r) = &out {
            self.result = Some(r.clone());
        }
        out
    }

    fn advance(&mut self, budget: u64) -> Option<ModelSearchResult> {
        let Some(cur) = &mut self.current else {
            if self.n > self.n_max {
                return Some(ModelSearchResult::NoModelUpTo(self.n_max));
            }
            match ground_with(&self.flat, self.n, &self.sig) {
                Ok(cnf) => {
                    let solver = Dpll::new(cnf.num_vars, &cnf.clauses);
                    self.current = Some(Current { cnf, solver, rejected: 0 });
                    return None;
                }
                Err(e) => {
                    self.ground_error = Some(e);
                    return Some(ModelSearchResult::NoModelUpTo(self.n - 1));
                }
            }
        };
        match cur.solver.step(budget)? {
            DpllResult::Sat(a) => {
                let structure = decode(&a, &cur.cnf).expect("exactly-one constraints make every cell functional");
                assert!(
                    eval_clauses(&self.clauses, &structure).unwrap_or(false),
                    "decoded structure must satisfy the input clauses"
                );
                self.last = Some(a);
                Some(ModelSearchResult::Model { structure, size: self.n })
            }
            DpllResult::Unsat => {
                self.finish_size(false);
                self.current = None;
                self.last = None;
                self.n += 1;
                None
            }
        }
    }

    /// Rejects the last model and every model agreeing with it on the
    /// cells selected by `keep`, then resumes at the same size.
    pub fn reject(&mut self, keep: &dyn Fn(&Cell) -> bool) {
        let (Some(a), Some(cur)) = (self.last.take(), self.current.as_mut()) else {
            return;
        };
        let block: Vec<i32> = cur
            .cnf
            .cells()
            .filter(|(_, c)| keep(c))
            .map(|(v, _)| if a[v as usize - 1] { -(v as i32) } else { v as i32 })
            .collect();
        cur.rejected += 1;
        cur.solver.add_clause(&block);
        self.result = None;
    }

    /// Runs to completion, polling `cancel` between work slices.
    pub fn run(&mut self, cancel: Option<&AtomicBool>) -> ModelSearchResult {
        loop {
            if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                let r = ModelSearchResult::Cancelled(self.n);
                self.result = Some(r.clone());
                return r;
            }
            if let Some(r) = self.step(DEFAULT_QUANTUM) {
                return r;
            }
        }
    }
}

pub fn find_smallest_model(clauses: &[Clause], n_max: usize, cancel: Option<&AtomicBool>) -> ModelSearchResult {
    ModelSearch::new(clauses, n_max).run(cancel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_clauses;

    #[test]
    fn least_size_is_found() {
        // irreflexive and serial needs two elements
        let cs = parse_clauses("~R(x,x)\nR(x, f(x))").unwrap();
        let mut s = ModelSearch::new(&cs, 4);
        let r = s.run(None);
        assert!(matches!(r, ModelSearchResult::Model { size: 2, .. }));
        assert_eq!(s.reports().len(), 1);
        assert!(!s.reports()[0].satisfiable);
    }

    #[test]
    fn unsatisfiable_up_to_bound() {
        let cs = parse_clauses("p(x)\n~p(c)").unwrap();
        assert_eq!(find_smallest_model(&cs, 3, None), ModelSearchResult::NoModelUpTo(3));
    }

    #[test]
    fn empty_clause_set_has_a_one_element_model() {
        assert!(matches!(find_smallest_model(&[], 2, None), ModelSearchResult::Model { size: 1, .. }));
    }

    #[test]
    fn cancellation_is_reported() {
        let flag = AtomicBool::new(true);
        let cs = parse_clauses("p(c)").unwrap();
        assert_eq!(find_smallest_model(&cs, 2, Some(&flag)), ModelSearchResult::Cancelled(1));
    }

    #[test]
    fn rejection_moves_on_to_other_models() {
        let cs = parse_clauses("p(c) | q(c)").unwrap();
        let mut s = ModelSearch::new(&cs, 2);
        let mut seen = 0;
        while let ModelSearchResult::Model { size: 1, .. } = s.run(None) {
            seen += 1;
            s.reject(&|c| c.symbol() != "c");
        }
        // three p/q valuations at size 1, then size 2 models exist again
        assert_eq!(seen, 3);
        assert!(matches!(s.outcome(), Some(ModelSearchResult::Model { size: 2, .. })));
    }
}
