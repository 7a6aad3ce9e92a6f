//! Relational translation of modal formulas into first-order logic, frame
//! axioms for the normal systems, and problem assembly for the prover and
//! the model finder.

mod system;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::fol::{clausify, tptp_line, Clause, FiniteStructure, FolFormula as F, Role, Term};
use crate::formula::{KripkeModel, Modality, ModalFormula as M};

pub use system::{ModalSystem, Schema, SchemaSet};

/// Name of the constant standing for the actual world.
pub const REAL_WORLD: &str = "w0";
/// Name of the LTL successor function.
pub const SUCCESSOR: &str = "S";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("next-time operator in a modal-system problem")]
    NextTime,
    #[error("indexed modality `{0}` in a temporal problem")]
    IndexedModality(String),
    #[error("atom `{0}` clashes with an accessibility or successor symbol")]
    ReservedAtom(String),
    #[error("unknown modal system `{0}`")]
    UnknownSystem(String),
    #[error("bad schema string `{0}`; expected letters from D, T, B, 4, 5")]
    BadSchemas(String),
    #[error("formula is not of the form `dia box phi`")]
    NotDiaBox,
}

/// Accessibility predicate for a modality: `R` or `R_i`.
pub fn relation_symbol(index: &Modality) -> String {
    match index {
        None => "R".to_string(),
        Some(i) => format!("R_{i}"),
    }
}

/// Inverse of [`relation_symbol`].
pub fn modality_of_symbol(symbol: &str) -> Option<Modality> {
    if symbol == "R" {
        Some(None)
    } else {
        symbol.strip_prefix("R_").map(|i| Some(i.to_string()))
    }
}

fn check_atoms(phi: &M, temporal: bool) -> Result<(), TranslateError> {
    for a in phi.atoms() {
        if a == "R" || a.starts_with("R_") || (temporal && a == SUCCESSOR) {
            return Err(TranslateError::ReservedAtom(a));
        }
    }
    Ok(())
}

struct Translator {
    next_var: usize,
    taken: BTreeSet<String>,
    temporal: bool,
}

impl Translator {
    fn new(w: &Term, temporal: bool) -> Self {
        let mut vars = Vec::new();
        w.collect_vars(&mut vars);
        Translator { next_var: 0, taken: vars.into_iter().collect(), temporal }
    }

    fn fresh(&mut self) -> String {
        loop {
            self.next_var += 1;
            let v = format!("v{}", self.next_var);
            if !self.taken.contains(&v) {
                return v;
            }
        }
    }

    fn tr(&mut self, phi: &M, w: &Term) -> Result<F, TranslateError> {
        Ok(match phi {
            M::True => F::True,
            M::False => F::False,
            M::Atom(p) => F::pred(p.clone(), vec![w.clone()]),
            M::Not(a) => self.tr(a, w)?.not(),
            M::And(a, b) => self.tr(a, w)?.and(self.tr(b, w)?),
            M::Or(a, b) => self.tr(a, w)?.or(self.tr(b, w)?),
            M::Imp(a, b) => self.tr(a, w)?.implies(self.tr(b, w)?),
            M::Iff(a, b) => self.tr(a, w)?.iff(self.tr(b, w)?),
            M::Box(i, a) | M::Dia(i, a) => {
                if self.temporal {
                    if let Some(i) = i {
                        return Err(TranslateError::IndexedModality(i.clone()));
                    }
                }
                let v = self.fresh();
                let reach = F::pred(relation_symbol(i), vec![w.clone(), Term::var(v.clone())]);
                let body = self.tr(a, &Term::var(v.clone()))?;
                if matches!(phi, M::Box(..)) {
                    F::forall(v, reach.implies(body))
                } else {
                    F::exists(v, reach.and(body))
                }
            }
            M::Next(a) => {
                if !self.temporal {
                    return Err(TranslateError::NextTime);
                }
                self.tr(a, &Term::app(SUCCESSOR, vec![w.clone()]))?
            }
        })
    }
}

/// `Tr(phi, w)`: atoms become unary predicates over worlds and each box or
/// diamond quantifies a fresh world variable `v1, v2, ...` through `R`
/// (or `R_i` for index `i`).
pub fn translate(phi: &M, w: &Term) -> Result<F, TranslateError> {
    Translator::new(w, false).tr(phi, w)
}

/// `Tr` extended with `Tr(X psi, w) = Tr(psi, S(w))`.
pub fn translate_temporal(phi: &M, w: &Term) -> Result<F, TranslateError> {
    Translator::new(w, true).tr(phi, w)
}

/// Frame axioms of `system` for the default modality and every index in
/// `indices`, as a generating basis of each closed schema set.
pub fn frame_axioms(system: &ModalSystem, indices: &BTreeSet<Modality>) -> Vec<F> {
    let mut all: BTreeSet<Modality> = indices.clone();
    all.insert(None);
    let mut out = Vec::new();
    for i in &all {
        let rel = relation_symbol(i);
        out.extend(system.schemas_for(i).basis().iter().map(|s| s.axiom(&rel)));
    }
    out
}

/// Validity and countermodel questions for one goal in one system.
#[derive(Debug, Clone)]
pub struct TranslationProblem {
    pub goal: M,
    pub system: ModalSystem,
    pub axioms: Vec<F>,
    /// `Ax -> all w. Tr(goal, w)`
    pub validity_formula: F,
    /// Clauses of the negated validity formula.
    pub refutation_clauses: Vec<Clause>,
    /// Clauses of `Ax & Tr(~goal, w0)`.
    pub countermodel_clauses: Vec<Clause>,
}

impl TranslationProblem {
    /// The problem as TPTP: one axiom line per frame condition and the
    /// translated goal as conjecture.
    pub fn to_tptp(&self) -> String {
        let mut out = String::new();
        for (k, a) in self.axioms.iter().enumerate() {
            out.push_str(&tptp_line(&format!("frame_{k}"), Role::Axiom, a));
            out.push('\n');
        }
        let goal = match &self.validity_formula {
            F::Imp(_, g) => (**g).clone(),
            g => g.clone(),
        };
        out.push_str(&tptp_line("goal", Role::Conjecture, &goal));
        out.push('\n');
        out
    }
}

/// Builds the validity formula and both clause sets for `goal` in `system`.
pub fn assemble(goal: &M, system: &ModalSystem) -> Result<TranslationProblem, TranslateError> {
    if goal.has_next() {
        return Err(TranslateError::NextTime);
    }
    check_atoms(goal, false)?;
    let indices: BTreeSet<Modality> = goal.modalities();
    let axioms = frame_axioms(system, &indices);
    let body = F::forall("w", translate(goal, &Term::var("w"))?);
    let validity_formula = if axioms.is_empty() {
        body
    } else {
        F::conjunction(axioms.clone()).implies(body)
    };
    let refutation_clauses = clausify(&validity_formula.clone().not());
    let negated = translate(&goal.clone().not(), &Term::constant(REAL_WORLD))?;
    let countermodel_clauses = clausify(&F::conjunction(axioms.iter().cloned().chain([negated])));
    Ok(TranslationProblem {
        goal: goal.clone(),
        system: system.clone(),
        axioms,
        validity_formula,
        refutation_clauses,
        countermodel_clauses,
    })
}

/// Which implication of a split biconditional a sub-goal is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Whole,
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Whole => "whole",
            Direction::Forward => "->",
            Direction::Backward => "<-",
        })
    }
}

/// A top-level `A <-> B` becomes `A -> B` and `B -> A`; anything else is
/// left whole.
pub fn split_goal(goal: &M) -> Vec<(Direction, M)> {
    match goal {
        M::Iff(a, b) => vec![
            (Direction::Forward, (**a).clone().implies((**b).clone())),
            (Direction::Backward, (**b).clone().implies((**a).clone())),
        ],
        _ => vec![(Direction::Whole, goal.clone())],
    }
}

/// [`assemble`] applied to each direction of [`split_goal`].
pub fn assemble_split(
    goal: &M,
    system: &ModalSystem,
) -> Result<Vec<(Direction, TranslationProblem)>, TranslateError> {
    split_goal(goal)
        .into_iter()
        .map(|(d, g)| Ok((d, assemble(&g, system)?)))
        .collect()
}

/// `phi` is S5-satisfiable iff `dia box phi` is S4-satisfiable.
pub fn s5_to_s4(phi: &M) -> Result<M, TranslateError> {
    if let Some(Some(i)) = phi.modalities().into_iter().find(Option::is_some) {
        return Err(TranslateError::IndexedModality(i));
    }
    Ok(phi.clone().nec().pos())
}

/// The body `phi` of `dia box phi`. By the equivalence above, `dia box phi`
/// is S4-valid iff `phi` is S5-valid.
pub fn s4_to_s5(goal: &M) -> Result<M, TranslateError> {
    match goal {
        M::Dia(None, inner) => match &**inner {
            M::Box(None, phi) => {
                s5_to_s4(phi)?;
                Ok((**phi).clone())
            }
            _ => Err(TranslateError::NotDiaBox),
        },
        _ => Err(TranslateError::NotDiaBox),
    }
}

/// A satisfiability question for a next-time formula.
#[derive(Debug, Clone)]
pub struct LtlProblem {
    pub goal: M,
    /// Reflexive and transitive `R` plus `all x. R(x, S(x))`.
    pub axioms: Vec<F>,
    /// `Ax & Tr(goal, w0)`
    pub formula: F,
    pub clauses: Vec<Clause>,
}

pub fn ltl_axioms() -> Vec<F> {
    let step = F::forall(
        "x",
        F::pred("R", vec![Term::var("x"), Term::app(SUCCESSOR, vec![Term::var("x")])]),
    );
    vec![Schema::T.axiom("R"), Schema::Four.axiom("R"), step]
}

pub fn ltl_assemble(goal: &M) -> Result<LtlProblem, TranslateError> {
    if let Some(Some(i)) = goal.modalities().into_iter().find(Option::is_some) {
        return Err(TranslateError::IndexedModality(i));
    }
    check_atoms(goal, true)?;
    let axioms = ltl_axioms();
    let tr = translate_temporal(goal, &Term::constant(REAL_WORLD))?;
    let formula = F::conjunction(axioms.iter().cloned().chain([tr]));
    let clauses = clausify(&formula);
    Ok(LtlProblem { goal: goal.clone(), axioms, formula, clauses })
}

/// The first-order reading of a Kripke model: `R`/`R_i` tables, one unary
/// table per atom in `atoms` (false where the model is silent), `w0` as the
/// real world and `S` when the model has a successor function.
pub fn structure_of(model: &KripkeModel, atoms: &BTreeSet<String>) -> FiniteStructure {
    let n = model.worlds();
    let mut m = FiniteStructure::new(n);
    for (i, r) in model.relations() {
        let mut table = vec![false; n * n];
        for (a, b) in r.pairs() {
            table[a * n + b] = true;
        }
        m.set_predicate(relation_symbol(i), 2, table);
    }
    let mut names: BTreeSet<String> = atoms.clone();
    names.extend(model.valuation().map(|(p, _)| p.to_string()));
    for p in names {
        m.set_predicate(p.clone(), 1, (0..n).map(|w| model.holds(&p, w)).collect());
    }
    m.set_function(REAL_WORLD, 0, vec![model.real_world()]);
    if let Some(s) = model.successor() {
        m.set_function(SUCCESSOR, 1, s.to_vec());
    }
    m
}
