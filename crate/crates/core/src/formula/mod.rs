//! Propositional multimodal formulas with a next-time operator.
//!
//! The same AST serves the normal modal systems (indexed boxes and
//! diamonds) and the next-time fragment of linear temporal logic, where the
//! unindexed box and diamond read as "always" and "eventually".

mod eval;
mod kripke;
mod lasso;
mod macros;
mod parse;
mod print;

use std::collections::BTreeSet;

pub use eval::{eval_modal, EvalError};
pub use kripke::{
    is_euclidean, is_reflexive, is_serial, is_symmetric, is_transitive, KripkeError, KripkeModel,
    Relation,
};
pub use lasso::{eval_ltl_lasso, LassoWord, LtlError};
pub use macros::{Macro, MacroTable};
pub use parse::{parse_modal, ParseError, RESERVED_PREFIX};
pub use print::print_modal;

/// Label of a modal operator. `None` is the single default modality.
pub type Modality = Option<String>;

/// Abstract syntax of a modal / next-time formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalFormula {
    True,
    False,
    Atom(String),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Imp(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Box(Modality, Box<ModalFormula>),
    Dia(Modality, Box<ModalFormula>),
    Next(Box<ModalFormula>),
}

impl ModalFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        ModalFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        ModalFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        ModalFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        ModalFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        ModalFormula::Imp(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Self) -> Self {
        ModalFormula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Default-modality box.
    pub fn nec(self) -> Self {
        ModalFormula::Box(None, Box::new(self))
    }

    /// Default-modality diamond.
    pub fn pos(self) -> Self {
        ModalFormula::Dia(None, Box::new(self))
    }

    pub fn nec_in(self, index: impl Into<String>) -> Self {
        ModalFormula::Box(Some(index.into()), Box::new(self))
    }

    pub fn pos_in(self, index: impl Into<String>) -> Self {
        ModalFormula::Dia(Some(index.into()), Box::new(self))
    }

    pub fn next(self) -> Self {
        ModalFormula::Next(Box::new(self))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&ModalFormula> {
        match self {
            ModalFormula::True | ModalFormula::False | ModalFormula::Atom(_) => Vec::new(),
            ModalFormula::Not(a)
            | ModalFormula::Box(_, a)
            | ModalFormula::Dia(_, a)
            | ModalFormula::Next(a) => vec![a],
            ModalFormula::And(a, b)
            | ModalFormula::Or(a, b)
            | ModalFormula::Imp(a, b)
            | ModalFormula::Iff(a, b) => vec![a, b],
        }
    }

    /// Pre-order traversal.
    pub fn subformulas(&self) -> Vec<&ModalFormula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                ModalFormula::Atom(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    /// Modal indices occurring in the formula (`None` for the default one).
    pub fn modalities(&self) -> BTreeSet<Modality> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                ModalFormula::Box(i, _) | ModalFormula::Dia(i, _) => Some(i.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn has_next(&self) -> bool {
        self.subformulas()
            .into_iter()
            .any(|f| matches!(f, ModalFormula::Next(_)))
    }

    pub fn has_indexed_modality(&self) -> bool {
        self.modalities().iter().any(Option::is_some)
    }

    /// Maximal nesting of box, diamond and next.
    pub fn modal_depth(&self) -> usize {
        match self {
            ModalFormula::Box(_, a) | ModalFormula::Dia(_, a) | ModalFormula::Next(a) => {
                1 + a.modal_depth()
            }
            _ => self
                .children()
                .into_iter()
                .map(ModalFormula::modal_depth)
                .max()
                .unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.subformulas().len()
    }

    /// Replaces atoms by formulas; atoms absent from `map` are kept.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<ModalFormula>) -> ModalFormula {
        let sub = |f: &ModalFormula| Box::new(f.substitute(map));
        match self {
            ModalFormula::Atom(p) => map(p).unwrap_or_else(|| self.clone()),
            ModalFormula::True | ModalFormula::False => self.clone(),
            ModalFormula::Not(a) => ModalFormula::Not(sub(a)),
            ModalFormula::And(a, b) => ModalFormula::And(sub(a), sub(b)),
            ModalFormula::Or(a, b) => ModalFormula::Or(sub(a), sub(b)),
            ModalFormula::Imp(a, b) => ModalFormula::Imp(sub(a), sub(b)),
            ModalFormula::Iff(a, b) => ModalFormula::Iff(sub(a), sub(b)),
            ModalFormula::Box(i, a) => ModalFormula::Box(i.clone(), sub(a)),
            ModalFormula::Dia(i, a) => ModalFormula::Dia(i.clone(), sub(a)),
            ModalFormula::Next(a) => ModalFormula::Next(sub(a)),
        }
    }
}
