//! First-order logic without equality: syntax, the clausal normal-form
//! pipeline, flattening for the model finder, and a Tarskian evaluator
//! over finite structures.

mod cnf;
mod flatten;
mod nnf;
mod parse;
mod skolem;
mod structure;
mod tptp;

use std::fmt;

pub use cnf::{clausify, clausify_with, Clause, ClausifyOptions, Literal};
pub use flatten::{flatten, FlatClause, FlatLiteral};
pub use nnf::to_nnf;
pub use parse::{parse_clause, parse_clauses, parse_fol, FolParseError};
pub use skolem::{rectify, skolemize, SymbolGen, SKOLEM_PREFIX};
pub use structure::{
    eval_clause, eval_clauses, eval_flat_clauses, eval_fol, for_each_structure, FiniteStructure,
    FolEvalError, Signature, Table,
};
pub use tptp::{tptp_formula, tptp_line, Role};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replaces variables by `map`; unmapped variables are kept.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FolFormula {
    True,
    False,
    Pred(String, Vec<Term>),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Imp(Box<FolFormula>, Box<FolFormula>),
    Iff(Box<FolFormula>, Box<FolFormula>),
    Forall(String, Box<FolFormula>),
    Exists(String, Box<FolFormula>),
}

impl FolFormula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        FolFormula::Pred(name.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        FolFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        FolFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        FolFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        FolFormula::Imp(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Self) -> Self {
        FolFormula::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn forall(var: impl Into<String>, body: Self) -> Self {
        FolFormula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Self) -> Self {
        FolFormula::Exists(var.into(), Box::new(body))
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = FolFormula>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return FolFormula::True;
        };
        while let Some(p) = parts.pop() {
            acc = p.and(acc);
        }
        acc
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            FolFormula::True | FolFormula::False => {}
            FolFormula::Pred(_, args) => {
                let mut vs = Vec::new();
                args.iter().for_each(|a| a.collect_vars(&mut vs));
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            FolFormula::Not(a) => a.collect_free(bound, out),
            FolFormula::And(a, b)
            | FolFormula::Or(a, b)
            | FolFormula::Imp(a, b)
            | FolFormula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FolFormula::Forall(v, a) | FolFormula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Bound variable names in binding order, with repetitions.
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let FolFormula::Forall(v, _) | FolFormula::Exists(v, _) = f {
                out.push(v.clone());
            }
        });
        out
    }

    /// Pre-order visit of every subformula.
    pub fn visit(&self, visitor: &mut dyn FnMut(&FolFormula)) {
        visitor(self);
        match self {
            FolFormula::True | FolFormula::False | FolFormula::Pred(..) => {}
            FolFormula::Not(a) | FolFormula::Forall(_, a) | FolFormula::Exists(_, a) => a.visit(visitor),
            FolFormula::And(a, b)
            | FolFormula::Or(a, b)
            | FolFormula::Imp(a, b)
            | FolFormula::Iff(a, b) => {
                a.visit(visitor);
                b.visit(visitor);
            }
        }
    }

    /// Substitutes terms for free variables. Callers must ensure the terms'
    /// variables are not captured (rectified input suffices).
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Term>) -> FolFormula {
        let sub = |f: &FolFormula| Box::new(f.substitute(map));
        match self {
            FolFormula::True | FolFormula::False => self.clone(),
            FolFormula::Pred(p, args) => {
                FolFormula::Pred(p.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
            FolFormula::Not(a) => FolFormula::Not(sub(a)),
            FolFormula::And(a, b) => FolFormula::And(sub(a), sub(b)),
            FolFormula::Or(a, b) => FolFormula::Or(sub(a), sub(b)),
            FolFormula::Imp(a, b) => FolFormula::Imp(sub(a), sub(b)),
            FolFormula::Iff(a, b) => FolFormula::Iff(sub(a), sub(b)),
            FolFormula::Forall(v, a) | FolFormula::Exists(v, a) => {
                let inner = |name: &str| if name == v { None } else { map(name) };
                let body = Box::new(a.substitute(&inner));
                match self {
                    FolFormula::Forall(..) => FolFormula::Forall(v.clone(), body),
                    _ => FolFormula::Exists(v.clone(), body),
                }
            }
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &FolFormula) -> bool {
        alpha(self, other, &mut Vec::new())
    }
}

fn alpha_term(a: &Term, b: &Term, env: &[(String, String)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let bx = env.iter().rev().find(|(l, _)| l == x);
            let by = env.iter().rev().find(|(_, r)| r == y);
            match (bx, by) {
                (Some((_, r)), Some((l, _))) => r == y && l == x,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| alpha_term(s, t, env))
        }
        _ => false,
    }
}

fn alpha(a: &FolFormula, b: &FolFormula, env: &mut Vec<(String, String)>) -> bool {
    use FolFormula as F;
    match (a, b) {
        (F::True, F::True) | (F::False, F::False) => true,
        (F::Pred(p, xs), F::Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| alpha_term(s, t, env))
        }
        (F::Not(x), F::Not(y)) => alpha(x, y, env),
        (F::And(a1, a2), F::And(b1, b2))
        | (F::Or(a1, a2), F::Or(b1, b2))
        | (F::Imp(a1, a2), F::Imp(b1, b2))
        | (F::Iff(a1, a2), F::Iff(b1, b2)) => alpha(a1, b1, env) && alpha(a2, b2, env),
        (F::Forall(x, a1), F::Forall(y, b1)) | (F::Exists(x, a1), F::Exists(y, b1)) => {
            env.push((x.clone(), y.clone()));
            let r = alpha(a1, b1, env);
            env.pop();
            r
        }
        _ => false,
    }
}

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;

fn precedence(f: &FolFormula) -> u8 {
    match f {
        FolFormula::Iff(..) => IFF,
        FolFormula::Imp(..) => IMP,
        FolFormula::Or(..) => OR,
        FolFormula::And(..) => AND,
        _ => PREFIX,
    }
}

fn write_at(f: &FolFormula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(f) < min {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

/// ASCII rendering readable by [`parse_fol`]: `all x.` and `ex x.` bind as
/// tightly as `~`.
impl fmt::Display for FolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |a: &FolFormula, op: &str, b: &FolFormula, l: u8, r: u8, f: &mut fmt::Formatter<'_>| {
            write_at(a, l, f)?;
            write!(f, " {op} ")?;
            write_at(b, r, f)
        };
        match self {
            FolFormula::True => f.write_str("true"),
            FolFormula::False => f.write_str("false"),
            FolFormula::Pred(p, args) if args.is_empty() => f.write_str(p),
            FolFormula::Pred(p, args) => write!(f, "{}", Term::App(p.clone(), args.clone())),
            FolFormula::Not(a) => {
                f.write_str("~")?;
                write_at(a, PREFIX, f)
            }
            FolFormula::And(a, b) => bin(a, "&", b, AND, PREFIX, f),
            FolFormula::Or(a, b) => bin(a, "|", b, OR, AND, f),
            FolFormula::Imp(a, b) => bin(a, "->", b, OR, IMP, f),
            FolFormula::Iff(a, b) => bin(a, "<->", b, IFF, IMP, f),
            FolFormula::Forall(v, a) => {
                write!(f, "all {v}. ")?;
                write_at(a, PREFIX, f)
            }
            FolFormula::Exists(v, a) => {
                write!(f, "ex {v}. ")?;
                write_at(a, PREFIX, f)
            }
        }
    }
}
