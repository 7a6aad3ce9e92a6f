use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use super::{Clause, FlatClause, FlatLiteral, FolFormula as F, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolEvalError {
    #[error("predicate `{0}` is not interpreted")]
    UnknownPredicate(String),
    #[error("function `{0}` is not interpreted")]
    UnknownFunction(String),
    #[error("variable `{0}` is unassigned")]
    UnassignedVariable(String),
    #[error("symbol `{name}` used with arity {used}, interpreted with arity {table}")]
    ArityMismatch { name: String, used: usize, table: usize },
}

/// A total table over `size^arity` argument tuples, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table<T> {
    pub arity: usize,
    pub values: Vec<T>,
}

impl<T: Copy> Table<T> {
    pub fn get(&self, args: &[usize], size: usize) -> T {
        self.values[tuple_index(args, size)]
    }
}

pub(crate) fn tuple_index(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// Decodes a row-major index back into an argument tuple.
pub(crate) fn tuple_of(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// A finite first-order interpretation over the domain `0..size`.
/// Constants are nullary functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    size: usize,
    preds: BTreeMap<String, Table<bool>>,
    funs: BTreeMap<String, Table<usize>>,
}

impl FiniteStructure {
    pub fn new(size: usize) -> Self {
        assert!(size > 0, "empty domain");
        FiniteStructure { size, preds: BTreeMap::new(), funs: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Installs a predicate table; panics if `values` is not total.
    pub fn set_predicate(&mut self, name: impl Into<String>, arity: usize, values: Vec<bool>) {
        assert_eq!(values.len(), self.size.pow(arity as u32), "predicate table not total");
        self.preds.insert(name.into(), Table { arity, values });
    }

    /// Installs a function table; panics unless total and in range.
    pub fn set_function(&mut self, name: impl Into<String>, arity: usize, values: Vec<usize>) {
        assert_eq!(values.len(), self.size.pow(arity as u32), "function table not total");
        assert!(values.iter().all(|&v| v < self.size), "function value out of range");
        self.funs.insert(name.into(), Table { arity, values });
    }

    pub fn predicate(&self, name: &str) -> Option<&Table<bool>> {
        self.preds.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&Table<usize>> {
        self.funs.get(name)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, &Table<bool>)> {
        self.preds.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &Table<usize>)> {
        self.funs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn holds(&self, pred: &str, args: &[usize]) -> Result<bool, FolEvalError> {
        let t = self
            .preds
            .get(pred)
            .ok_or_else(|| FolEvalError::UnknownPredicate(pred.to_string()))?;
        if t.arity != args.len() {
            return Err(FolEvalError::ArityMismatch { name: pred.into(), used: args.len(), table: t.arity });
        }
        Ok(t.get(args, self.size))
    }

    pub fn apply(&self, fun: &str, args: &[usize]) -> Result<usize, FolEvalError> {
        let t = self
            .funs
            .get(fun)
            .ok_or_else(|| FolEvalError::UnknownFunction(fun.to_string()))?;
        if t.arity != args.len() {
            return Err(FolEvalError::ArityMismatch { name: fun.into(), used: args.len(), table: t.arity });
        }
        Ok(t.get(args, self.size))
    }

    pub fn eval_term(&self, t: &Term, env: &dyn Fn(&str) -> Option<usize>) -> Result<usize, FolEvalError> {
        match t {
            Term::Var(v) => env(v).ok_or_else(|| FolEvalError::UnassignedVariable(v.clone())),
            Term::Const(c) => self.apply(c, &[]),
            Term::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval_term(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(f, &vals)
            }
        }
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.size)?;
        for (name, t) in &self.funs {
            for (i, v) in t.values.iter().enumerate() {
                let args = tuple_of(i, t.arity, self.size);
                writeln!(f, "{name}{args:?} = {v}")?;
            }
        }
        for (name, t) in &self.preds {
            let rows: Vec<String> = t
                .values
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| format!("{:?}", tuple_of(i, t.arity, self.size)))
                .collect();
            writeln!(f, "{name} = {{{}}}", rows.join(", "))?;
        }
        Ok(())
    }
}

/// Tarskian truth of `f` under `assignment`; quantifiers range over the
/// whole domain.
pub fn eval_fol(
    f: &F,
    m: &FiniteStructure,
    assignment: &HashMap<String, usize>,
) -> Result<bool, FolEvalError> {
    let mut env: Vec<(String, usize)> = Vec::new();
    eval(f, m, assignment, &mut env)
}

fn eval(
    f: &F,
    m: &FiniteStructure,
    base: &HashMap<String, usize>,
    env: &mut Vec<(String, usize)>,
) -> Result<bool, FolEvalError> {
    Ok(match f {
        F::True => true,
        F::False => false,
        F::Pred(p, args) => {
            let lookup = |v: &str| {
                env.iter()
                    .rev()
                    .find(|(n, _)| n == v)
                    .map(|(_, x)| *x)
                    .or_else(|| base.get(v).copied())
            };
            let vals = args
                .iter()
                .map(|a| m.eval_term(a, &lookup))
                .collect::<Result<Vec<_>, _>>()?;
            m.holds(p, &vals)?
        }
        F::Not(a) => !eval(a, m, base, env)?,
        F::And(a, b) => eval(a, m, base, env)? && eval(b, m, base, env)?,
        F::Or(a, b) => eval(a, m, base, env)? || eval(b, m, base, env)?,
        F::Imp(a, b) => !eval(a, m, base, env)? || eval(b, m, base, env)?,
        F::Iff(a, b) => eval(a, m, base, env)? == eval(b, m, base, env)?,
        F::Forall(v, a) | F::Exists(v, a) => {
            let universal = matches!(f, F::Forall(..));
            for d in 0..m.size() {
                env.push((v.clone(), d));
                let r = eval(a, m, base, env);
                env.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// Calls `visit` with every assignment of `vars` into `0..size`.
fn for_each_assignment(vars: usize, size: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let mut vals = vec![0; vars];
    loop {
        if !visit(&vals) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == vars {
                return true;
            }
            vals[i] += 1;
            if vals[i] < size {
                break;
            }
            vals[i] = 0;
            i += 1;
        }
    }
}

/// Truth of the universal closure of `c`.
pub fn eval_clause(c: &Clause, m: &FiniteStructure) -> Result<bool, FolEvalError> {
    let vars = c.variables();
    let mut err = None;
    let ok = for_each_assignment(vars.len(), m.size(), &mut |vals| {
        let env = |v: &str| vars.iter().position(|x| x == v).map(|i| vals[i]);
        let mut sat = false;
        for l in &c.literals {
            let args: Result<Vec<_>, _> = l.args.iter().map(|a| m.eval_term(a, &env)).collect();
            match args.and_then(|a| m.holds(&l.pred, &a)) {
                Ok(b) if b == l.positive => {
                    sat = true;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
        }
        sat
    });
    match err {
        Some(e) => Err(e),
        None => Ok(ok),
    }
}

pub fn eval_clauses(cs: &[Clause], m: &FiniteStructure) -> Result<bool, FolEvalError> {
    for c in cs {
        if !eval_clause(c, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn eval_flat_clauses(cs: &[FlatClause], m: &FiniteStructure) -> Result<bool, FolEvalError> {
    for c in cs {
        let vars = c.variables();
        let mut err = None;
        let ok = for_each_assignment(vars.len(), m.size(), &mut |vals| {
            let val = |v: &String| vals[vars.iter().position(|x| x == v).expect("clause variable")];
            let args = |a: &[String]| a.iter().map(val).collect::<Vec<_>>();
            for l in &c.literals {
                let r = match l {
                    FlatLiteral::Pred { positive, pred, args: a } => {
                        m.holds(pred, &args(a)).map(|b| b == *positive)
                    }
                    FlatLiteral::FunNeq { fun, args: a, result } => {
                        m.apply(fun, &args(a)).map(|v| v != val(result))
                    }
                };
                match r {
                    Ok(true) => return true,
                    Ok(false) => {}
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                }
            }
            false
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Predicate and function symbols with their arities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub preds: BTreeMap<String, usize>,
    pub funs: BTreeMap<String, usize>,
}

impl Signature {
    fn add_term(&mut self, t: &Term) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                self.funs.insert(c.clone(), 0);
            }
            Term::App(g, args) => {
                self.funs.insert(g.clone(), args.len());
                args.iter().for_each(|a| self.add_term(a));
            }
        }
    }

    pub fn of_formula(f: &F) -> Self {
        let mut s = Signature::default();
        f.visit(&mut |g| {
            if let F::Pred(p, args) = g {
                s.preds.insert(p.clone(), args.len());
                args.iter().for_each(|a| s.add_term(a));
            }
        });
        s
    }

    pub fn of_clauses(cs: &[Clause]) -> Self {
        let mut s = Signature::default();
        for l in cs.iter().flat_map(|c| &c.literals) {
            s.preds.insert(l.pred.clone(), l.args.len());
            l.args.iter().for_each(|a| s.add_term(a));
        }
        s
    }

    pub fn merge(&mut self, other: &Signature) {
        self.preds.extend(other.preds.iter().map(|(k, v)| (k.clone(), *v)));
        self.funs.extend(other.funs.iter().map(|(k, v)| (k.clone(), *v)));
    }

    /// Number of structures of domain size `n` over this signature.
    pub fn structure_count(&self, n: usize) -> f64 {
        let mut count = 1.0f64;
        for &a in self.preds.values() {
            count *= 2f64.powf(n.pow(a as u32) as f64);
        }
        for &a in self.funs.values() {
            count *= (n as f64).powf(n.pow(a as u32) as f64);
        }
        count
    }
}

/// Exhaustively enumerates every structure of size `n` over `sig`, stopping
/// early when `visit` returns `false`. Returns whether enumeration finished.
pub fn for_each_structure(
    sig: &Signature,
    n: usize,
    visit: &mut dyn FnMut(&FiniteStructure) -> bool,
) -> bool {
    let mut m = FiniteStructure::new(n);
    for (p, &a) in &sig.preds {
        m.set_predicate(p.clone(), a, vec![false; n.pow(a as u32)]);
    }
    for (g, &a) in &sig.funs {
        m.set_function(g.clone(), a, vec![0; n.pow(a as u32)]);
    }
    let pred_names: Vec<String> = sig.preds.keys().cloned().collect();
    let fun_names: Vec<String> = sig.funs.keys().cloned().collect();
    loop {
        if !visit(&m) {
            return false;
        }
        // odometer: predicates first, then functions
        let mut carried = true;
        'outer: for p in &pred_names {
            let t = m.preds.get_mut(p).expect("table");
            for v in t.values.iter_mut() {
                if *v {
                    *v = false;
                } else {
                    *v = true;
                    carried = false;
                    break 'outer;
                }
            }
        }
        if carried {
            'outer2: for g in &fun_names {
                let t = m.funs.get_mut(g).expect("table");
                for v in t.values.iter_mut() {
                    *v += 1;
                    if *v < n {
                        carried = false;
                        break 'outer2;
                    }
                    *v = 0;
                }
            }
        }
        if carried {
            return true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{flatten, parse_clause, parse_fol};

    fn identity2() -> FiniteStructure {
        let mut m = FiniteStructure::new(2);
        m.set_predicate("R", 2, vec![true, false, false, true]);
        m
    }

    #[test]
    fn reflexive_on_identity() {
        let f = parse_fol("all x. R(x,x)").unwrap();
        assert!(eval_fol(&f, &identity2(), &HashMap::new()).unwrap());
        let g = parse_fol("all x. ex y. (R(x,y) & ~R(y,x))").unwrap();
        assert!(!eval_fol(&g, &identity2(), &HashMap::new()).unwrap());
    }

    #[test]
    fn empty_predicate_has_no_witness() {
        let mut m = FiniteStructure::new(1);
        m.set_predicate("P", 1, vec![false]);
        let f = parse_fol("ex w. P(w)").unwrap();
        assert!(!eval_fol(&f, &m, &HashMap::new()).unwrap());
    }

    #[test]
    fn errors_for_missing_symbols() {
        let f = parse_fol("Q(c)").unwrap();
        assert_eq!(
            eval_fol(&f, &identity2(), &HashMap::new()),
            Err(FolEvalError::UnknownFunction("c".into()))
        );
        let g = parse_fol("all x. Q(x)").unwrap();
        assert_eq!(
            eval_fol(&g, &identity2(), &HashMap::new()),
            Err(FolEvalError::UnknownPredicate("Q".into()))
        );
    }

    #[test]
    fn clause_and_flat_evaluation_agree() {
        let c = parse_clause("R(x, f(x))").unwrap();
        let flat = flatten(std::slice::from_ref(&c));
        let mut sig = Signature::of_clauses(std::slice::from_ref(&c));
        sig.preds.insert("R".into(), 2);
        let mut models = 0;
        for_each_structure(&sig, 2, &mut |m| {
            let a = eval_clause(&c, m).unwrap();
            assert_eq!(a, eval_flat_clauses(&flat, m).unwrap());
            models += a as usize;
            true
        });
        // f has 4 tables, R 16; a model needs R(i, f(i)) for both i
        assert_eq!(models, 4 * 4);
    }

    #[test]
    fn enumeration_counts() {
        let mut sig = Signature::default();
        sig.preds.insert("p".into(), 1);
        sig.funs.insert("c".into(), 0);
        let mut seen = 0;
        assert!(for_each_structure(&sig, 3, &mut |_| {
            seen += 1;
            true
        }));
        assert_eq!(seen, 8 * 3);
        assert_eq!(sig.structure_count(3), 24.0);
    }
}
