use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::fol::{FiniteStructure, FlatClause, FlatLiteral, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("symbol `{0}` is used with different arities")]
    Arity(String),
    #[error("grounding would exceed {0} clauses")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("assignment has {found} values, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("function cell {fun}{args:?} has {count} values")]
    NotFunctional { fun: String, args: Vec<usize>, count: usize },
}

/// What a propositional variable stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    /// `pred(args)` holds.
    Pred { pred: String, args: Vec<usize> },
    /// `fun(args) = value`.
    Fun { fun: String, args: Vec<usize>, value: usize },
}

impl Cell {
    pub fn symbol(&self) -> &str {
        match self {
            Cell::Pred { pred, .. } => pred,
            Cell::Fun { fun, .. } => fun,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |args: &[usize]| args.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            Cell::Pred { pred, args } => write!(f, "{pred}({})", tuple(args)),
            Cell::Fun { fun, args, value } => write!(f, "{fun}({})={value}", tuple(args)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Block {
    name: String,
    arity: usize,
    /// First variable of the block, 1-based.
    base: u32,
}

/// Ground clauses over a fixed domain size. Variables are laid out as
/// consecutive blocks: every predicate cell, then every function cell and
/// value pair, in symbol order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropCnf {
    pub size: usize,
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    preds: Vec<Block>,
    funs: Vec<Block>,
}

/// Guard against runaway grounding.
pub const MAX_GROUND_CLAUSES: usize = 20_000_000;

fn tuple_index(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn tuple_of(mut index: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

impl PropCnf {
    fn pred_var(&self, p: usize, args: &[usize]) -> u32 {
        self.preds[p].base + tuple_index(args, self.size) as u32
    }

    fn fun_var(&self, g: usize, args: &[usize], value: usize) -> u32 {
        self.funs[g].base + (tuple_index(args, self.size) * self.size + value) as u32
    }

    /// The decode map entry of a 1-based variable.
    pub fn cell(&self, var: u32) -> Option<Cell> {
        if var == 0 || var as usize > self.num_vars {
            return None;
        }
        let n = self.size;
        if let Some(b) = self.funs.iter().rev().find(|b| b.base <= var) {
            let off = (var - b.base) as usize;
            return Some(Cell::Fun { fun: b.name.clone(), args: tuple_of(off / n, b.arity, n), value: off % n });
        }
        let b = self.preds.iter().rev().find(|b| b.base <= var)?;
        let off = (var - b.base) as usize;
        Some(Cell::Pred { pred: b.name.clone(), args: tuple_of(off, b.arity, n) })
    }

    pub fn cells(&self) -> impl Iterator<Item = (u32, Cell)> + '_ {
        (1..=self.num_vars as u32).map(|v| (v, self.cell(v).expect("variable in range")))
    }

    pub fn signature(&self) -> Signature {
        Signature {
            preds: self.preds.iter().map(|b| (b.name.clone(), b.arity)).collect(),
            funs: self.funs.iter().map(|b| (b.name.clone(), b.arity)).collect(),
        }
    }

    /// DIMACS CNF text: a `p cnf V C` header and zero-terminated clauses.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "c domain size {}", self.size).ok();
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).ok();
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").ok();
            }
            out.push_str("0\n");
        }
        out
    }

    /// The assignment describing `m`; symbols missing from `m` read as false.
    pub fn encode(&self, m: &FiniteStructure) -> Vec<bool> {
        let mut a = vec![false; self.num_vars];
        for (v, cell) in self.cells() {
            a[v as usize - 1] = match cell {
                Cell::Pred { pred, args } => m.holds(&pred, &args).unwrap_or(false),
                Cell::Fun { fun, args, value } => m.apply(&fun, &args).is_ok_and(|x| x == value),
            };
        }
        a
    }
}

/// Reads predicate tables and function tables off a total assignment.
pub fn decode(assignment: &[bool], cnf: &PropCnf) -> Result<FiniteStructure, DecodeError> {
    if assignment.len() != cnf.num_vars {
        return Err(DecodeError::Length { expected: cnf.num_vars, found: assignment.len() });
    }
    let n = cnf.size;
    let mut m = FiniteStructure::new(n);
    for (p, b) in cnf.preds.iter().enumerate() {
        let cells = n.pow(b.arity as u32);
        let values = (0..cells).map(|i| assignment[(cnf.pred_var(p, &tuple_of(i, b.arity, n)) - 1) as usize]).collect();
        m.set_predicate(b.name.clone(), b.arity, values);
    }
    for (g, b) in cnf.funs.iter().enumerate() {
        let cells = n.pow(b.arity as u32);
        let mut values = Vec::with_capacity(cells);
        for i in 0..cells {
            let args = tuple_of(i, b.arity, n);
            let on: Vec<usize> =
                (0..n).filter(|&x| assignment[(cnf.fun_var(g, &args, x) - 1) as usize]).collect();
            if on.len() != 1 {
                return Err(DecodeError::NotFunctional { fun: b.name.clone(), args, count: on.len() });
            }
            values.push(on[0]);
        }
        m.set_function(b.name.clone(), b.arity, values);
    }
    Ok(m)
}

fn flat_signature(clauses: &[FlatClause]) -> Result<Signature, GroundError> {
    let mut preds: BTreeMap<String, usize> = BTreeMap::new();
    let mut funs: BTreeMap<String, usize> = BTreeMap::new();
    let note = |map: &mut BTreeMap<String, usize>, name: &str, arity: usize| match map.get(name) {
        Some(&a) if a != arity => Err(GroundError::Arity(name.to_string())),
        Some(_) => Ok(()),
        None => {
            map.insert(name.to_string(), arity);
            Ok(())
        }
    };
    for l in clauses.iter().flat_map(|c| &c.literals) {
        match l {
            FlatLiteral::Pred { pred, args, .. } => note(&mut preds, pred, args.len())?,
            FlatLiteral::FunNeq { fun, args, .. } => note(&mut funs, fun, args.len())?,
        }
    }
    if let Some(name) = preds.keys().find(|p| funs.contains_key(*p)) {
        return Err(GroundError::Arity(name.clone()));
    }
    Ok(Signature { preds, funs })
}

/// Grounds flat clauses over the domain `0..n`: one variable per predicate
/// cell and per function cell and value, every clause instantiated under
/// every variable assignment, and an exactly-one constraint per function
/// cell. Symbols of `extra` get cells even if no clause mentions them.
pub fn ground_with(clauses: &[FlatClause], n: usize, extra: &Signature) -> Result<PropCnf, GroundError> {
    if n == 0 {
        return Err(GroundError::EmptyDomain);
    }
    let mut sig = flat_signature(clauses)?;
    for (p, &a) in &extra.preds {
        match sig.preds.get(p) {
            Some(&b) if a != b => return Err(GroundError::Arity(p.clone())),
            _ => {
                sig.preds.insert(p.clone(), a);
            }
        }
    }
    for (g, &a) in &extra.funs {
        match sig.funs.get(g) {
            Some(&b) if a != b => return Err(GroundError::Arity(g.clone())),
            _ => {
                sig.funs.insert(g.clone(), a);
            }
        }
    }
    let mut next = 1u32;
    let mut block = |name: &String, arity: usize, per_cell: usize| {
        let b = Block { name: name.clone(), arity, base: next };
        next += (n.pow(arity as u32) * per_cell) as u32;
        b
    };
    let preds: Vec<Block> = sig.preds.iter().map(|(p, &a)| block(p, a, 1)).collect();
    let funs: Vec<Block> = sig.funs.iter().map(|(g, &a)| block(g, a, n)).collect();
    let mut cnf = PropCnf { size: n, num_vars: next as usize - 1, clauses: Vec::new(), preds, funs };

    let pred_ix: BTreeMap<&str, usize> = cnf.preds.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
    let fun_ix: BTreeMap<&str, usize> = cnf.funs.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();

    for (g, b) in cnf.funs.iter().enumerate() {
        for i in 0..n.pow(b.arity as u32) {
            let args = tuple_of(i, b.arity, n);
            let vars: Vec<i32> = (0..n).map(|x| cnf.fun_var(g, &args, x) as i32).collect();
            cnf.clauses.push(vars.clone());
            for a in 0..n {
                for c in a + 1..n {
                    cnf.clauses.push(vec![-vars[a], -vars[c]]);
                }
            }
        }
    }

    enum Compiled {
        Pred { positive: bool, base: u32, args: Vec<usize> },
        Neq { base: u32, args: Vec<usize>, result: usize },
    }
    let mut out: Vec<Vec<i32>> = Vec::new();
    for c in clauses {
        let vars = c.variables();
        let slot = |v: &String| vars.iter().position(|x| x == v).expect("clause variable");
        let lits: Vec<Compiled> = c
            .literals
            .iter()
            .map(|l| match l {
                FlatLiteral::Pred { positive, pred, args } => Compiled::Pred {
                    positive: *positive,
                    base: cnf.preds[pred_ix[pred.as_str()]].base,
                    args: args.iter().map(slot).collect(),
                },
                FlatLiteral::FunNeq { fun, args, result } => Compiled::Neq {
                    base: cnf.funs[fun_ix[fun.as_str()]].base,
                    args: args.iter().map(slot).collect(),
                    result: slot(result),
                },
            })
            .collect();
        let total = n.checked_pow(vars.len() as u32).unwrap_or(usize::MAX);
        if total.saturating_add(out.len()) > MAX_GROUND_CLAUSES {
            return Err(GroundError::TooLarge(MAX_GROUND_CLAUSES));
        }
        let mut vals = vec![0usize; vars.len()];
        for _ in 0..total {
            let idx = |slots: &[usize]| slots.iter().fold(0, |acc, &s| acc * n + vals[s]);
            let mut g: Vec<i32> = lits
                .iter()
                .map(|l| match l {
                    Compiled::Pred { positive, base, args } => {
                        let v = (base + idx(args) as u32) as i32;
                        if *positive {
                            v
                        } else {
                            -v
                        }
                    }
                    Compiled::Neq { base, args, result } => -((base + (idx(args) * n + vals[*result]) as u32) as i32),
                })
                .collect();
            g.sort_unstable_by_key(|l| (l.unsigned_abs(), *l));
            g.dedup();
            if !g.windows(2).any(|w| w[0] == -w[1]) {
                out.push(g);
            }
            for v in vals.iter_mut().rev() {
                *v += 1;
                if *v < n {
                    break;
                }
                *v = 0;
            }
        }
    }
    cnf.clauses.extend(out);
    Ok(cnf)
}

pub fn ground(clauses: &[FlatClause], n: usize) -> Result<PropCnf, GroundError> {
    ground_with(clauses, n, &Signature::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{flatten, parse_clause};
    use crate::model::dpll::{dpll, satisfies, DpllResult};

    fn flat(cs: &[&str]) -> Vec<FlatClause> {
        flatten(&cs.iter().map(|c| parse_clause(c).unwrap()).collect::<Vec<_>>())
    }

    #[test]
    fn counts_for_a_binary_and_unary_predicate() {
        let cnf = ground(&flat(&["~R(x,y) | p(y)"]), 2).unwrap();
        assert_eq!(cnf.num_vars, 6);
        assert_eq!(cnf.clauses.len(), 4);
    }

    #[test]
    fn unit_at_size_one() {
        let cnf = ground(&flat(&["p(x)"]), 1).unwrap();
        assert_eq!(cnf.clauses, vec![vec![1]]);
    }

    #[test]
    fn exactly_one_for_a_constant() {
        let cnf = ground(&flat(&["p(c)"]), 2).unwrap();
        // p(0), p(1), then c=0, c=1
        assert_eq!(cnf.cell(3), Some(Cell::Fun { fun: "c".into(), args: vec![], value: 0 }));
        assert!(cnf.clauses.contains(&vec![3, 4]));
        assert!(cnf.clauses.contains(&vec![-3, -4]));
        assert_eq!(cnf.clauses.len(), 4);
    }

    #[test]
    fn zero_size_is_rejected() {
        assert_eq!(ground(&flat(&["p(x)"]), 0), Err(GroundError::EmptyDomain));
    }

    #[test]
    fn decode_and_encode_round_trip() {
        let cnf = ground(&flat(&["R(x, f(x))", "~R(x,x)"]), 2).unwrap();
        let DpllResult::Sat(a) = dpll(cnf.num_vars, &cnf.clauses) else { panic!("satisfiable") };
        let m = decode(&a, &cnf).unwrap();
        let f = m.function("f").unwrap();
        assert_ne!(f.values[0], 0);
        assert_ne!(f.values[1], 1);
        assert!(satisfies(&cnf.encode(&m), &cnf.clauses));
    }

    #[test]
    fn non_functional_assignment_is_an_error() {
        let cnf = ground(&flat(&["p(c)"]), 2).unwrap();
        let err = decode(&[true, false, true, true], &cnf).unwrap_err();
        assert!(matches!(err, DecodeError::NotFunctional { count: 2, .. }));
    }

    #[test]
    fn dimacs_header() {
        let cnf = ground(&flat(&["~R(x,y) | p(y)"]), 2).unwrap();
        let text = cnf.to_dimacs();
        assert!(text.lines().any(|l| l == "p cnf 6 4"));
        assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), 4);
    }
}
