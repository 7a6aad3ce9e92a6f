use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::skolem::{skolemize_with, SymbolGen};
use super::{to_nnf, FolFormula as F, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub pred: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, pred: impl Into<String>, args: Vec<Term>) -> Self {
        Literal { positive, pred: pred.into(), args }
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, ..self.clone() }
    }

    pub fn complements(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.pred == other.pred && self.args == other.args
    }

    fn map_vars(&self, map: &dyn Fn(&str) -> Option<Term>) -> Literal {
        Literal {
            positive: self.positive,
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.substitute(map)).collect(),
        }
    }

    pub fn to_formula(&self) -> F {
        let atom = F::Pred(self.pred.clone(), self.args.clone());
        if self.positive {
            atom
        } else {
            atom.not()
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        if self.args.is_empty() {
            f.write_str(&self.pred)
        } else {
            write!(f, "{}", Term::App(self.pred.clone(), self.args.clone()))
        }
    }
}

/// A disjunction of literals, implicitly universally closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, a)| self.literals[i + 1..].iter().any(|b| a.complements(b)))
    }

    /// Variables in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.literals {
            l.args.iter().for_each(|t| t.collect_vars(&mut out));
        }
        out
    }

    /// Drops repeated literals, keeping first occurrences.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.literals.retain(|l| seen.insert(l.clone()));
    }

    pub fn rename_vars(&self, map: &dyn Fn(&str) -> Option<Term>) -> Clause {
        Clause { literals: self.literals.iter().map(|l| l.map_vars(map)).collect() }
    }

    /// Variables renamed to `_0, _1, ...` in first-occurrence order.
    pub fn canonical(&self) -> Clause {
        let vars = self.variables();
        self.rename_vars(&|v| {
            vars.iter().position(|x| x == v).map(|i| Term::Var(format!("_{i}")))
        })
    }

    /// Equal as multisets of literals up to a bijective variable renaming.
    pub fn is_variant(&self, other: &Clause) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        variant_match(&self.literals, &other.literals, &mut used, &mut BTreeMap::new())
    }

    /// The universal closure as a formula.
    pub fn to_formula(&self) -> F {
        let mut body = self
            .literals
            .iter()
            .map(Literal::to_formula)
            .reduce(|a, b| a.or(b))
            .unwrap_or(F::False);
        for v in self.variables().into_iter().rev() {
            body = F::forall(v, body);
        }
        body
    }
}

fn match_term(a: &Term, b: &Term, map: &mut BTreeMap<String, String>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match map.get(x) {
            Some(z) => z == y,
            None => {
                if map.values().any(|z| z == y) {
                    return false;
                }
                map.insert(x.clone(), y.clone());
                true
            }
        },
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| match_term(s, t, map))
        }
        _ => false,
    }
}

fn variant_match(
    lits: &[Literal],
    other: &[Literal],
    used: &mut [bool],
    map: &mut BTreeMap<String, String>,
) -> bool {
    let Some((first, rest)) = lits.split_first() else {
        return true;
    };
    for j in 0..other.len() {
        let cand = &other[j];
        if used[j] || cand.positive != first.positive || cand.pred != first.pred {
            continue;
        }
        let mut trial = map.clone();
        if first.args.len() == cand.args.len()
            && first.args.iter().zip(&cand.args).all(|(s, t)| match_term(s, t, &mut trial))
        {
            used[j] = true;
            if variant_match(rest, other, used, &mut trial) {
                *map = trial;
                return true;
            }
            used[j] = false;
        }
    }
    false
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClausifyOptions {
    /// Name conjunctive subformulas under disjunctions with fresh
    /// predicates instead of distributing.
    pub definitional: bool,
}

/// NNF, Skolemization and distribution into an equisatisfiable clause set.
/// Tautologies and duplicate clauses are dropped; variables of different
/// clauses are standardized apart.
pub fn clausify(f: &F) -> Vec<Clause> {
    clausify_with(f, ClausifyOptions::default())
}

pub fn clausify_with(f: &F, opts: ClausifyOptions) -> Vec<Clause> {
    let mut gen = SymbolGen::new();
    gen.avoid(f);
    let sk = skolemize_with(&to_nnf(f), &mut gen);
    let mut builder = Distributor { gen, opts };
    let raw = builder.cnf(&strip_universals(&sk));
    finish(raw)
}

fn strip_universals(f: &F) -> F {
    match f {
        F::Forall(_, a) => strip_universals(a),
        F::And(a, b) => strip_universals(a).and(strip_universals(b)),
        F::Or(a, b) => strip_universals(a).or(strip_universals(b)),
        _ => f.clone(),
    }
}

struct Distributor {
    gen: SymbolGen,
    opts: ClausifyOptions,
}

impl Distributor {
    /// Clause list of a quantifier-free NNF formula; `[]` is true and
    /// `[[]]` is false.
    fn cnf(&mut self, f: &F) -> Vec<Vec<Literal>> {
        match f {
            F::True => Vec::new(),
            F::False => vec![Vec::new()],
            F::Pred(p, args) => vec![vec![Literal::new(true, p.clone(), args.clone())]],
            F::Not(a) => match &**a {
                F::Pred(p, args) => vec![vec![Literal::new(false, p.clone(), args.clone())]],
                _ => panic!("clausify: expected NNF"),
            },
            F::And(a, b) => {
                let mut out = self.cnf(a);
                out.extend(self.cnf(b));
                out
            }
            F::Or(a, b) => {
                let mut left = self.cnf(a);
                let mut right = self.cnf(b);
                if self.opts.definitional && left.len() > 1 && right.len() > 1 {
                    let (big, small) = if left.len() >= right.len() {
                        (&mut left, right)
                    } else {
                        (&mut right, left)
                    };
                    let mut defs = self.define(big);
                    let name = defs.pop().expect("definition literal");
                    let mut out = defs;
                    out.extend(small.into_iter().map(|mut c| {
                        c.push(name[0].clone());
                        c
                    }));
                    return out;
                }
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        let mut c = l.clone();
                        c.extend(r.iter().cloned());
                        out.push(c);
                    }
                }
                out
            }
            F::Forall(_, a) => self.cnf(a),
            other => panic!("clausify: unexpected {other:?} after Skolemization"),
        }
    }

    /// Introduces `d(vars)` with clauses `~d | c` for each `c` in `clauses`.
    /// Returns those clauses followed by the single-literal clause `[d]`.
    fn define(&mut self, clauses: &mut Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
        let mut vars = Vec::new();
        for c in clauses.iter() {
            for l in c {
                l.args.iter().for_each(|t| t.collect_vars(&mut vars));
            }
        }
        let name = self.gen.fresh("d");
        let args: Vec<Term> = vars.into_iter().map(Term::Var).collect();
        let def = Literal::new(true, name, args);
        let mut out: Vec<Vec<Literal>> = clauses
            .drain(..)
            .map(|mut c| {
                c.insert(0, def.negated());
                c
            })
            .collect();
        out.push(vec![def]);
        out
    }
}

fn finish(raw: Vec<Vec<Literal>>) -> Vec<Clause> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for lits in raw {
        let mut c = Clause::new(lits);
        c.dedup();
        if c.is_tautology() || !seen.insert(c.canonical()) {
            continue;
        }
        out.push(c);
    }
    for (i, c) in out.iter_mut().enumerate() {
        *c = c.rename_vars(&|v| Some(Term::Var(format!("{v}_{i}"))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_clause, parse_fol};

    fn clauses(text: &str) -> Vec<Clause> {
        clausify(&parse_fol(text).unwrap())
    }

    fn assert_variants(got: &[Clause], want: &[&str]) {
        assert_eq!(got.len(), want.len(), "{got:?}");
        for w in want {
            let w = parse_clause(w).unwrap();
            assert!(got.iter().any(|g| g.is_variant(&w)), "missing {w} in {got:?}");
        }
    }

    #[test]
    fn propositional_mix() {
        assert_variants(&clauses("P(a) & (Q(a) | ~P(a))"), &["P(a)", "Q(a) | ~P(a)"]);
    }

    #[test]
    fn reflexivity() {
        assert_variants(&clauses("all x. R(x,x)"), &["R(x,x)"]);
    }

    #[test]
    fn standardized_apart() {
        let cs = clauses("all x. p(x) & all x. (q(x) | r(x))");
        let v0 = cs[0].variables();
        let v1 = cs[1].variables();
        assert!(v0.iter().all(|v| !v1.contains(v)));
    }

    #[test]
    fn tautologies_and_duplicates_dropped() {
        assert!(clauses("all x. (p(x) | ~p(x))").is_empty());
        assert_variants(&clauses("all x. p(x) & all y. p(y)"), &["p(x)"]);
        assert_variants(&clauses("false"), &["$false"]);
        assert!(clauses("true").is_empty());
    }

    #[test]
    fn definitional_mode_names_conjunctions() {
        let f = parse_fol("(a & b & c) | (d & e)").unwrap();
        let plain = clausify(&f);
        assert_eq!(plain.len(), 6);
        let def = clausify_with(&f, ClausifyOptions { definitional: true });
        assert_eq!(def.len(), 5);
        assert!(def.iter().any(|c| c.literals.iter().any(|l| l.pred.starts_with("skd"))));
    }

    #[test]
    fn variant_checks() {
        let a = parse_clause("p(x) | q(y, x)").unwrap();
        let b = parse_clause("q(z, y) | p(y)").unwrap();
        let c = parse_clause("q(y, y) | p(y)").unwrap();
        assert!(a.is_variant(&b));
        assert!(!a.is_variant(&c));
        assert!(parse_clause("p(x) | ~p(x)").unwrap().is_tautology());
    }
}
