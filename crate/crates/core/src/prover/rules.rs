//! Reference inference rules over named first-order clauses. The
//! saturation engine uses its own interned representation; these functions
//! back the public API and proof replay.

use std::collections::BTreeMap;
use std::fmt;

use crate::fol::{Clause, Literal, Term};

/// An idempotent substitution from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<String, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &str) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds `v -> t` without composing; used to rebuild recorded unifiers.
    pub fn insert(&mut self, v: impl Into<String>, t: Term) {
        self.0.insert(v.into(), t);
    }

    pub fn apply(&self, t: &Term) -> Term {
        t.substitute(&|v| self.0.get(v).cloned())
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal::new(l.positive, l.pred.clone(), l.args.iter().map(|a| self.apply(a)).collect())
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause::new(c.literals.iter().map(|l| self.apply_literal(l)).collect())
    }

    /// Extends with `v -> t`, keeping the map idempotent.
    fn bind(&mut self, v: &str, t: Term) {
        let single = |x: &str| if x == v { Some(t.clone()) } else { None };
        for val in self.0.values_mut() {
            *val = val.substitute(&single);
        }
        self.0.insert(v.to_string(), t);
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} -> {v}")?;
        }
        f.write_str("}")
    }
}

fn occurs(v: &str, t: &Term) -> bool {
    match t {
        Term::Var(x) => x == v,
        Term::Const(_) => false,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a)),
    }
}

/// Most general unifier of two term lists, with occurs check.
pub fn unify_terms(a: &[Term], b: &[Term]) -> Option<Substitution> {
    if a.len() != b.len() {
        return None;
    }
    let mut sigma = Substitution::new();
    let mut work: Vec<(Term, Term)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    while let Some((s, t)) = work.pop() {
        let s = sigma.apply(&s);
        let t = sigma.apply(&t);
        match (&s, &t) {
            _ if s == t => {}
            (Term::Var(x), _) => {
                if occurs(x, &t) {
                    return None;
                }
                sigma.bind(x, t.clone());
            }
            (_, Term::Var(y)) => {
                if occurs(y, &s) {
                    return None;
                }
                sigma.bind(y, s.clone());
            }
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                work.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
            _ => return None,
        }
    }
    Some(sigma)
}

/// Most general unifier of two atoms; signs are ignored.
pub fn unify(a: &Literal, b: &Literal) -> Option<Substitution> {
    if a.pred != b.pred {
        return None;
    }
    unify_terms(&a.args, &b.args)
}

/// Suffix appended to the right premise's variables to standardize apart.
pub const APART_SUFFIX: &str = "_r";

pub fn rename_apart(c: &Clause) -> Clause {
    c.rename_vars(&|v| Some(Term::Var(format!("{v}{APART_SUFFIX}"))))
}

/// Resolvent of `left` on literal `li` with `right_apart` on literal `ri`
/// under `sigma`, duplicates removed.
pub fn resolvent(left: &Clause, li: usize, right_apart: &Clause, ri: usize, sigma: &Substitution) -> Clause {
    let mut lits: Vec<Literal> = Vec::new();
    for (k, l) in left.literals.iter().enumerate() {
        if k != li {
            lits.push(sigma.apply_literal(l));
        }
    }
    for (k, l) in right_apart.literals.iter().enumerate() {
        if k != ri {
            lits.push(sigma.apply_literal(l));
        }
    }
    let mut c = Clause::new(lits);
    c.dedup();
    c
}

/// All binary resolvents; `c2` is standardized apart from `c1` first.
pub fn resolve(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    let right = rename_apart(c2);
    let mut out: Vec<Clause> = Vec::new();
    for (i, a) in c1.literals.iter().enumerate() {
        for (j, b) in right.literals.iter().enumerate() {
            if a.positive == b.positive {
                continue;
            }
            if let Some(sigma) = unify(a, b) {
                let r = resolvent(c1, i, &right, j, &sigma);
                if !out.iter().any(|o| o.is_variant(&r)) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// All factors obtained by unifying one pair of same-sign literals.
pub fn factor(c: &Clause) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let (a, b) = (&c.literals[i], &c.literals[j]);
            if a.positive != b.positive {
                continue;
            }
            if let Some(sigma) = unify(a, b) {
                let mut f = sigma.apply_clause(c);
                f.dedup();
                if !out.iter().any(|o| o.is_variant(&f)) {
                    out.push(f);
                }
            }
        }
    }
    out
}

fn match_term(pattern: &Term, target: &Term, theta: &mut BTreeMap<String, Term>) -> bool {
    match pattern {
        Term::Var(v) => match theta.get(v) {
            Some(bound) => bound == target,
            None => {
                theta.insert(v.clone(), target.clone());
                true
            }
        },
        Term::Const(c) => matches!(target, Term::Const(d) if c == d),
        Term::App(f, xs) => match target {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| match_term(x, y, theta))
            }
            _ => false,
        },
    }
}

fn subsume_from(
    lits: &[Literal],
    target: &[Literal],
    used: &mut [bool],
    theta: &BTreeMap<String, Term>,
) -> bool {
    let Some((first, rest)) = lits.split_first() else {
        return true;
    };
    for (j, t) in target.iter().enumerate() {
        if used[j] || t.positive != first.positive || t.pred != first.pred || t.args.len() != first.args.len() {
            continue;
        }
        let mut trial = theta.clone();
        if first.args.iter().zip(&t.args).all(|(p, q)| match_term(p, q, &mut trial)) {
            used[j] = true;
            if subsume_from(rest, target, used, &trial) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// θ-subsumption under multiset semantics: some substitution maps the
/// literals of `c1` injectively onto literals of `c2`. The variables of
/// `c2` are treated as constants.
pub fn subsumes(c1: &Clause, c2: &Clause) -> bool {
    if c1.len() > c2.len() {
        return false;
    }
    let mut used = vec![false; c2.len()];
    subsume_from(&c1.literals, &c2.literals, &mut used, &BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_clause;

    fn cl(s: &str) -> Clause {
        parse_clause(s).unwrap()
    }

    fn lit(s: &str) -> Literal {
        cl(s).literals.remove(0)
    }

    #[test]
    fn unification() {
        let s = unify(&lit("p(x)"), &lit("p(f(y))")).unwrap();
        assert_eq!(s.get("x"), Some(&Term::app("f", vec![Term::var("y")])));
        assert_eq!(s.len(), 1);
        assert!(unify(&lit("R(x,x)"), &lit("R(a,b)")).is_none());
        assert!(unify(&lit("p(x)"), &lit("p(f(x))")).is_none());
        let s = unify(&lit("R(x, f(y))"), &lit("R(g(y), x)"));
        assert!(s.is_none(), "f(y) vs g(y)");
        let s = unify(&lit("R(x, y, y)"), &lit("R(y, z, a)")).unwrap();
        for v in ["x", "y", "z"] {
            assert_eq!(s.get(v), Some(&Term::constant("a")));
        }
    }

    #[test]
    fn resolution() {
        let r = resolve(&cl("p(a)"), &cl("~p(x) | q(x)"));
        assert_eq!(r.len(), 1);
        assert!(r[0].is_variant(&cl("q(a)")));
        assert_eq!(resolve(&cl("p(a)"), &cl("~p(a)")), vec![Clause::default()]);
        let r = resolve(&cl("~R(w,v) | p(v)"), &cl("R(c, sk0(c))"));
        assert_eq!(r.len(), 1);
        assert!(r[0].is_variant(&cl("p(sk0(c))")));
    }

    #[test]
    fn same_names_are_standardized_apart() {
        let r = resolve(&cl("p(x) | q(x)"), &cl("~p(f(x))"));
        assert!(r[0].is_variant(&cl("q(f(x))")));
    }

    #[test]
    fn factoring() {
        let f = factor(&cl("p(x) | p(a)"));
        assert_eq!(f.len(), 1);
        assert!(f[0].is_variant(&cl("p(a)")));
        assert!(factor(&cl("p(x) | q(y)")).is_empty());
        let f = factor(&cl("R(x,y) | R(y,x)"));
        assert_eq!(f.len(), 1);
        assert!(f[0].is_variant(&cl("R(x,x)")));
    }

    #[test]
    fn subsumption() {
        assert!(subsumes(&cl("p(x)"), &cl("p(a) | q(b)")));
        assert!(!subsumes(&cl("p(a)"), &cl("p(x)")));
        assert!(!subsumes(&cl("p(x) | p(y)"), &cl("p(a)")));
        assert!(subsumes(&cl("R(x,y) | ~p(x)"), &cl("~p(a) | q | R(a,b)")));
        assert!(!subsumes(&cl("R(x,x)"), &cl("R(a,b)")));
        // target variables behave as constants
        assert!(!subsumes(&cl("R(x,a)"), &cl("R(y,z)")));
    }
}
