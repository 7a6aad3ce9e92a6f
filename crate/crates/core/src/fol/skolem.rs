use std::collections::{HashMap, HashSet};

use super::{FolFormula as F, Term};

/// Prefix of every generated function, constant and definition symbol.
pub const SKOLEM_PREFIX: &str = "sk";

/// Fresh-symbol source for one normal-form pipeline.
#[derive(Debug, Clone, Default)]
pub struct SymbolGen {
    next: usize,
    taken: HashSet<String>,
}

impl SymbolGen {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks every function, constant and predicate name of `f` as taken.
    pub fn avoid(&mut self, f: &F) {
        f.visit(&mut |g| {
            if let F::Pred(p, args) = g {
                self.taken.insert(p.clone());
                for a in args {
                    self.avoid_term(a);
                }
            }
        });
    }

    fn avoid_term(&mut self, t: &Term) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                self.taken.insert(c.clone());
            }
            Term::App(g, args) => {
                self.taken.insert(g.clone());
                args.iter().for_each(|a| self.avoid_term(a));
            }
        }
    }

    /// Next unused name of the form `sk{stem}{n}`.
    pub fn fresh(&mut self, stem: &str) -> String {
        loop {
            let name = format!("{SKOLEM_PREFIX}{stem}{}", self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Renames bound variables so that no two quantifiers bind the same name
/// and no bound name coincides with a free variable.
pub fn rectify(f: &F) -> F {
    let mut used: HashSet<String> = f.free_vars().into_iter().collect();
    rect(f, &mut used, &HashMap::new())
}

fn rect(f: &F, used: &mut HashSet<String>, ren: &HashMap<String, String>) -> F {
    match f {
        F::True | F::False => f.clone(),
        F::Pred(p, args) => {
            let map = |v: &str| ren.get(v).map(|n| Term::Var(n.clone()));
            F::Pred(p.clone(), args.iter().map(|a| a.substitute(&map)).collect())
        }
        F::Not(a) => rect(a, used, ren).not(),
        F::And(a, b) => rect(a, used, ren).and(rect(b, used, ren)),
        F::Or(a, b) => rect(a, used, ren).or(rect(b, used, ren)),
        F::Imp(a, b) => rect(a, used, ren).implies(rect(b, used, ren)),
        F::Iff(a, b) => rect(a, used, ren).iff(rect(b, used, ren)),
        F::Forall(v, a) | F::Exists(v, a) => {
            let mut name = v.clone();
            let mut k = 1;
            while used.contains(&name) {
                name = format!("{v}_{k}");
                k += 1;
            }
            used.insert(name.clone());
            let mut inner = ren.clone();
            inner.insert(v.clone(), name.clone());
            let body = rect(a, used, &inner);
            match f {
                F::Forall(..) => F::forall(name, body),
                _ => F::exists(name, body),
            }
        }
    }
}

/// Replaces each existential of an NNF formula by a Skolem term over the
/// enclosing universal variables that occur free in its scope. Universal
/// quantifiers are kept.
pub fn skolemize(f: &F) -> F {
    let mut gen = SymbolGen::new();
    gen.avoid(f);
    skolemize_with(f, &mut gen)
}

pub(crate) fn skolemize_with(f: &F, gen: &mut SymbolGen) -> F {
    let f = rectify(f);
    let mut universals = f.free_vars();
    sk(&f, &mut universals, &HashMap::new(), gen)
}

fn sk(f: &F, universals: &mut Vec<String>, subst: &HashMap<String, Term>, gen: &mut SymbolGen) -> F {
    match f {
        F::True | F::False => f.clone(),
        F::Pred(..) | F::Not(_) => f.substitute(&|v| subst.get(v).cloned()),
        F::And(a, b) => sk(a, universals, subst, gen).and(sk(b, universals, subst, gen)),
        F::Or(a, b) => sk(a, universals, subst, gen).or(sk(b, universals, subst, gen)),
        F::Imp(..) | F::Iff(..) => panic!("skolemize expects NNF input"),
        F::Forall(v, a) => {
            universals.push(v.clone());
            let body = sk(a, universals, subst, gen);
            universals.pop();
            F::forall(v.clone(), body)
        }
        F::Exists(v, a) => {
            let mut deps: HashSet<String> = HashSet::new();
            for x in f.free_vars() {
                match subst.get(&x) {
                    Some(t) => {
                        let mut vs = Vec::new();
                        t.collect_vars(&mut vs);
                        deps.extend(vs);
                    }
                    None => {
                        deps.insert(x);
                    }
                }
            }
            let args: Vec<Term> = universals
                .iter()
                .filter(|u| deps.contains(*u))
                .map(|u| Term::Var(u.clone()))
                .collect();
            let name = gen.fresh("");
            let term = if args.is_empty() { Term::Const(name) } else { Term::App(name, args) };
            let mut inner = subst.clone();
            inner.insert(v.clone(), term);
            sk(a, universals, &inner, gen)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_fol, to_nnf};

    #[test]
    fn outermost_existential_becomes_constant() {
        let f = skolemize(&parse_fol("ex w. P(w)").unwrap());
        assert_eq!(f, parse_fol("P(sk0)").unwrap());
    }

    #[test]
    fn seriality() {
        let f = skolemize(&parse_fol("all w. ex v. R(w,v)").unwrap());
        assert_eq!(
            f,
            F::forall("w", F::pred("R", vec![Term::var("w"), Term::app("sk0", vec![Term::var("w")])]))
        );
    }

    #[test]
    fn dependencies_are_scoped() {
        // v only depends on y, not on the outer x
        let f = skolemize(&parse_fol("all x. all y. (p(x) | ex v. R(y,v))").unwrap());
        let sk_term = Term::app("sk0", vec![Term::var("y")]);
        let expected = F::forall(
            "x",
            F::forall(
                "y",
                F::pred("p", vec![Term::var("x")]).or(F::pred("R", vec![Term::var("y"), sk_term])),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn chained_existentials_inherit_dependencies() {
        // z mentions y, which stands for a term over x
        let f = skolemize(&parse_fol("all x. ex y. (p(x,y) & ex z. R(y,z))").unwrap());
        let y = Term::app("sk0", vec![Term::var("x")]);
        let z = Term::app("sk1", vec![Term::var("x")]);
        let body = F::pred("p", vec![Term::var("x"), y.clone()]).and(F::pred("R", vec![y, z]));
        assert_eq!(f, F::forall("x", body));
        let g = skolemize(&parse_fol("all x. ex y. ex z. R(y,z)").unwrap());
        assert_eq!(g, parse_fol("all x. R(sk0,sk1)").unwrap());
    }

    #[test]
    fn avoids_existing_names() {
        let f = skolemize(&parse_fol("p(sk0) & ex x. q(x)").unwrap());
        assert_eq!(f, parse_fol("p(sk0) & q(sk1)").unwrap());
    }

    #[test]
    fn rectify_separates_shadowed_names() {
        let f = rectify(&parse_fol("all x. p(x) & all x. q(x)").unwrap());
        assert_eq!(f.bound_vars(), vec!["x".to_string(), "x_1".to_string()]);
        let g = to_nnf(&parse_fol("all y. ex x. (R(y,x) & all y. p(y))").unwrap());
        let s = skolemize(&g);
        assert!(s.bound_vars().iter().all(|v| v.starts_with('y')));
    }
}
