//! Interned clause representation for the saturation engine.

use std::collections::HashMap;

use crate::fol;

pub(crate) type Sym = u32;
pub(crate) type Var = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum T {
    V(Var),
    F(Sym, Box<[T]>),
}

impl T {
    pub(crate) fn weight(&self) -> u32 {
        match self {
            T::V(_) => 1,
            T::F(_, args) => 1 + args.iter().map(T::weight).sum::<u32>(),
        }
    }

    #[cfg(test)]
    fn max_var(&self) -> Option<Var> {
        match self {
            T::V(v) => Some(*v),
            T::F(_, args) => args.iter().filter_map(T::max_var).max(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Lit {
    pub pos: bool,
    pub pred: Sym,
    pub args: Box<[T]>,
}

impl Lit {
    /// Index key for a signed predicate.
    pub(crate) fn key(&self) -> u32 {
        self.pred * 2 + self.pos as u32
    }

    pub(crate) fn weight(&self) -> u32 {
        1 + self.args.iter().map(T::weight).sum::<u32>()
    }

    /// Variable occurrences, with repetition.
    pub(crate) fn var_count(&self) -> u32 {
        fn go(t: &T) -> u32 {
            match t {
                T::V(_) => 1,
                T::F(_, args) => args.iter().map(go).sum(),
            }
        }
        self.args.iter().map(go).sum()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct IClause {
    pub lits: Vec<Lit>,
    pub nvars: u32,
    pub weight: u32,
    /// Bit `key % 64` set for each literal key.
    pub mask: u64,
}

impl IClause {
    /// Dedups literals, renumbers variables by first occurrence and fills in
    /// the derived fields.
    pub(crate) fn normalized(mut lits: Vec<Lit>) -> IClause {
        let mut seen: Vec<Lit> = Vec::with_capacity(lits.len());
        for l in lits.drain(..) {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
        let mut map: HashMap<Var, Var> = HashMap::new();
        fn renum(t: &T, map: &mut HashMap<Var, Var>) -> T {
            match t {
                T::V(v) => {
                    let n = map.len() as Var;
                    T::V(*map.entry(*v).or_insert(n))
                }
                T::F(f, args) => T::F(*f, args.iter().map(|a| renum(a, map)).collect()),
            }
        }
        let lits: Vec<Lit> = seen
            .iter()
            .map(|l| Lit { pos: l.pos, pred: l.pred, args: l.args.iter().map(|a| renum(a, &mut map)).collect() })
            .collect();
        let weight = lits.iter().map(Lit::weight).sum();
        let mask = lits.iter().fold(0u64, |m, l| m | 1u64 << (l.key() % 64));
        IClause { nvars: map.len() as u32, lits, weight, mask }
    }

    pub(crate) fn is_tautology(&self) -> bool {
        self.lits.iter().enumerate().any(|(i, a)| {
            self.lits[i + 1..]
                .iter()
                .any(|b| a.pos != b.pos && a.pred == b.pred && a.args == b.args)
        })
    }

    #[cfg(test)]
    pub(crate) fn max_var(&self) -> Option<Var> {
        self.lits.iter().flat_map(|l| l.args.iter()).filter_map(T::max_var).max()
    }
}

/// Name tables for predicates and functions.
#[derive(Debug, Default, Clone)]
pub(crate) struct Symbols {
    pub preds: Vec<String>,
    pub funs: Vec<String>,
    pred_ids: HashMap<String, Sym>,
    fun_ids: HashMap<String, Sym>,
}

impl Symbols {
    pub(crate) fn pred(&mut self, name: &str) -> Sym {
        if let Some(&id) = self.pred_ids.get(name) {
            return id;
        }
        let id = self.preds.len() as Sym;
        self.preds.push(name.to_string());
        self.pred_ids.insert(name.to_string(), id);
        id
    }

    pub(crate) fn fun(&mut self, name: &str) -> Sym {
        if let Some(&id) = self.fun_ids.get(name) {
            return id;
        }
        let id = self.funs.len() as Sym;
        self.funs.push(name.to_string());
        self.fun_ids.insert(name.to_string(), id);
        id
    }

    pub(crate) fn intern_clause(&mut self, c: &fol::Clause) -> IClause {
        let vars = c.variables();
        let mut lits = Vec::with_capacity(c.len());
        for l in &c.literals {
            let pred = self.pred(&l.pred);
            let args = l.args.iter().map(|t| self.intern_term(t, &vars)).collect();
            lits.push(Lit { pos: l.positive, pred, args });
        }
        IClause::normalized(lits)
    }

    fn intern_term(&mut self, t: &fol::Term, vars: &[String]) -> T {
        match t {
            fol::Term::Var(v) => T::V(vars.iter().position(|x| x == v).expect("clause variable") as Var),
            fol::Term::Const(c) => T::F(self.fun(c), Box::new([])),
            fol::Term::App(f, args) => {
                T::F(self.fun(f), args.iter().map(|a| self.intern_term(a, vars)).collect())
            }
        }
    }

    /// Variable `k` is named by `var_name(k)`; nullary functions become
    /// constants.
    pub(crate) fn extern_term(&self, t: &T, var_name: &dyn Fn(Var) -> String) -> fol::Term {
        match t {
            T::V(v) => fol::Term::Var(var_name(*v)),
            T::F(f, args) if args.is_empty() => fol::Term::Const(self.funs[*f as usize].clone()),
            T::F(f, args) => fol::Term::App(
                self.funs[*f as usize].clone(),
                args.iter().map(|a| self.extern_term(a, var_name)).collect(),
            ),
        }
    }

    pub(crate) fn extern_clause(&self, c: &IClause) -> fol::Clause {
        let name = |v: Var| format!("x{v}");
        fol::Clause::new(
            c.lits
                .iter()
                .map(|l| {
                    fol::Literal::new(
                        l.pos,
                        self.preds[l.pred as usize].clone(),
                        l.args.iter().map(|a| self.extern_term(a, &name)).collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Triangular bindings over offset variable spaces. Bound terms borrow
/// from the clauses being unified.
pub(crate) struct Bindings<'a> {
    slots: Vec<Option<(&'a T, u32)>>,
    trail: Vec<usize>,
}

impl<'a> Bindings<'a> {
    pub(crate) fn new(nvars: usize) -> Self {
        Bindings { slots: vec![None; nvars], trail: Vec::new() }
    }

    pub(crate) fn bound(&self) -> impl Iterator<Item = usize> + '_ {
        self.trail.iter().copied()
    }

    /// Follows variable bindings until an unbound variable or an
    /// application; returns the term and the offset it lives in.
    fn deref(&self, mut t: &'a T, mut off: u32) -> (&'a T, u32) {
        loop {
            match t {
                T::V(v) => match self.slots[(*v + off) as usize] {
                    Some((b, o)) => {
                        t = b;
                        off = o;
                    }
                    None => return (t, off),
                },
                T::F(..) => return (t, off),
            }
        }
    }

    fn occurs(&self, var: usize, t: &'a T, off: u32) -> bool {
        let (t, off) = self.deref(t, off);
        match t {
            T::V(v) => (*v + off) as usize == var,
            T::F(_, args) => args.iter().any(|a| self.occurs(var, a, off)),
        }
    }

    /// Extends the bindings to unify `a@oa` with `b@ob`. On failure the
    /// bindings may be partially extended.
    pub(crate) fn unify(&mut self, a: &'a T, oa: u32, b: &'a T, ob: u32) -> bool {
        let (a, oa) = self.deref(a, oa);
        let (b, ob) = self.deref(b, ob);
        match (a, b) {
            (T::V(x), T::V(y)) if x + oa == y + ob => true,
            (T::V(x), _) => {
                let x = (*x + oa) as usize;
                if self.occurs(x, b, ob) {
                    return false;
                }
                self.slots[x] = Some((b, ob));
                self.trail.push(x);
                true
            }
            (_, T::V(y)) => {
                let y = (*y + ob) as usize;
                if self.occurs(y, a, oa) {
                    return false;
                }
                self.slots[y] = Some((a, oa));
                self.trail.push(y);
                true
            }
            (T::F(f, xs), T::F(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(s, t)| self.unify(s, oa, t, ob))
            }
        }
    }

    pub(crate) fn unify_args(&mut self, a: &'a [T], oa: u32, b: &'a [T], ob: u32) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(s, t)| self.unify(s, oa, t, ob))
    }

    /// Fully applies the bindings; the result uses absolute variable ids.
    pub(crate) fn apply(&self, t: &'a T, off: u32) -> T {
        let (t, off) = self.deref(t, off);
        match t {
            T::V(v) => T::V(*v + off),
            T::F(f, args) => T::F(*f, args.iter().map(|a| self.apply(a, off)).collect()),
        }
    }

    pub(crate) fn apply_lit(&self, l: &'a Lit, off: u32) -> Lit {
        Lit { pos: l.pos, pred: l.pred, args: l.args.iter().map(|a| self.apply(a, off)).collect() }
    }

    /// The binding of absolute variable `v`, fully applied.
    pub(crate) fn value(&self, v: usize) -> Option<T> {
        self.slots[v].map(|(t, o)| self.apply(t, o))
    }
}

/// One-way matching of `pattern` onto `target`; target variables are rigid.
pub(crate) struct Matcher;

struct Match<'a, 's> {
    slots: &'s mut [Option<&'a T>],
    trail: Vec<usize>,
}

impl<'a> Match<'a, '_> {
    fn matches(&mut self, p: &T, t: &'a T) -> bool {
        match p {
            T::V(v) => {
                let v = *v as usize;
                match self.slots[v] {
                    Some(b) => b == t,
                    None => {
                        self.slots[v] = Some(t);
                        self.trail.push(v);
                        true
                    }
                }
            }
            T::F(f, xs) => match t {
                T::F(g, ys) if f == g && xs.len() == ys.len() => {
                    xs.iter().zip(ys.iter()).all(|(x, y)| self.matches(x, y))
                }
                _ => false,
            },
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail entry");
            self.slots[v] = None;
        }
    }

    fn subsume_from(&mut self, pat: &[Lit], target: &'a [Lit], used: &mut [bool]) -> bool {
        let Some((first, rest)) = pat.split_first() else {
            return true;
        };
        for (j, t) in target.iter().enumerate() {
            if used[j] || t.pos != first.pos || t.pred != first.pred {
                continue;
            }
            let mark = self.trail.len();
            if first.args.iter().zip(t.args.iter()).all(|(p, q)| self.matches(p, q)) {
                used[j] = true;
                if self.subsume_from(rest, target, used) {
                    return true;
                }
                used[j] = false;
            }
            self.undo(mark);
        }
        false
    }
}

const STACK: usize = 32;

impl Matcher {
    pub(crate) fn new() -> Self {
        Matcher
    }

    /// Multiset θ-subsumption.
    pub(crate) fn subsumes(&mut self, c: &IClause, d: &IClause) -> bool {
        if c.lits.len() > d.lits.len() || c.mask & !d.mask != 0 || c.weight > d.weight {
            return false;
        }
        // Every pattern literal needs a candidate before any search.
        if !c.lits.iter().all(|l| d.lits.iter().any(|t| t.pos == l.pos && t.pred == l.pred)) {
            return false;
        }
        let nv = c.nvars as usize;
        let (mut slot_buf, mut slot_vec);
        let slots: &mut [Option<&T>] = if nv <= STACK {
            slot_buf = [None; STACK];
            &mut slot_buf[..nv]
        } else {
            slot_vec = vec![None; nv];
            &mut slot_vec
        };
        let (mut used_buf, mut used_vec);
        let used: &mut [bool] = if d.lits.len() <= STACK {
            used_buf = [false; STACK];
            &mut used_buf[..d.lits.len()]
        } else {
            used_vec = vec![false; d.lits.len()];
            &mut used_vec
        };
        let mut m = Match { slots, trail: Vec::new() };
        m.subsume_from(&c.lits, &d.lits, used)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_clause;

    fn ic(sym: &mut Symbols, s: &str) -> IClause {
        sym.intern_clause(&parse_clause(s).unwrap())
    }

    #[test]
    fn intern_round_trip() {
        let mut sym = Symbols::default();
        let c = ic(&mut sym, "~R(y, f(x, a)) | p(y)");
        assert_eq!(c.nvars, 2);
        assert_eq!(c.max_var(), Some(1));
        let back = sym.extern_clause(&c);
        assert!(back.is_variant(&parse_clause("~R(y, f(x, a)) | p(y)").unwrap()));
        assert_eq!(c.weight, 1 + 1 + 3 + 1 + 1);
    }

    #[test]
    fn offset_unification() {
        let mut sym = Symbols::default();
        let a = ic(&mut sym, "p(x, f(y))");
        let b = ic(&mut sym, "p(g(x), x)");
        let mut bind = Bindings::new((a.nvars + b.nvars) as usize);
        assert!(bind.unify_args(&a.lits[0].args, 0, &b.lits[0].args, a.nvars));
        // x0 := g(x2), x2 := f(x1)
        let applied = bind.apply_lit(&a.lits[0], 0);
        let other = bind.apply_lit(&b.lits[0], a.nvars);
        assert_eq!(applied, other);
        let c = ic(&mut sym, "p(x, f(x))");
        let mut bind2 = Bindings::new(2);
        assert!(!bind2.unify(&c.lits[0].args[0], 0, &c.lits[0].args[1], 0));
    }

    #[test]
    fn matcher_subsumption() {
        let mut sym = Symbols::default();
        let mut m = Matcher::new();
        let px = ic(&mut sym, "p(x)");
        let pa_qb = ic(&mut sym, "p(a) | q(b)");
        assert!(m.subsumes(&px, &pa_qb));
        let pxy = ic(&mut sym, "p(x) | p(y)");
        let pa = ic(&mut sym, "p(a)");
        assert!(!m.subsumes(&pxy, &pa));
        assert!(!m.subsumes(&pa, &px));
    }
}
