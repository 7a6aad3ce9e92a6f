use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use super::index::DiscTree;
use super::proof::{Inference, Proof, ProofStep};
use super::rules::{Substitution, APART_SUFFIX};
use super::term::{Bindings, IClause, Lit, Matcher, Symbols, Var, T};
use crate::fol::Clause;

/// Resource bounds of one saturation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationLimits {
    /// Retained clauses, input included.
    pub max_clauses: usize,
    /// Time spent inside [`Saturation::step`].
    pub max_time: Option<Duration>,
    /// Heavier derived clauses are discarded.
    pub max_weight: u32,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits { max_clauses: 500_000, max_time: None, max_weight: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverOptions {
    pub forward_subsumption: bool,
    pub backward_subsumption: bool,
    /// Resolve a clause with negative literals only on one selected
    /// negative literal, against a clause without negative literals.
    /// Unrestricted binary resolution when off.
    pub negative_selection: bool,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions { forward_subsumption: true, backward_subsumption: true, negative_selection: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhausted {
    Clauses,
    Time,
    Cancelled,
    /// Saturated, but only after discarding overweight clauses.
    Weight,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProverStats {
    pub given: usize,
    pub generated: usize,
    pub kept: usize,
    pub subsumed: usize,
    pub discarded_by_weight: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceReport {
    pub reason: Exhausted,
    pub stats: ProverStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturationOutcome {
    Refutation(Proof),
    Saturated,
    ResourceOut(ResourceReport),
}

#[derive(Debug, Clone)]
enum Origin {
    Input(usize),
    Resolve { left: u32, left_lit: u16, right: u32, right_lit: u16, sigma: Vec<(Var, T)> },
    Factor { parent: u32, first: u16, second: u16, sigma: Vec<(Var, T)> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Passive,
    Active,
    Deleted,
}

struct Entry {
    clause: IClause,
    origin: Origin,
    state: State,
    /// The only literal allowed to take part in inferences, if any.
    selected: Option<u16>,
}

impl Entry {
    fn eligible(&self, i: usize) -> bool {
        self.selected.is_none_or(|s| s as usize == i)
    }
}

fn top(t: Option<&T>) -> u64 {
    match t {
        Some(T::F(f, _)) => *f as u64 + 1,
        _ => 0,
    }
}

/// Signed predicate alone, and paired with each non-variable top symbol
/// among the first two arguments.
fn facets(l: &Lit) -> impl Iterator<Item = (u32, u8, u64)> {
    let k = l.key();
    let a = top(l.args.first());
    let b = top(l.args.get(1));
    [Some((k, 0, 0)), (a != 0).then_some((k, 1, a)), (b != 0).then_some((k, 2, b))].into_iter().flatten()
}

/// The heaviest negative literal, first on ties.
fn select(c: &IClause) -> Option<u16> {
    let mut best: Option<(u32, usize)> = None;
    for (i, l) in c.lits.iter().enumerate() {
        if !l.pos && best.is_none_or(|(w, _)| l.weight() > w) {
            best = Some((l.weight(), i));
        }
    }
    best.map(|(_, i)| i as u16)
}

/// One given clause in this many is the oldest passive one.
pub const AGE_RATIO: usize = 5;

/// Given-clause saturation by binary resolution and factoring.
///
/// Passive clauses are selected by least weight, oldest first, except that
/// every [`AGE_RATIO`]-th pick takes the oldest passive clause. Each call to
/// [`step`](Self::step) performs one given-clause iteration.
pub struct Saturation {
    symbols: Symbols,
    store: Vec<Entry>,
    passive: BinaryHeap<Reverse<(u32, u32)>>,
    /// No passive clause has an id below this.
    oldest: usize,
    /// Active literal occurrences by signed-predicate key.
    active_lits: HashMap<u32, Vec<(u32, u16)>>,
    /// Retained clauses indexed under their literal with the most symbols.
    subsumers: DiscTree,
    /// Retained clauses by every [`facets`] of their literals.
    occurrences: HashMap<(u32, u8, u64), Vec<u32>>,
    /// Sorted literals of every retained clause. Duplicates are dropped
    /// even with subsumption off, so ground sets always saturate.
    retained: HashSet<Vec<Lit>>,
    matcher: Matcher,
    limits: SaturationLimits,
    options: ProverOptions,
    stats: ProverStats,
    result: Option<SaturationOutcome>,
}

enum Added {
    Empty(u32),
    Kept,
    Dropped,
}

impl Saturation {
    pub fn new(clauses: &[Clause], limits: SaturationLimits, options: ProverOptions) -> Self {
        let mut s = Saturation {
            symbols: Symbols::default(),
            store: Vec::new(),
            passive: BinaryHeap::new(),
            oldest: 0,
            active_lits: HashMap::new(),
            subsumers: DiscTree::new(),
            occurrences: HashMap::new(),
            retained: HashSet::new(),
            matcher: Matcher::new(),
            limits,
            options,
            stats: ProverStats::default(),
            result: None,
        };
        for (k, c) in clauses.iter().enumerate() {
            let ic = s.symbols.intern_clause(c);
            if ic.is_tautology() {
                continue;
            }
            let id = s.push(ic, Origin::Input(k));
            if s.store[id as usize].clause.lits.is_empty() {
                s.result = Some(SaturationOutcome::Refutation(s.extract(id)));
                break;
            }
        }
        s
    }

    pub fn stats(&self) -> ProverStats {
        self.stats
    }

    pub fn outcome(&self) -> Option<&SaturationOutcome> {
        self.result.as_ref()
    }

    /// Runs to completion, polling `cancel` once per iteration.
    pub fn run(&mut self, cancel: Option<&AtomicBool>) -> SaturationOutcome {
        loop {
            if let Some(flag) = cancel {
                if flag.load(Ordering::Relaxed) {
                    return self.cancel();
                }
            }
            if let Some(out) = self.step() {
                return out;
            }
        }
    }

    /// Stops the run, reporting it as cancelled.
    pub fn cancel(&mut self) -> SaturationOutcome {
        let cancelled = self.exhausted(Exhausted::Cancelled);
        self.result.get_or_insert(cancelled).clone()
    }

    /// One given-clause iteration; `Some` once the run has finished.
    pub fn step(&mut self) -> Option<SaturationOutcome> {
        if let Some(r) = &self.result {
            return Some(r.clone());
        }
        let started = Instant::now();
        let done = self.iterate();
        self.stats.elapsed += started.elapsed();
        let out = match done {
            Some(o) => Some(o),
            None if self.limits.max_time.is_some_and(|t| self.stats.elapsed >= t) => {
                Some(self.exhausted(Exhausted::Time))
            }
            None => None,
        };
        if let Some(o) = &out {
            self.result = Some(o.clone());
        }
        out
    }

    fn exhausted(&self, reason: Exhausted) -> SaturationOutcome {
        SaturationOutcome::ResourceOut(ResourceReport { reason, stats: self.stats })
    }

    /// The passive clause with the smallest id, every `AGE_RATIO`-th pick.
    /// Picking by weight alone is unfair: an endless supply of light
    /// clauses would starve heavier ones that a refutation needs.
    fn oldest_passive(&mut self) -> Option<u32> {
        if self.stats.given % AGE_RATIO != AGE_RATIO - 1 {
            return None;
        }
        while self.oldest < self.store.len() && self.store[self.oldest].state != State::Passive {
            self.oldest += 1;
        }
        (self.oldest < self.store.len()).then_some(self.oldest as u32)
    }

    fn iterate(&mut self) -> Option<SaturationOutcome> {
        let given = self.oldest_passive();
        let given = given.map_or_else(|| self.lightest_passive(), Ok);
        let given = match given {
            Ok(id) => id,
            Err(done) => return Some(done),
        };
        self.stats.given += 1;
        self.activate(given)
    }

    /// Pops the weight heap, skipping entries that are no longer passive.
    /// With no passive clause left the run is over.
    fn lightest_passive(&mut self) -> Result<u32, SaturationOutcome> {
        let given = loop {
            let Some(Reverse((_, id))) = self.passive.pop() else {
                return Err(if self.stats.discarded_by_weight > 0 {
                    self.exhausted(Exhausted::Weight)
                } else {
                    SaturationOutcome::Saturated
                });
            };
            if self.store[id as usize].state == State::Passive {
                break id;
            }
        };
        Ok(given)
    }

    fn activate(&mut self, given: u32) -> Option<SaturationOutcome> {
        if self.options.backward_subsumption {
            self.backward_subsume(given);
        }
        self.store[given as usize].state = State::Active;
        let e = &self.store[given as usize];
        for (i, l) in e.clause.lits.iter().enumerate() {
            if e.eligible(i) {
                self.active_lits.entry(l.key()).or_default().push((given, i as u16));
            }
        }
        let mut fresh: Vec<(Vec<Lit>, Origin)> = Vec::new();
        self.factors(given, &mut fresh);
        self.resolvents(given, &mut fresh);
        for (lits, origin) in fresh {
            match self.add(lits, origin) {
                Added::Empty(id) => return Some(SaturationOutcome::Refutation(self.extract(id))),
                Added::Kept if self.stats.kept >= self.limits.max_clauses => {
                    return Some(self.exhausted(Exhausted::Clauses))
                }
                _ => {}
            }
        }
        None
    }

    fn factors(&self, id: u32, out: &mut Vec<(Vec<Lit>, Origin)>) {
        if self.store[id as usize].selected.is_some() {
            return;
        }
        let c = &self.store[id as usize].clause;
        for i in 0..c.lits.len() {
            for j in i + 1..c.lits.len() {
                let (a, b) = (&c.lits[i], &c.lits[j]);
                if a.pos != b.pos || a.pred != b.pred {
                    continue;
                }
                let mut bind = Bindings::new(c.nvars as usize);
                if !bind.unify_args(&a.args, 0, &b.args, 0) {
                    continue;
                }
                let lits = c.lits.iter().map(|l| bind.apply_lit(l, 0)).collect();
                let sigma = bind.bound().map(|v| (v as Var, bind.value(v).expect("bound"))).collect();
                out.push((lits, Origin::Factor { parent: id, first: i as u16, second: j as u16, sigma }));
            }
        }
    }

    fn resolvents(&self, given: u32, out: &mut Vec<(Vec<Lit>, Origin)>) {
        let ge = &self.store[given as usize];
        let g = &ge.clause;
        for (i, gl) in g.lits.iter().enumerate() {
            if !ge.eligible(i) {
                continue;
            }
            let Some(partners) = self.active_lits.get(&(gl.key() ^ 1)) else {
                continue;
            };
            for &(pid, j) in partners {
                let p = &self.store[pid as usize];
                if p.state != State::Active {
                    continue;
                }
                let pc = &p.clause;
                let pl = &pc.lits[j as usize];
                // the given clause is the left premise
                let off = g.nvars;
                let mut bind = Bindings::new((g.nvars + pc.nvars) as usize);
                if !bind.unify_args(&gl.args, 0, &pl.args, off) {
                    continue;
                }
                let mut lits = Vec::with_capacity(g.lits.len() + pc.lits.len() - 2);
                for (k, l) in g.lits.iter().enumerate() {
                    if k != i {
                        lits.push(bind.apply_lit(l, 0));
                    }
                }
                for (k, l) in pc.lits.iter().enumerate() {
                    if k != j as usize {
                        lits.push(bind.apply_lit(l, off));
                    }
                }
                let sigma = bind.bound().map(|v| (v as Var, bind.value(v).expect("bound"))).collect();
                out.push((
                    lits,
                    Origin::Resolve { left: given, left_lit: i as u16, right: pid, right_lit: j, sigma },
                ));
            }
        }
    }

    fn add(&mut self, lits: Vec<Lit>, origin: Origin) -> Added {
        self.stats.generated += 1;
        let c = IClause::normalized(lits);
        if c.lits.is_empty() {
            return Added::Empty(self.push(c, origin));
        }
        if c.is_tautology() {
            return Added::Dropped;
        }
        if c.weight > self.limits.max_weight {
            self.stats.discarded_by_weight += 1;
            return Added::Dropped;
        }
        if self.options.forward_subsumption && self.forward_subsumed(&c) {
            self.stats.subsumed += 1;
            return Added::Dropped;
        }
        if self.is_duplicate(&c) {
            return Added::Dropped;
        }
        self.push(c, origin);
        Added::Kept
    }

    fn is_duplicate(&mut self, c: &IClause) -> bool {
        let mut key = c.lits.clone();
        key.sort_unstable();
        !self.retained.insert(key)
    }

    fn push(&mut self, clause: IClause, origin: Origin) -> u32 {
        let id = self.store.len() as u32;
        if let Some(l) = clause.lits.iter().max_by_key(|l| l.weight() - l.var_count()) {
            self.subsumers.insert(l, id);
        }
        let mut keys: Vec<(u32, u8, u64)> = clause.lits.iter().flat_map(facets).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            self.occurrences.entry(k).or_default().push(id);
        }
        self.passive.push(Reverse((clause.weight, id)));
        let selected = if self.options.negative_selection { select(&clause) } else { None };
        self.store.push(Entry { clause, origin, state: State::Passive, selected });
        self.stats.kept += 1;
        id
    }

    fn forward_subsumed(&mut self, c: &IClause) -> bool {
        let (store, matcher) = (&self.store, &mut self.matcher);
        c.lits.iter().any(|l| {
            self.subsumers.generalizations(l, &mut |d| {
                let e = &store[d as usize];
                e.state != State::Deleted && matcher.subsumes(&e.clause, c)
            })
        })
    }

    fn backward_subsume(&mut self, given: u32) {
        let g = &self.store[given as usize].clause;
        // instances of a literal share all of its facets
        let Some(key) = g
            .lits
            .iter()
            .flat_map(facets)
            .min_by_key(|k| self.occurrences.get(k).map_or(0, Vec::len))
        else {
            return;
        };
        let Some(cands) = self.occurrences.get(&key) else {
            return;
        };
        let mut victims = Vec::new();
        for &d in cands {
            if d == given || self.store[d as usize].state == State::Deleted {
                continue;
            }
            if self.matcher.subsumes(g, &self.store[d as usize].clause) {
                victims.push(d);
            }
        }
        for d in victims {
            self.store[d as usize].state = State::Deleted;
            self.stats.subsumed += 1;
        }
        // drop stale index entries now and then
        if self.stats.given.is_multiple_of(512) {
            let store = &self.store;
            let live = |id: &u32| store[*id as usize].state != State::Deleted;
            for v in self.occurrences.values_mut() {
                v.retain(live);
            }
            self.subsumers.retain(|id| live(&id));
            for v in self.active_lits.values_mut() {
                v.retain(|(id, _)| live(id));
            }
        }
    }

    /// The ancestors of `empty` as a proof, premises before conclusions.
    fn extract(&self, empty: u32) -> Proof {
        let mut needed = vec![false; self.store.len()];
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut needed[id as usize], true) {
                continue;
            }
            match &self.store[id as usize].origin {
                Origin::Input(_) => {}
                Origin::Resolve { left, right, .. } => stack.extend([*left, *right]),
                Origin::Factor { parent, .. } => stack.push(*parent),
            }
        }
        let mut index_of = HashMap::new();
        let mut steps = Vec::new();
        for (id, _) in needed.iter().enumerate().filter(|(_, n)| **n) {
            let e = &self.store[id];
            let clause = self.symbols.extern_clause(&e.clause);
            let (rule, unifier) = match &e.origin {
                Origin::Input(k) => (Inference::Input { index: *k }, Substitution::new()),
                Origin::Resolve { left, left_lit, right, right_lit, sigma } => {
                    let nl = self.store[*left as usize].clause.nvars;
                    let name = |v: Var| {
                        if v < nl {
                            format!("x{v}")
                        } else {
                            format!("x{}{APART_SUFFIX}", v - nl)
                        }
                    };
                    (
                        Inference::Resolve {
                            left: index_of[left],
                            left_lit: *left_lit as usize,
                            right: index_of[right],
                            right_lit: *right_lit as usize,
                        },
                        self.extern_sigma(sigma, &name),
                    )
                }
                Origin::Factor { parent, first, second, sigma } => (
                    Inference::Factor {
                        parent: index_of[parent],
                        first: *first as usize,
                        second: *second as usize,
                    },
                    self.extern_sigma(sigma, &|v| format!("x{v}")),
                ),
            };
            index_of.insert(id as u32, steps.len());
            steps.push(ProofStep { rule, clause, unifier });
        }
        Proof { steps }
    }

    fn extern_sigma(&self, sigma: &[(Var, T)], name: &dyn Fn(Var) -> String) -> Substitution {
        let mut s = Substitution::new();
        for (v, t) in sigma {
            s.insert(name(*v), self.symbols.extern_term(t, name));
        }
        s
    }
}

/// Saturates `clauses` with default options.
pub fn saturate(clauses: &[Clause], limits: SaturationLimits) -> SaturationOutcome {
    Saturation::new(clauses, limits, ProverOptions::default()).run(None)
}
