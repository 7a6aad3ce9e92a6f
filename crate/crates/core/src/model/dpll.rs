//! Iterative DPLL: two-watched-literal unit propagation, pure-literal
//! elimination at the root, first-unassigned branching (false first) and
//! chronological backtracking. No learning; runs are deterministic.

/// Internal literal code: `2 * var + negated`, variables from 0.
type L = u32;

fn code(lit: i32) -> L {
    let v = lit.unsigned_abs() - 1;
    2 * v + (lit < 0) as u32
}

fn var(l: L) -> usize {
    (l >> 1) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpllResult {
    /// Total assignment; index `i` holds the value of variable `i + 1`.
    Sat(Vec<bool>),
    Unsat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpllStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

pub struct Dpll {
    nvars: usize,
    clauses: Vec<Vec<L>>,
    watches: Vec<Vec<u32>>,
    /// 0 unassigned, 1 true, -1 false.
    value: Vec<i8>,
    trail: Vec<L>,
    /// Trail position and flipped flag of each decision.
    levels: Vec<(usize, bool)>,
    qhead: usize,
    next_free: usize,
    /// Root units, including pure literals.
    roots: Vec<L>,
    trivially_unsat: bool,
    started: bool,
    result: Option<DpllResult>,
    stats: DpllStats,
}

impl Dpll {
    /// Clause literals are DIMACS-style nonzero integers over `1..=nvars`.
    pub fn new(nvars: usize, clauses: &[Vec<i32>]) -> Self {
        let mut s = Dpll {
            nvars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            value: vec![0; nvars],
            trail: Vec::new(),
            levels: Vec::new(),
            qhead: 0,
            next_free: 0,
            roots: Vec::new(),
            trivially_unsat: false,
            started: false,
            result: None,
            stats: DpllStats::default(),
        };
        for c in clauses {
            s.push_clause(c);
        }
        s
    }

    pub fn stats(&self) -> DpllStats {
        self.stats
    }

    fn push_clause(&mut self, c: &[i32]) {
        let mut lits: Vec<L> = c.iter().map(|&l| code(l)).collect();
        assert!(lits.iter().all(|&l| var(l) < self.nvars), "literal out of range");
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        match lits.len() {
            0 => self.trivially_unsat = true,
            1 => self.roots.push(lits[0]),
            _ => {
                let id = self.clauses.len() as u32;
                self.watches[lits[0] as usize].push(id);
                self.watches[lits[1] as usize].push(id);
                self.clauses.push(lits);
            }
        }
    }

    /// Adds a clause and restarts the search from the root.
    pub fn add_clause(&mut self, c: &[i32]) {
        self.push_clause(c);
        self.value.iter_mut().for_each(|v| *v = 0);
        self.trail.clear();
        self.levels.clear();
        self.qhead = 0;
        self.next_free = 0;
        self.started = false;
        self.result = None;
    }

    fn value_of(&self, l: L) -> i8 {
        let v = self.value[var(l)];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, l: L) {
        self.value[var(l)] = if l & 1 == 1 { -1 } else { 1 };
        self.trail.push(l);
    }

    /// False on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let falsified = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut ok = true;
            while i < ws.len() {
                let cid = ws[i] as usize;
                let c = &mut self.clauses[cid];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.value_of(first) == 1 {
                    i += 1;
                    continue;
                }
                let c = &self.clauses[cid];
                let replacement = (2..c.len()).find(|&k| self.value_of(c[k]) != -1);
                if let Some(k) = replacement {
                    let c = &mut self.clauses[cid];
                    c.swap(1, k);
                    let w = c[1];
                    self.watches[w as usize].push(cid as u32);
                    ws.swap_remove(i);
                    continue;
                }
                if self.value_of(first) == 0 {
                    self.assign(first);
                    i += 1;
                } else {
                    ok = false;
                    break;
                }
            }
            self.watches[falsified as usize] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    fn pure_literals(&self) -> Vec<L> {
        let mut seen = vec![0u8; self.nvars];
        for c in &self.clauses {
            for &l in c {
                seen[var(l)] |= 1 << (l & 1);
            }
        }
        for &l in &self.roots {
            seen[var(l)] |= 1 << (l & 1);
        }
        (0..self.nvars)
            .filter_map(|v| match seen[v] {
                1 => Some(2 * v as u32),
                2 => Some(2 * v as u32 + 1),
                _ => None,
            })
            .collect()
    }

    fn start(&mut self) -> bool {
        self.started = true;
        if self.trivially_unsat {
            return false;
        }
        let roots = self.roots.clone();
        for l in roots.into_iter().chain(self.pure_literals()) {
            match self.value_of(l) {
                0 => self.assign(l),
                -1 => return false,
                _ => {}
            }
        }
        self.propagate()
    }

    fn undo_to(&mut self, pos: usize) {
        for &l in &self.trail[pos..] {
            self.value[var(l)] = 0;
            self.next_free = self.next_free.min(var(l));
        }
        self.trail.truncate(pos);
        self.qhead = pos;
    }

    /// Flips the most recent unflipped decision; false when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some((pos, flipped)) = self.levels.pop() {
            let decision = self.trail[pos];
            self.undo_to(pos);
            if !flipped {
                self.levels.push((pos, true));
                self.assign(decision ^ 1);
                return true;
            }
        }
        false
    }

    /// Runs for about `budget` decisions plus propagations; `Some` once
    /// decided.
    pub fn step(&mut self, budget: u64) -> Option<DpllResult> {
        if let Some(r) = &self.result {
            return Some(r.clone());
        }
        let spent = |s: &DpllStats| s.decisions + s.propagations;
        let limit = spent(&self.stats) + budget.max(1);
        if !self.started && !self.start() {
            self.result = Some(DpllResult::Unsat);
            return self.result.clone();
        }
        loop {
            if !self.propagate() {
                self.stats.conflicts += 1;
                if !self.backtrack() {
                    self.result = Some(DpllResult::Unsat);
                    return self.result.clone();
                }
                continue;
            }
            while self.next_free < self.nvars && self.value[self.next_free] != 0 {
                self.next_free += 1;
            }
            if self.next_free == self.nvars {
                let model = self.value.iter().map(|&v| v == 1).collect();
                self.result = Some(DpllResult::Sat(model));
                return self.result.clone();
            }
            if spent(&self.stats) >= limit {
                return None;
            }
            self.stats.decisions += 1;
            self.levels.push((self.trail.len(), false));
            self.assign(2 * self.next_free as u32 + 1);
        }
    }

    pub fn solve(&mut self) -> DpllResult {
        loop {
            if let Some(r) = self.step(u64::MAX / 2) {
                return r;
            }
        }
    }
}

/// Decides `clauses` over variables `1..=nvars` to completion.
pub fn dpll(nvars: usize, clauses: &[Vec<i32>]) -> DpllResult {
    Dpll::new(nvars, clauses).solve()
}

/// Whether a total assignment satisfies every clause.
pub fn satisfies(assignment: &[bool], clauses: &[Vec<i32>]) -> bool {
    clauses.iter().all(|c| {
        c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
    })
}
