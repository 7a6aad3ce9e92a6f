//! Discrimination tree over literals, retrieving stored entries whose
//! literal may generalize a query literal.

use std::collections::HashMap;

use super::term::{Lit, T};

/// Preorder symbol code: 0 is a variable, otherwise symbol and arity.
fn code(t: &T) -> u64 {
    match t {
        T::V(_) => STAR,
        T::F(f, args) => 1 + ((*f as u64) << 16 | args.len() as u64),
    }
}

const STAR: u64 = 0;

/// Root edge codes live in a separate range from term codes.
fn root_code(l: &Lit) -> u64 {
    1 << 63 | (l.key() as u64) << 16 | l.args.len() as u64
}

/// Flattened query: (code, index just past the subterm).
fn flatten(l: &Lit, out: &mut Vec<(u64, usize)>) {
    fn go(t: &T, out: &mut Vec<(u64, usize)>) {
        let at = out.len();
        out.push((code(t), 0));
        if let T::F(_, args) = t {
            for a in args.iter() {
                go(a, out);
            }
        }
        out[at].1 = out.len();
    }
    out.clear();
    for a in l.args.iter() {
        go(a, out);
    }
}

#[derive(Debug, Default)]
pub(crate) struct DiscTree {
    edges: HashMap<(u32, u64), u32>,
    ids: Vec<Vec<u32>>,
    scratch: Vec<(u64, usize)>,
}

impl DiscTree {
    pub(crate) fn new() -> Self {
        DiscTree { edges: HashMap::new(), ids: vec![Vec::new()], scratch: Vec::new() }
    }

    fn child(&mut self, node: u32, c: u64) -> u32 {
        let next = self.ids.len() as u32;
        let id = *self.edges.entry((node, c)).or_insert(next);
        if id == next {
            self.ids.push(Vec::new());
        }
        id
    }

    pub(crate) fn insert(&mut self, l: &Lit, id: u32) {
        let mut node = self.child(0, root_code(l));
        let mut q = std::mem::take(&mut self.scratch);
        flatten(l, &mut q);
        for &(c, _) in &q {
            node = self.child(node, c);
        }
        self.scratch = q;
        self.ids[node as usize].push(id);
    }

    /// Calls `f` on every entry whose literal, with variables as wildcards,
    /// matches `l` with its variables rigid. Stops early when `f` returns true.
    pub(crate) fn generalizations(&mut self, l: &Lit, f: &mut dyn FnMut(u32) -> bool) -> bool {
        let Some(&root) = self.edges.get(&(0, root_code(l))) else {
            return false;
        };
        let mut q = std::mem::take(&mut self.scratch);
        flatten(l, &mut q);
        let found = self.walk(root, 0, &q, f);
        self.scratch = q;
        found
    }

    fn walk(&self, node: u32, pos: usize, q: &[(u64, usize)], f: &mut dyn FnMut(u32) -> bool) -> bool {
        if pos == q.len() {
            return self.ids[node as usize].iter().any(|&id| f(id));
        }
        if let Some(&n) = self.edges.get(&(node, STAR)) {
            if self.walk(n, q[pos].1, q, f) {
                return true;
            }
        }
        let c = q[pos].0;
        if c != STAR {
            if let Some(&n) = self.edges.get(&(node, c)) {
                return self.walk(n, pos + 1, q, f);
            }
        }
        false
    }

    pub(crate) fn retain(&mut self, live: impl Fn(u32) -> bool) {
        for v in &mut self.ids {
            v.retain(|&id| live(id));
        }
    }
}
