use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::ModalFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtlError {
    #[error("lasso word has an empty loop")]
    EmptyLoop,
    #[error("indexed modality in a temporal formula")]
    IndexedModality,
}

/// An ultimately periodic word: `prefix` followed by `cycle` repeated
/// forever. Each letter is the set of atoms true at that position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LassoWord {
    pub prefix: Vec<BTreeSet<String>>,
    pub cycle: Vec<BTreeSet<String>>,
}

impl LassoWord {
    pub fn new(prefix: Vec<BTreeSet<String>>, cycle: Vec<BTreeSet<String>>) -> Self {
        LassoWord { prefix, cycle }
    }

    /// Number of distinct positions in the lasso graph.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter(&self, i: usize) -> &BTreeSet<String> {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The same infinite word with its first letter dropped.
    pub fn shifted(&self) -> LassoWord {
        if let Some((_, rest)) = self.prefix.split_first() {
            LassoWord::new(rest.to_vec(), self.cycle.clone())
        } else {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            LassoWord::new(Vec::new(), cycle)
        }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = |s: &BTreeSet<String>| {
            format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","))
        };
        let prefix: Vec<String> = self.prefix.iter().map(letter).collect();
        let cycle: Vec<String> = self.cycle.iter().map(letter).collect();
        write!(f, "[{}] ([{}])^w", prefix.join(" "), cycle.join(" "))
    }
}

/// Truth of `f` at position 0 of the word. Box and diamond quantify over all
/// positions at or after the current one; `X` moves one position.
pub fn eval_ltl_lasso(f: &ModalFormula, word: &LassoWord) -> Result<bool, LtlError> {
    if word.cycle.is_empty() {
        return Err(LtlError::EmptyLoop);
    }
    if f.has_indexed_modality() {
        return Err(LtlError::IndexedModality);
    }
    Ok(truth_table(f, word)[0])
}

/// Truth value of `f` at each of the `prefix + cycle` positions of the lasso
/// graph, where the last position steps back to the start of the cycle.
fn truth_table(f: &ModalFormula, word: &LassoWord) -> Vec<bool> {
    let len = word.len();
    let loop_start = word.prefix.len();
    let next = |i: usize| if i + 1 < len { i + 1 } else { loop_start };
    let sub = |g: &ModalFormula| truth_table(g, word);
    let zip = |a: &ModalFormula, b: &ModalFormula, op: fn(bool, bool) -> bool| {
        sub(a).into_iter().zip(sub(b)).map(|(x, y)| op(x, y)).collect()
    };
    match f {
        ModalFormula::True => vec![true; len],
        ModalFormula::False => vec![false; len],
        ModalFormula::Atom(p) => (0..len).map(|i| word.letter(i).contains(p)).collect(),
        ModalFormula::Not(a) => sub(a).into_iter().map(|x| !x).collect(),
        ModalFormula::And(a, b) => zip(a, b, |x, y| x && y),
        ModalFormula::Or(a, b) => zip(a, b, |x, y| x || y),
        ModalFormula::Imp(a, b) => zip(a, b, |x, y| !x || y),
        ModalFormula::Iff(a, b) => zip(a, b, |x, y| x == y),
        ModalFormula::Next(a) => {
            let t = sub(a);
            (0..len).map(|i| t[next(i)]).collect()
        }
        // Positions reachable from i are exactly min(i, loop_start)..len.
        ModalFormula::Box(_, a) => {
            let t = sub(a);
            (0..len).map(|i| t[i.min(loop_start)..].iter().all(|&x| x)).collect()
        }
        ModalFormula::Dia(_, a) => {
            let t = sub(a);
            (0..len).map(|i| t[i.min(loop_start)..].iter().any(|&x| x)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_modal;

    fn letter(atoms: &[&str]) -> BTreeSet<String> {
        atoms.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn examples() {
        let f = parse_modal("X X box p").unwrap();
        let w = LassoWord::new(vec![], vec![letter(&["p"])]);
        assert!(eval_ltl_lasso(&f, &w).unwrap());

        let w = LassoWord::new(vec![], vec![letter(&["p"]), letter(&[])]);
        assert!(!eval_ltl_lasso(&parse_modal("box p").unwrap(), &w).unwrap());

        let w = LassoWord::new(vec![letter(&[])], vec![letter(&["p"])]);
        assert!(eval_ltl_lasso(&parse_modal("dia p").unwrap(), &w).unwrap());
    }

    #[test]
    fn eventually_always_and_loops() {
        // p holds on the cycle only, so eventually-always p but not always p
        let w = LassoWord::new(vec![letter(&[]), letter(&[])], vec![letter(&["p"])]);
        assert!(eval_ltl_lasso(&parse_modal("dia box p").unwrap(), &w).unwrap());
        assert!(!eval_ltl_lasso(&parse_modal("box p").unwrap(), &w).unwrap());
        assert!(eval_ltl_lasso(&parse_modal("X X p").unwrap(), &w).unwrap());
        assert!(!eval_ltl_lasso(&parse_modal("X p").unwrap(), &w).unwrap());
        let alternating = LassoWord::new(vec![], vec![letter(&["p"]), letter(&[])]);
        assert!(eval_ltl_lasso(&parse_modal("box dia p & box dia ~p").unwrap(), &alternating).unwrap());
        assert!(eval_ltl_lasso(&parse_modal("X X p").unwrap(), &alternating).unwrap());
    }

    #[test]
    fn errors() {
        let w = LassoWord::new(vec![letter(&["p"])], vec![]);
        assert_eq!(eval_ltl_lasso(&ModalFormula::True, &w), Err(LtlError::EmptyLoop));
        let w = LassoWord::new(vec![], vec![letter(&[])]);
        assert_eq!(
            eval_ltl_lasso(&parse_modal("[a]p").unwrap(), &w),
            Err(LtlError::IndexedModality)
        );
    }

    #[test]
    fn shifting() {
        let w = LassoWord::new(vec![letter(&["a"])], vec![letter(&["b"]), letter(&["c"])]);
        let s = w.shifted();
        for i in 0..10 {
            assert_eq!(s.letter(i), w.letter(i + 1));
        }
        let s2 = s.shifted();
        for i in 0..10 {
            assert_eq!(s2.letter(i), w.letter(i + 2));
        }
    }
}
