use std::collections::BTreeSet;

use thiserror::Error;

use crate::fol::FiniteStructure;
use crate::formula::{eval_modal, KripkeModel, LassoWord, ModalFormula, Modality};
use crate::translate::{modality_of_symbol, ModalSystem, Schema, REAL_WORLD, SUCCESSOR};

/// Reads a first-order model of a translated problem as a pointed Kripke
/// model: the domain becomes the worlds, `R`/`R_i` tables the relations,
/// unary tables of `atoms` the valuation and `w0` the real world. Skolem
/// tables are dropped. Relations of `indices` absent from `m` stay empty.
pub fn to_kripke(m: &FiniteStructure, indices: &BTreeSet<Modality>, atoms: &BTreeSet<String>) -> KripkeModel {
    let n = m.size();
    let real = m.apply(REAL_WORLD, &[]).unwrap_or(0);
    let mut k = KripkeModel::new(n, real).expect("domain is nonempty");
    for i in indices {
        k.declare_relation(i.clone());
    }
    for (name, table) in m.predicates() {
        if table.arity == 2 {
            if let Some(i) = modality_of_symbol(name) {
                k.declare_relation(i.clone());
                for a in 0..n {
                    for b in 0..n {
                        if table.get(&[a, b], n) {
                            k.add_edge(i.clone(), a, b).expect("in range");
                        }
                    }
                }
            }
        }
    }
    for p in atoms {
        k.declare_atom(p.clone());
        if let Some(t) = m.predicate(p).filter(|t| t.arity == 1) {
            for w in (0..n).filter(|&w| t.get(&[w], n)) {
                k.set_true(p.clone(), w).expect("in range");
            }
        }
    }
    if let Some(s) = m.function(SUCCESSOR).filter(|t| t.arity == 1) {
        k.set_successor(s.values.clone()).expect("total table");
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelCheckError {
    #[error("the goal holds at the real world")]
    GoalHolds,
    #[error("relation {relation} is not {property}")]
    Frame { relation: String, property: &'static str },
    #[error("evaluation failed: {0}")]
    Eval(String),
}

/// Confirms a countermodel independently of the translation: `goal` is
/// false at the real world and every relation has its frame properties.
pub fn check_countermodel(goal: &ModalFormula, system: &ModalSystem, k: &KripkeModel) -> Result<(), ModelCheckError> {
    match eval_modal(goal, k, k.real_world()) {
        Ok(false) => {}
        Ok(true) => return Err(ModelCheckError::GoalHolds),
        Err(e) => return Err(ModelCheckError::Eval(e.to_string())),
    }
    for (i, r) in k.relations() {
        for s in system.schemas_for(i).closure().iter() {
            if !s.holds_on(r, k.worlds()) {
                let relation = i.clone().map_or_else(|| "R".to_string(), |a| format!("R_{a}"));
                return Err(ModelCheckError::Frame { relation, property: Schema::property(s) });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LassoError {
    #[error("structure has no unary successor table")]
    NoSuccessor,
    #[error("start element {0} out of range")]
    Start(usize),
}

/// States visited from `start` under `S`: the segment before the first
/// repeated state and the cycle it enters.
pub fn lasso_states(m: &FiniteStructure, start: usize) -> Result<(Vec<usize>, Vec<usize>), LassoError> {
    let s = m.function(SUCCESSOR).filter(|t| t.arity == 1).ok_or(LassoError::NoSuccessor)?;
    if start >= m.size() {
        return Err(LassoError::Start(start));
    }
    let mut path = vec![start];
    loop {
        let next = s.values[*path.last().expect("nonempty")];
        if let Some(at) = path.iter().position(|&x| x == next) {
            let cycle = path.split_off(at);
            return Ok((path, cycle));
        }
        path.push(next);
    }
}

/// The ultimately periodic word read along `S` from `start`, each letter
/// holding the atoms of `atoms` true at that state.
pub fn extract_lasso(m: &FiniteStructure, start: usize, atoms: &BTreeSet<String>) -> Result<LassoWord, LassoError> {
    let (prefix, cycle) = lasso_states(m, start)?;
    let n = m.size();
    let letter = |w: usize| -> BTreeSet<String> {
        atoms
            .iter()
            .filter(|p| m.predicate(p).is_some_and(|t| t.arity == 1 && t.get(&[w], n)))
            .cloned()
            .collect()
    };
    Ok(LassoWord::new(prefix.into_iter().map(letter).collect(), cycle.into_iter().map(letter).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_modal;

    fn successor_structure(s: Vec<usize>, p_true: &[usize]) -> FiniteStructure {
        let n = s.len();
        let mut m = FiniteStructure::new(n);
        m.set_function(SUCCESSOR, 1, s);
        m.set_predicate("p", 1, (0..n).map(|w| p_true.contains(&w)).collect());
        m
    }

    #[test]
    fn lasso_shapes() {
        let m = successor_structure(vec![0], &[0]);
        assert_eq!(lasso_states(&m, 0).unwrap(), (vec![], vec![0]));
        let m = successor_structure(vec![1, 2, 2], &[]);
        assert_eq!(lasso_states(&m, 0).unwrap(), (vec![0, 1], vec![2]));
        let m = successor_structure(vec![1, 0], &[1]);
        assert_eq!(lasso_states(&m, 0).unwrap(), (vec![], vec![0, 1]));
        let atoms: BTreeSet<String> = ["p".to_string()].into();
        let w = extract_lasso(&m, 0, &atoms).unwrap();
        assert!(w.cycle[0].is_empty() && w.cycle[1].contains("p"));
    }

    #[test]
    fn missing_successor_is_an_error() {
        let m = FiniteStructure::new(1);
        assert_eq!(lasso_states(&m, 0), Err(LassoError::NoSuccessor));
    }

    #[test]
    fn two_world_structure_reads_back() {
        let mut m = FiniteStructure::new(2);
        m.set_predicate("R", 2, vec![false, true, true, false]);
        m.set_predicate("p", 1, vec![false, true]);
        m.set_function(REAL_WORLD, 0, vec![0]);
        m.set_function("sk0", 1, vec![1, 0]);
        let atoms: BTreeSet<String> = ["p".to_string()].into();
        let k = to_kripke(&m, &[None].into(), &atoms);
        assert_eq!(k.worlds(), 2);
        assert_eq!(k.real_world(), 0);
        assert!(k.relation(&None).unwrap().contains(0, 1));
        assert!(k.holds("p", 1) && !k.holds("p", 0));
        let goal = parse_modal("box p -> box box p").unwrap();
        check_countermodel(&goal, &ModalSystem::named("K").unwrap(), &k).unwrap();
        let s4 = ModalSystem::named("S4").unwrap();
        assert!(matches!(check_countermodel(&goal, &s4, &k), Err(ModelCheckError::Frame { .. })));
    }

    #[test]
    fn dead_end_world() {
        let mut m = FiniteStructure::new(1);
        m.set_predicate("R", 2, vec![false]);
        m.set_predicate("p", 1, vec![false]);
        let k = to_kripke(&m, &[None].into(), &["p".to_string()].into());
        assert!(k.relation(&None).unwrap().is_empty());
        assert!(eval_modal(&parse_modal("box p").unwrap(), &k, 0).unwrap());
    }
}
