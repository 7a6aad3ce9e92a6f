use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::ModalFormula;

/// Parameters of a random modal 3CNF formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomCnfSpec {
    /// Atoms are named `p1` to `p{atoms}`.
    pub atoms: usize,
    pub clauses: usize,
    /// Nesting limit of boxed subclauses.
    pub depth: usize,
    pub seed: u64,
    /// Never put a literal and its complement in the same clause.
    pub filtered: bool,
}

impl Default for RandomCnfSpec {
    fn default() -> Self {
        RandomCnfSpec { atoms: 3, clauses: 5, depth: 2, seed: 0, filtered: false }
    }
}

const WIDTH: usize = 3;

/// A conjunction of `clauses` disjunctions of three literals. A literal is
/// a possibly negated atom or, while depth remains, a possibly negated box
/// of a further three-literal clause. The same seed gives the same formula.
pub fn gen_random_3cnf(spec: RandomCnfSpec) -> ModalFormula {
    assert!(spec.atoms > 0 && spec.clauses > 0, "a random formula needs atoms and clauses");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let clauses: Vec<ModalFormula> = (0..spec.clauses).map(|_| clause(&mut rng, &spec, spec.depth)).collect();
    conjoin(clauses, ModalFormula::and)
}

fn conjoin(items: Vec<ModalFormula>, op: fn(ModalFormula, ModalFormula) -> ModalFormula) -> ModalFormula {
    items.into_iter().reduce(op).expect("nonempty")
}

fn clause(rng: &mut ChaCha8Rng, spec: &RandomCnfSpec, depth: usize) -> ModalFormula {
    let mut lits: Vec<ModalFormula> = Vec::with_capacity(WIDTH);
    while lits.len() < WIDTH {
        let lit = literal(rng, spec, depth);
        if spec.filtered && lits.iter().any(|l| complementary(l, &lit)) {
            continue;
        }
        lits.push(lit);
    }
    conjoin(lits, ModalFormula::or)
}

fn literal(rng: &mut ChaCha8Rng, spec: &RandomCnfSpec, depth: usize) -> ModalFormula {
    let base = if depth > 0 && rng.random_bool(0.5) {
        clause(rng, spec, depth - 1).nec()
    } else {
        ModalFormula::atom(format!("p{}", rng.random_range(1..=spec.atoms)))
    };
    if rng.random_bool(0.5) {
        base.not()
    } else {
        base
    }
}

fn complementary(a: &ModalFormula, b: &ModalFormula) -> bool {
    match (a, b) {
        (ModalFormula::Not(x), y) | (y, ModalFormula::Not(x)) => **x == *y,
        _ => false,
    }
}

/// Literals of a clause built by the generator, flattening the disjunction.
pub fn clause_literals(c: &ModalFormula) -> Vec<&ModalFormula> {
    match c {
        ModalFormula::Or(a, b) => {
            let mut v = clause_literals(a);
            v.extend(clause_literals(b));
            v
        }
        other => vec![other],
    }
}

/// True when no clause at any depth holds a literal and its complement.
pub fn is_complement_free(f: &ModalFormula) -> bool {
    match f {
        ModalFormula::And(a, b) => is_complement_free(a) && is_complement_free(b),
        c => {
            let lits = clause_literals(c);
            let flat = lits.iter().enumerate().all(|(i, a)| lits[i + 1..].iter().all(|b| !complementary(a, b)));
            flat && lits.iter().all(|l| match l {
                ModalFormula::Box(None, inner) => is_complement_free(inner),
                ModalFormula::Not(x) => match &**x {
                    ModalFormula::Box(None, inner) => is_complement_free(inner),
                    _ => true,
                },
                _ => true,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_modal, print_modal};

    #[test]
    fn same_seed_same_formula() {
        let spec = RandomCnfSpec { seed: 7, ..RandomCnfSpec::default() };
        assert_eq!(gen_random_3cnf(spec), gen_random_3cnf(spec));
        assert_ne!(gen_random_3cnf(spec), gen_random_3cnf(RandomCnfSpec { seed: 8, ..spec }));
    }

    #[test]
    fn shape_of_a_single_clause() {
        for seed in 0..50 {
            let f = gen_random_3cnf(RandomCnfSpec { atoms: 2, clauses: 1, depth: 1, seed, filtered: false });
            assert_eq!(clause_literals(&f).len(), 3);
            assert!(f.modal_depth() <= 1);
            assert!(f.atoms().iter().all(|a| a == "p1" || a == "p2"));
        }
    }

    #[test]
    fn filtered_mode_avoids_complements() {
        let mut saw_complement = false;
        for seed in 0..200 {
            let spec = RandomCnfSpec { atoms: 2, clauses: 4, depth: 2, seed, filtered: false };
            saw_complement |= !is_complement_free(&gen_random_3cnf(spec));
            let f = gen_random_3cnf(RandomCnfSpec { filtered: true, ..spec });
            assert!(is_complement_free(&f));
            assert_eq!(parse_modal(&print_modal(&f)).unwrap(), f);
        }
        assert!(saw_complement, "unfiltered generation does produce complementary literals");
    }
}
