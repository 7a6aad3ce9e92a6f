use thiserror::Error;

use super::{KripkeModel, Modality, ModalFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no accessibility relation for modality {0}")]
    MissingRelation(String),
    #[error("next-time operator in a Kripke evaluation")]
    NextTime,
    #[error("world {0} not in the model")]
    NoSuchWorld(usize),
}

fn label(index: &Modality) -> String {
    index.as_deref().map_or("<default>".to_string(), str::to_string)
}

/// Kripke satisfaction of `f` at `world`.
pub fn eval_modal(f: &ModalFormula, m: &KripkeModel, world: usize) -> Result<bool, EvalError> {
    if world >= m.worlds() {
        return Err(EvalError::NoSuchWorld(world));
    }
    eval(f, m, world)
}

fn eval(f: &ModalFormula, m: &KripkeModel, w: usize) -> Result<bool, EvalError> {
    Ok(match f {
        ModalFormula::True => true,
        ModalFormula::False => false,
        ModalFormula::Atom(p) => m.holds(p, w),
        ModalFormula::Not(a) => !eval(a, m, w)?,
        ModalFormula::And(a, b) => eval(a, m, w)? && eval(b, m, w)?,
        ModalFormula::Or(a, b) => eval(a, m, w)? || eval(b, m, w)?,
        ModalFormula::Imp(a, b) => !eval(a, m, w)? || eval(b, m, w)?,
        ModalFormula::Iff(a, b) => eval(a, m, w)? == eval(b, m, w)?,
        ModalFormula::Box(i, a) => {
            let r = m.relation(i).ok_or_else(|| EvalError::MissingRelation(label(i)))?;
            for v in r.successors(w) {
                if !eval(a, m, v)? {
                    return Ok(false);
                }
            }
            true
        }
        ModalFormula::Dia(i, a) => {
            let r = m.relation(i).ok_or_else(|| EvalError::MissingRelation(label(i)))?;
            for v in r.successors(w) {
                if eval(a, m, v)? {
                    return Ok(true);
                }
            }
            false
        }
        ModalFormula::Next(_) => return Err(EvalError::NextTime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_modal;

    /// The two-world countermodel of `box p -> box box p` with w0 -> w1,
    /// w1 -> w0 and p true only at w1.
    fn two_cycle() -> KripkeModel {
        "worlds 2 real 0\nR 0 1\nR 1 0\nV p 1\n".parse().unwrap()
    }

    #[test]
    fn four_fails_on_two_cycle() {
        let f = parse_modal("box p -> box box p").unwrap();
        assert!(!eval_modal(&f, &two_cycle(), 0).unwrap());
        assert!(eval_modal(&f, &two_cycle(), 1).unwrap());
    }

    #[test]
    fn atoms_and_dead_ends() {
        let m = two_cycle();
        assert!(eval_modal(&ModalFormula::atom("p"), &m, 1).unwrap());
        let dead = KripkeModel::new(1, 0).unwrap();
        assert!(eval_modal(&parse_modal("box p").unwrap(), &dead, 0).unwrap());
        assert!(!eval_modal(&parse_modal("dia true").unwrap(), &dead, 0).unwrap());
    }

    #[test]
    fn errors() {
        let m = two_cycle();
        assert_eq!(
            eval_modal(&parse_modal("[a]p").unwrap(), &m, 0),
            Err(EvalError::MissingRelation("a".into()))
        );
        assert_eq!(eval_modal(&parse_modal("X p").unwrap(), &m, 0), Err(EvalError::NextTime));
        assert_eq!(eval_modal(&ModalFormula::True, &m, 7), Err(EvalError::NoSuchWorld(7)));
    }
}
