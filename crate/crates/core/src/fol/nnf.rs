use super::FolFormula as F;

/// Negation normal form: `Imp` and `Iff` eliminated, negations only on
/// atoms. `A <-> B` becomes `(~A | B) & (~B | A)`.
pub fn to_nnf(f: &F) -> F {
    nnf(f, true)
}

fn nnf(f: &F, positive: bool) -> F {
    match (f, positive) {
        (F::True, true) | (F::False, false) => F::True,
        (F::True, false) | (F::False, true) => F::False,
        (F::Pred(..), true) => f.clone(),
        (F::Pred(..), false) => f.clone().not(),
        (F::Not(a), _) => nnf(a, !positive),
        (F::And(a, b), true) => nnf(a, true).and(nnf(b, true)),
        (F::And(a, b), false) => nnf(a, false).or(nnf(b, false)),
        (F::Or(a, b), true) => nnf(a, true).or(nnf(b, true)),
        (F::Or(a, b), false) => nnf(a, false).and(nnf(b, false)),
        (F::Imp(a, b), true) => nnf(a, false).or(nnf(b, true)),
        (F::Imp(a, b), false) => nnf(a, true).and(nnf(b, false)),
        (F::Iff(a, b), true) => nnf(a, false)
            .or(nnf(b, true))
            .and(nnf(b, false).or(nnf(a, true))),
        (F::Iff(a, b), false) => nnf(a, true)
            .or(nnf(b, true))
            .and(nnf(a, false).or(nnf(b, false))),
        (F::Forall(v, a), true) => F::forall(v.clone(), nnf(a, true)),
        (F::Forall(v, a), false) => F::exists(v.clone(), nnf(a, false)),
        (F::Exists(v, a), true) => F::exists(v.clone(), nnf(a, true)),
        (F::Exists(v, a), false) => F::forall(v.clone(), nnf(a, false)),
    }
}

#[cfg(test)]
pub(crate) fn is_nnf(f: &F) -> bool {
    match f {
        F::True | F::False | F::Pred(..) => true,
        F::Not(a) => matches!(**a, F::Pred(..)),
        F::And(a, b) | F::Or(a, b) => is_nnf(a) && is_nnf(b),
        F::Imp(..) | F::Iff(..) => false,
        F::Forall(_, a) | F::Exists(_, a) => is_nnf(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_fol;

    fn check(input: &str, expected: &str) {
        let got = to_nnf(&parse_fol(input).unwrap());
        assert_eq!(got, parse_fol(expected).unwrap(), "{input}");
        assert!(is_nnf(&got));
    }

    #[test]
    fn examples() {
        check("~all v. (R(w0,v) -> p(v))", "ex v. (R(w0,v) & ~p(v))");
        check("~~P(a)", "P(a)");
        check("A <-> B", "(~A | B) & (~B | A)");
    }

    #[test]
    fn negated_connectives() {
        check("~(A <-> B)", "(A | B) & (~A | ~B)");
        check("~(A -> B)", "A & ~B");
        check("~ex x. (p(x) | q(x))", "all x. (~p(x) & ~q(x))");
        check("~true | false", "false | false");
    }
}
