use std::fmt;

use super::{FolFormula as F, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Axiom,
    Hypothesis,
    Conjecture,
    NegatedConjecture,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Conjecture => "conjecture",
            Role::NegatedConjecture => "negated_conjecture",
        })
    }
}

fn is_lower_word(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn atomic_word(s: &str) -> String {
    if is_lower_word(s) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Variables are prefixed so any name becomes an `upper_word`.
fn variable(s: &str) -> String {
    let body: String = s.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("V_{body}")
}

fn term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&variable(v)),
        Term::Const(c) => out.push_str(&atomic_word(c)),
        Term::App(g, args) if args.is_empty() => out.push_str(&atomic_word(g)),
        Term::App(g, args) => {
            out.push_str(&atomic_word(g));
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                term(a, out);
            }
            out.push(')');
        }
    }
}

fn formula(f: &F, out: &mut String) {
    let binary = |a: &F, op: &str, b: &F, out: &mut String| {
        out.push('(');
        formula(a, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        formula(b, out);
        out.push(')');
    };
    match f {
        F::True => out.push_str("$true"),
        F::False => out.push_str("$false"),
        F::Pred(p, args) => term(&Term::App(p.clone(), args.clone()), out),
        F::Not(a) => {
            out.push_str("~ ");
            formula(a, out);
        }
        F::And(a, b) => binary(a, "&", b, out),
        F::Or(a, b) => binary(a, "|", b, out),
        F::Imp(a, b) => binary(a, "=>", b, out),
        F::Iff(a, b) => binary(a, "<=>", b, out),
        F::Forall(v, a) | F::Exists(v, a) => {
            out.push(if matches!(f, F::Forall(..)) { '!' } else { '?' });
            out.push('[');
            out.push_str(&variable(v));
            out.push_str("]: ");
            formula(a, out);
        }
    }
}

/// The formula in TPTP FOF syntax. Binary connectives are always
/// parenthesized.
pub fn tptp_formula(f: &F) -> String {
    let mut out = String::new();
    formula(f, &mut out);
    out
}

/// One annotated `fof(name, role, formula).` line.
pub fn tptp_line(name: &str, role: Role, f: &F) -> String {
    format!("fof({}, {role}, {}).", atomic_word(name), tptp_formula(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_fol;
    use tptp::TPTPIterator;

    fn assert_parses(text: &str) {
        let mut it = TPTPIterator::<()>::new(text.as_bytes());
        let mut count = 0;
        for input in &mut it {
            input.unwrap_or_else(|e| panic!("{text}: {e:?}"));
            count += 1;
        }
        assert!(it.remaining.is_empty(), "{text}");
        assert!(count > 0);
    }

    #[test]
    fn renders_quantifiers_and_names() {
        let f = parse_fol("all x. (R(x,x) -> ex y. p(sk0(x), y))").unwrap();
        assert_eq!(
            tptp_formula(&f),
            "![V_x]: ('R'(V_x,V_x) => ?[V_y]: p(sk0(V_x),V_y))"
        );
        assert_eq!(tptp_formula(&parse_fol("q & ~q").unwrap()), "(q & ~ q)");
    }

    #[test]
    fn output_is_valid_tptp() {
        let cases = [
            "all x. ex y. R(x,y)",
            "all x. all y. all z. (R(x,y) & R(y,z) -> R(x,z))",
            "~(true <-> false) | p",
            "P(w0) & ~Q(f(w0), c)",
        ];
        let mut problem = String::new();
        for (i, c) in cases.iter().enumerate() {
            let line = tptp_line(&format!("ax{i}"), Role::Axiom, &parse_fol(c).unwrap());
            assert_parses(&format!("{line}\n"));
            problem.push_str(&line);
            problem.push('\n');
        }
        problem.push_str(&tptp_line("Goal 1", Role::Conjecture, &parse_fol("p").unwrap()));
        problem.push('\n');
        assert_parses(&problem);
    }
}
