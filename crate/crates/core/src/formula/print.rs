use std::fmt;

use super::ModalFormula;

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;

fn precedence(f: &ModalFormula) -> u8 {
    match f {
        ModalFormula::Iff(..) => IFF,
        ModalFormula::Imp(..) => IMP,
        ModalFormula::Or(..) => OR,
        ModalFormula::And(..) => AND,
        _ => PREFIX,
    }
}

fn write_at(f: &ModalFormula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(f) < min {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}

fn write_binary(
    a: &ModalFormula,
    op: &str,
    b: &ModalFormula,
    (left, right): (u8, u8),
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    write_at(a, left, out)?;
    write!(out, " {op} ")?;
    write_at(b, right, out)
}

fn write_formula(f: &ModalFormula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        ModalFormula::True => out.write_str("true"),
        ModalFormula::False => out.write_str("false"),
        ModalFormula::Atom(p) => out.write_str(p),
        ModalFormula::Not(a) => {
            out.write_str("~")?;
            write_at(a, PREFIX, out)
        }
        ModalFormula::Box(None, a) => {
            out.write_str("box ")?;
            write_at(a, PREFIX, out)
        }
        ModalFormula::Dia(None, a) => {
            out.write_str("dia ")?;
            write_at(a, PREFIX, out)
        }
        ModalFormula::Box(Some(i), a) => {
            write!(out, "[{i}]")?;
            write_at(a, PREFIX, out)
        }
        ModalFormula::Dia(Some(i), a) => {
            write!(out, "<{i}>")?;
            write_at(a, PREFIX, out)
        }
        ModalFormula::Next(a) => {
            out.write_str("X ")?;
            write_at(a, PREFIX, out)
        }
        // `&`, `|` and `<->` associate to the left, `->` to the right.
        ModalFormula::And(a, b) => write_binary(a, "&", b, (AND, PREFIX), out),
        ModalFormula::Or(a, b) => write_binary(a, "|", b, (OR, AND), out),
        ModalFormula::Imp(a, b) => write_binary(a, "->", b, (OR, IMP), out),
        ModalFormula::Iff(a, b) => write_binary(a, "<->", b, (IFF, IMP), out),
    }
}

/// Minimal-parenthesis rendering in the concrete syntax accepted by
/// [`parse_modal`](super::parse_modal).
impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

pub fn print_modal(f: &ModalFormula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::super::parse_modal;
    use super::*;

    fn p(s: &str) -> ModalFormula {
        ModalFormula::atom(s)
    }

    #[test]
    fn examples() {
        assert_eq!(print_modal(&p("p").nec()), "box p");
        let f = p("p").nec().nec().iff(p("p").nec().pos());
        assert_eq!(print_modal(&f), "box box p <-> dia box p");
        assert_eq!(print_modal(&p("p").nec().next().next()), "X X box p");
    }

    #[test]
    fn parenthesises_only_when_needed() {
        let cases = [
            (p("a").implies(p("b")).implies(p("c")), "(a -> b) -> c"),
            (p("a").implies(p("b").implies(p("c"))), "a -> b -> c"),
            (p("a").and(p("b").and(p("c"))), "a & (b & c)"),
            (p("a").and(p("b")).and(p("c")), "a & b & c"),
            (p("a").or(p("b")).and(p("c")), "(a | b) & c"),
            (p("a").iff(p("b").iff(p("c"))), "a <-> (b <-> c)"),
            (p("a").and(p("b")).not(), "~(a & b)"),
            (p("a").not().nec_in("c"), "[c]~a"),
            (p("a").or(p("b")).pos_in("x"), "<x>(a | b)"),
        ];
        for (f, s) in cases {
            assert_eq!(f.to_string(), s);
            assert_eq!(parse_modal(s).unwrap(), f);
        }
    }
}
