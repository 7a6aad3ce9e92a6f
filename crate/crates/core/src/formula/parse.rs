use thiserror::Error;

use super::{MacroTable, ModalFormula};

/// Identifiers with this prefix are reserved for Skolem symbols.
pub const RESERVED_PREFIX: &str = "sk";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: unknown token `{found}`")]
    UnknownToken { line: usize, col: usize, found: String },
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: identifier `{name}` uses the reserved prefix `sk`")]
    Reserved { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unknown macro `{name}`")]
    UnknownMacro { line: usize, col: usize, name: String },
    #[error("{line}:{col}: macro `{name}` expects {expected} argument(s), got {found}")]
    MacroArity {
        line: usize,
        col: usize,
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Box,
    Dia,
    Next,
    True,
    False,
    BoxIdx(String),
    DiaIdx(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Box => "`box`".into(),
            Tok::Dia => "`dia`".into(),
            Tok::Next => "`X`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::BoxIdx(i) => format!("`[{i}]`"),
            Tok::DiaIdx(i) => format!("`<{i}>`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let read_ident = |start: usize| -> usize {
        let mut j = start;
        while j < chars.len() && is_ident_char(chars[j]) {
            j += 1;
        }
        j
    };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: tl, col: tc });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let unknown = |len: usize| ParseError::UnknownToken {
            line: tl,
            col: tc,
            found: chars[i..(i + len).min(chars.len())].iter().collect(),
        };
        let consumed = match c {
            '~' => {
                push(&mut out, Tok::Not);
                1
            }
            '&' => {
                push(&mut out, Tok::And);
                1
            }
            '|' => {
                push(&mut out, Tok::Or);
                1
            }
            '(' => {
                push(&mut out, Tok::LParen);
                1
            }
            ')' => {
                push(&mut out, Tok::RParen);
                1
            }
            ',' => {
                push(&mut out, Tok::Comma);
                1
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    push(&mut out, Tok::Imp);
                    2
                } else {
                    return Err(unknown(1));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    push(&mut out, Tok::Iff);
                    3
                } else if chars.get(i + 1).copied().is_some_and(is_ident_start) {
                    let end = read_ident(i + 1);
                    if chars.get(end) != Some(&'>') {
                        return Err(unknown(end - i));
                    }
                    push(&mut out, Tok::DiaIdx(chars[i + 1..end].iter().collect()));
                    end + 1 - i
                } else {
                    return Err(unknown(1));
                }
            }
            '[' => {
                if chars.get(i + 1).copied().is_some_and(is_ident_start) {
                    let end = read_ident(i + 1);
                    if chars.get(end) != Some(&']') {
                        return Err(unknown(end - i));
                    }
                    push(&mut out, Tok::BoxIdx(chars[i + 1..end].iter().collect()));
                    end + 1 - i
                } else {
                    return Err(unknown(1));
                }
            }
            c if is_ident_start(c) => {
                let end = read_ident(i);
                let word: String = chars[i..end].iter().collect();
                let tok = match word.as_str() {
                    "box" => Tok::Box,
                    "dia" => Tok::Dia,
                    "X" => Tok::Next,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                push(&mut out, tok);
                end - i
            }
            _ => return Err(unknown(1)),
        };
        i += consumed;
        col += consumed;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    macros: Option<&'a MacroTable>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax { line, col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn formula(&mut self) -> Result<ModalFormula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<ModalFormula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<ModalFormula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<ModalFormula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ModalFormula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Box => {
                self.bump();
                Ok(self.unary()?.nec())
            }
            Tok::Dia => {
                self.bump();
                Ok(self.unary()?.pos())
            }
            Tok::Next => {
                self.bump();
                Ok(self.unary()?.next())
            }
            Tok::BoxIdx(i) => {
                self.bump();
                Ok(self.unary()?.nec_in(i))
            }
            Tok::DiaIdx(i) => {
                self.bump();
                Ok(self.unary()?.pos_in(i))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<ModalFormula, ParseError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(ModalFormula::True)
            }
            Tok::False => {
                self.bump();
                Ok(ModalFormula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                self.ident(name, line, col)
            }
            other => Err(self.error(format!("expected a formula, found {}", other.describe()))),
        }
    }

    fn ident(&mut self, name: String, line: usize, col: usize) -> Result<ModalFormula, ParseError> {
        let called = *self.peek() == Tok::LParen;
        let def = self.macros.and_then(|m| m.get(&name));
        match def {
            Some(def) => {
                let args = if called { self.macro_args()? } else { Vec::new() };
                if args.len() != def.params.len() {
                    return Err(ParseError::MacroArity {
                        line,
                        col,
                        name,
                        expected: def.params.len(),
                        found: args.len(),
                    });
                }
                Ok(def.instantiate(&args))
            }
            None if called => Err(ParseError::UnknownMacro { line, col, name }),
            None => {
                if name.starts_with(RESERVED_PREFIX) {
                    return Err(ParseError::Reserved { line, col, name });
                }
                Ok(ModalFormula::Atom(name))
            }
        }
    }

    fn macro_args(&mut self) -> Result<Vec<ModalFormula>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.formula()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.formula()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }
}

pub(crate) fn parse_with(text: &str, macros: Option<&MacroTable>) -> Result<ModalFormula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, macros };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

/// Parses the ASCII concrete syntax.
///
/// Precedence from tightest: the prefix operators `~ box dia X [i] <i>`,
/// then `&`, `|`, right-associative `->`, and finally `<->`.
pub fn parse_modal(text: &str) -> Result<ModalFormula, ParseError> {
    parse_with(text, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ModalFormula {
        ModalFormula::atom(s)
    }

    #[test]
    fn box_implies_dia() {
        assert_eq!(
            parse_modal("box p -> dia p").unwrap(),
            p("p").nec().implies(p("p").pos())
        );
    }

    #[test]
    fn kd45_equivalence() {
        let lhs = p("p").nec().pos();
        let rhs = p("p").nec().pos().nec().pos();
        assert_eq!(
            parse_modal("dia box p <-> dia box dia box p").unwrap(),
            lhs.iff(rhs)
        );
    }

    #[test]
    fn bare_atom() {
        assert_eq!(parse_modal("p").unwrap(), p("p"));
    }

    #[test]
    fn indexed_boxes() {
        let expected = p("PC").not().implies(p("PC").not().nec_in("b")).nec_in("c");
        assert_eq!(parse_modal("[c](~PC -> [b]~PC)").unwrap(), expected);
        assert_eq!(parse_modal("<a>q").unwrap(), p("q").pos_in("a"));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_modal("a -> b -> c").unwrap(),
            p("a").implies(p("b").implies(p("c")))
        );
        assert_eq!(
            parse_modal("a | b & c").unwrap(),
            p("a").or(p("b").and(p("c")))
        );
        assert_eq!(
            parse_modal("a <-> b <-> c").unwrap(),
            p("a").iff(p("b")).iff(p("c"))
        );
        assert_eq!(
            parse_modal("~a & b").unwrap(),
            p("a").not().and(p("b"))
        );
        assert_eq!(
            parse_modal("a & b -> c | d <-> e").unwrap(),
            p("a").and(p("b")).implies(p("c").or(p("d"))).iff(p("e"))
        );
        assert_eq!(parse_modal("X X box p").unwrap(), p("p").nec().next().next());
        assert_eq!(parse_modal("true -> false").unwrap(), ModalFormula::True.implies(ModalFormula::False));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_modal("p &\n  $").unwrap_err() {
            ParseError::UnknownToken { line, col, found } => {
                assert_eq!((line, col, found.as_str()), (2, 3, "$"));
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse_modal("(p & q").unwrap_err() {
            ParseError::Syntax { line, col, .. } => assert_eq!((line, col), (1, 7)),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse_modal("p q"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_modal("p -"), Err(ParseError::UnknownToken { .. })));
        assert!(matches!(parse_modal("[a p"), Err(ParseError::UnknownToken { .. })));
        assert!(matches!(parse_modal(""), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn reserved_and_call_errors() {
        assert!(matches!(parse_modal("sk1 & p"), Err(ParseError::Reserved { .. })));
        assert!(matches!(parse_modal("F(p, q)"), Err(ParseError::UnknownMacro { .. })));
    }
}
