use thiserror::Error;

use super::{Clause, FolFormula as F, Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolParseError {
    #[error("unexpected character `{ch}` at offset {offset}")]
    UnknownToken { ch: char, offset: usize },
    #[error("expected {expected} at offset {offset}, found {found}")]
    Syntax { expected: &'static str, found: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    All,
    Ex,
    True,
    False,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Comma,
    Dot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::All => "`all`".into(),
            Tok::Ex => "`ex`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FolParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            let word: String = bytes[start..i].iter().collect();
            match word.as_str() {
                "all" => Tok::All,
                "ex" => Tok::Ex,
                "true" | "$true" => Tok::True,
                "false" | "$false" => Tok::False,
                w if w.starts_with('$') => return Err(FolParseError::UnknownToken { ch: '$', offset: start }),
                _ => Tok::Ident(word),
            }
        } else {
            let rest: String = bytes[i..bytes.len().min(i + 3)].iter().collect();
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::Iff, 3)
            } else if rest.starts_with("->") {
                (Tok::Imp, 2)
            } else {
                let t = match c {
                    '~' => Tok::Not,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    _ => return Err(FolParseError::UnknownToken { ch: c, offset: start }),
                };
                (t, 1)
            };
            i += len;
            tok
        };
        out.push((tok, start));
    }
    Ok(out)
}

/// Clause-syntax variable convention: a letter `u`..`z` or `_`, followed
/// only by digits and underscores (`x`, `v1`, `y_3`, `_0`). `w0` is the
/// conventional name of the actual world and stays a constant.
pub(crate) fn is_clause_variable(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    name != "w0"
        && (('u'..='z').contains(&first) || first == '_')
        && chars.all(|c| c.is_ascii_digit() || c == '_' || (first == '_' && c.is_ascii_alphanumeric()))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    bound: Vec<String>,
    clause_vars: bool,
}

impl Parser {
    fn new(text: &str, clause_vars: bool) -> Result<Self, FolParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.chars().count(), bound: Vec::new(), clause_vars })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &'static str) -> Result<T, FolParseError> {
        Err(FolParseError::Syntax {
            expected,
            found: self.peek().map_or("end of input".into(), Tok::describe),
            offset: self.offset(),
        })
    }

    fn expect(&mut self, t: Tok, expected: &'static str) -> Result<(), FolParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn finish(&self) -> Result<(), FolParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn ident(&mut self) -> Result<String, FolParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("identifier"),
        }
    }

    fn iff(&mut self) -> Result<F, FolParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            lhs = lhs.iff(self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<F, FolParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            return Ok(lhs.implies(self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<F, FolParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<F, FolParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<F, FolParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::All) | Some(Tok::Ex) => {
                let universal = self.peek() == Some(&Tok::All);
                self.pos += 1;
                let v = self.ident()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                self.bound.push(v.clone());
                let body = self.unary();
                self.bound.pop();
                let body = body?;
                Ok(if universal { F::forall(v, body) } else { F::exists(v, body) })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(F::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(F::False)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                Ok(F::Pred(name, self.args()?))
            }
            _ => self.fail("formula"),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, FolParseError> {
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)` or `,`")?;
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, FolParseError> {
        let name = self.ident()?;
        if self.peek() == Some(&Tok::LParen) {
            return Ok(Term::App(name, self.args()?));
        }
        let is_var = if self.clause_vars { is_clause_variable(&name) } else { self.bound.contains(&name) };
        Ok(if is_var { Term::Var(name) } else { Term::Const(name) })
    }

    fn literal(&mut self) -> Result<Literal, FolParseError> {
        let positive = !self.eat(&Tok::Not);
        let pred = self.ident()?;
        Ok(Literal::new(positive, pred, self.args()?))
    }

    fn clause(&mut self) -> Result<Clause, FolParseError> {
        if self.eat(&Tok::False) {
            return Ok(Clause::default());
        }
        let mut lits = vec![self.literal()?];
        while self.eat(&Tok::Or) {
            lits.push(self.literal()?);
        }
        Ok(Clause::new(lits))
    }
}

/// Parses `all x.`, `ex x.`, `~ & | -> <->`, `true`, `false`. An identifier
/// is a variable only where a quantifier binds it; otherwise it is a
/// constant, or a function application when followed by arguments.
pub fn parse_fol(text: &str) -> Result<F, FolParseError> {
    let mut p = Parser::new(text, false)?;
    let f = p.iff()?;
    p.finish()?;
    Ok(f)
}

/// Parses a disjunction of literals, or `$false` for the empty clause.
/// Variables follow the naming convention of [`is_clause_variable`].
pub fn parse_clause(text: &str) -> Result<Clause, FolParseError> {
    let mut p = Parser::new(text, true)?;
    let c = p.clause()?;
    p.finish()?;
    Ok(c)
}

/// One clause per non-empty line; `#` starts a comment.
pub fn parse_clauses(text: &str) -> Result<Vec<Clause>, FolParseError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_clause)
        .collect()
}
