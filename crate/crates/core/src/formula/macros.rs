use std::collections::BTreeMap;

use super::parse::{parse_with, ParseError};
use super::ModalFormula;

/// A named formula abbreviation with positional parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Macro {
    pub params: Vec<String>,
    pub body: ModalFormula,
}

impl Macro {
    /// Substitutes `args` for the parameters. Expansion is purely
    /// propositional, so no capture can occur.
    pub fn instantiate(&self, args: &[ModalFormula]) -> ModalFormula {
        let lookup = |name: &str| {
            self.params
                .iter()
                .position(|p| p == name)
                .map(|i| args[i].clone())
        };
        self.body.substitute(&lookup)
    }
}

/// Macro definitions used when reading corpus formulas.
///
/// Inside a formula, an identifier naming a macro is replaced by the
/// macro's body; parameterised macros are called as `F(a, b)`.
#[derive(Debug, Clone, Default)]
pub struct MacroTable {
    defs: BTreeMap<String, Macro>,
}

impl MacroTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Defines `name(params) = body`. The body may use earlier macros.
    pub fn define(&mut self, name: &str, params: &[&str], body: &str) -> Result<(), ParseError> {
        let body = parse_with(body, Some(self))?;
        self.defs.insert(
            name.to_string(),
            Macro { params: params.iter().map(|s| s.to_string()).collect(), body },
        );
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Macro> {
        self.defs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    /// Parses `text`, expanding every macro reference.
    pub fn expand(&self, text: &str) -> Result<ModalFormula, ParseError> {
        parse_with(text, Some(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_modal;

    fn table() -> MacroTable {
        let mut t = MacroTable::new();
        t.define("F", &["A", "B"], "~A | ~dia (A & B) | (B & dia (A & ~B))").unwrap();
        t
    }

    #[test]
    fn expands_f() {
        let got = table().expand("F(p,q)").unwrap();
        let want = parse_modal("~p | ~dia (p & q) | (q & dia (p & ~q))").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn nested_expansion() {
        let got = table().expand("dia box ((p -> q) <-> F(q, F(p, q)))").unwrap();
        let inner = "(~p | ~dia (p & q) | (q & dia (p & ~q)))";
        let want = parse_modal(&format!(
            "dia box ((p -> q) <-> (~q | ~dia (q & {inner}) | ({inner} & dia (q & ~{inner}))))"
        ))
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn repeated_argument() {
        let got = table().expand("F(p,p)").unwrap();
        assert_eq!(got, parse_modal("~p | ~dia (p & p) | (p & dia (p & ~p))").unwrap());
    }

    #[test]
    fn constant_macros_and_errors() {
        let mut t = table();
        t.define("M", &[], "box dia p -> dia box p").unwrap();
        assert_eq!(
            t.expand("M -> q").unwrap(),
            parse_modal("(box dia p -> dia box p) -> q").unwrap()
        );
        assert!(matches!(t.expand("G(p)"), Err(ParseError::UnknownMacro { .. })));
        assert!(matches!(t.expand("F(p)"), Err(ParseError::MacroArity { .. })));
        assert!(matches!(t.expand("F"), Err(ParseError::MacroArity { .. })));
    }
}
