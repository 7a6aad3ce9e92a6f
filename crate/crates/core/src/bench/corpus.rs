use std::fmt;

use thiserror::Error;

use crate::formula::{MacroTable, ModalFormula, ParseError};
use crate::translate::{s4_to_s5, ModalSystem, TranslateError};

const BUILTIN: &str = include_str!("../../corpus/builtin.corpus");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Valid,
    Invalid,
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expect::Valid => "Valid",
            Expect::Invalid => "Invalid",
        })
    }
}

/// Where an entry's expectations come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Published,
    /// Obtained by running the pipeline and checking the evidence.
    Derived,
}

/// One system to decide an entry in, with the expected verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub system: ModalSystem,
    pub expect: Expect,
    /// Smallest countermodel size, asserted when present.
    pub size: Option<usize>,
    /// Decide a goal `dia box phi` in S4 as `phi` in S5.
    pub via_s5: bool,
}

impl Check {
    /// System name as shown in reports, e.g. `S4 via S5`.
    pub fn label(&self) -> String {
        if self.via_s5 {
            format!("{} via S5", self.system.name())
        } else {
            self.system.name()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    /// Formula text as written, macros unexpanded.
    pub source: String,
    pub formula: ModalFormula,
    pub checks: Vec<Check>,
    pub basis: Basis,
    pub note: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    System { line: usize, source: TranslateError },
    #[error("duplicate entry id {0}")]
    Duplicate(String),
}

/// The embedded corpus. It is checked by the test suite, so a parse
/// failure here is a build defect.
pub fn load_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN).expect("built-in corpus is well formed")
}

/// Source text of the embedded corpus.
pub fn builtin_corpus_text() -> &'static str {
    BUILTIN
}

/// The macro table defined by the embedded corpus.
pub fn corpus_macros() -> MacroTable {
    parse_stanzas(BUILTIN).expect("built-in corpus is well formed").0
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    Ok(parse_stanzas(text)?.1)
}

fn syntax(line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Syntax { line, message: message.into() }
}

fn parse_stanzas(text: &str) -> Result<(MacroTable, Vec<CorpusEntry>), CorpusError> {
    let mut macros = MacroTable::new();
    let mut entries: Vec<CorpusEntry> = Vec::new();
    let mut stanza: Vec<(usize, &str, &str)> = Vec::new();
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    for (no, line) in lines.chain([(0, "")]) {
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !stanza.is_empty() {
                if stanza[0].1 == "macro" {
                    define_macro(&mut macros, &stanza)?;
                } else {
                    let e = entry(&macros, &stanza)?;
                    if entries.iter().any(|x| x.id == e.id) {
                        return Err(CorpusError::Duplicate(e.id));
                    }
                    entries.push(e);
                }
                stanza.clear();
            }
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| syntax(no, "expected `key: value`"))?;
        stanza.push((no, key.trim(), value.trim()));
    }
    Ok((macros, entries))
}

fn define_macro(macros: &mut MacroTable, stanza: &[(usize, &str, &str)]) -> Result<(), CorpusError> {
    let &[(line, _, def)] = stanza else {
        return Err(syntax(stanza[0].0, "a macro stanza has exactly one line"));
    };
    let (head, body) = def.split_once('=').ok_or_else(|| syntax(line, "expected `NAME(params) = body`"))?;
    let head = head.trim();
    let (name, params) = match head.split_once('(') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| syntax(line, "unclosed parameter list"))?;
            (name.trim(), inner.split(',').map(str::trim).collect::<Vec<_>>())
        }
        None => (head, Vec::new()),
    };
    macros.define(name, &params, body.trim()).map_err(|source| CorpusError::Formula { line, source })
}

fn entry(macros: &MacroTable, stanza: &[(usize, &str, &str)]) -> Result<CorpusEntry, CorpusError> {
    let (mut id, mut source, mut basis, mut note) = (None, None, None, String::new());
    let mut formula = None;
    let mut checks: Vec<Check> = Vec::new();
    let mut expects = Vec::new();
    for &(line, key, value) in stanza {
        match key {
            "id" => id = Some(value.to_string()),
            "formula" => {
                formula = Some(macros.expand(value).map_err(|source| CorpusError::Formula { line, source })?);
                source = Some(value.to_string());
            }
            "system" => {
                let (name, via_s5) = match value.strip_suffix("via S5") {
                    Some(name) => (name.trim(), true),
                    None => (value, false),
                };
                let system = ModalSystem::named(name).map_err(|source| CorpusError::System { line, source })?;
                if via_s5 && system != ModalSystem::named("S4").expect("known system") {
                    return Err(syntax(line, "only S4 goals can be decided via S5"));
                }
                checks.push(Check { system, expect: Expect::Valid, size: None, via_s5 });
                expects.push(false);
            }
            "expect" | "size" => {
                let (Some(check), Some(seen)) = (checks.last_mut(), expects.last_mut()) else {
                    return Err(syntax(line, format!("`{key}` before any `system`")));
                };
                if key == "expect" {
                    check.expect = match value {
                        "valid" => Expect::Valid,
                        "invalid" => Expect::Invalid,
                        _ => return Err(syntax(line, "expect is `valid` or `invalid`")),
                    };
                    *seen = true;
                } else {
                    check.size = Some(value.parse().map_err(|_| syntax(line, "size is a positive integer"))?);
                }
            }
            "basis" => {
                basis = Some(match value {
                    "published" => Basis::Published,
                    "derived" => Basis::Derived,
                    _ => return Err(syntax(line, "basis is `published` or `derived`")),
                })
            }
            "note" => note = value.to_string(),
            other => return Err(syntax(line, format!("unknown key `{other}`"))),
        }
    }
    let first = stanza[0].0;
    let id = id.ok_or_else(|| syntax(first, "entry without `id`"))?;
    let missing = |what: &str| syntax(first, format!("entry {id} has no {what}"));
    let formula = formula.ok_or_else(|| missing("formula"))?;
    if checks.is_empty() || expects.contains(&false) {
        return Err(missing("`expect` for every system"));
    }
    if checks.iter().any(|c| c.via_s5) && s4_to_s5(&formula).is_err() {
        return Err(syntax(first, format!("entry {id} is decided via S5 but is not `dia box phi`")));
    }
    if checks.iter().any(|c| c.size.is_some() && c.expect == Expect::Valid) {
        return Err(syntax(first, format!("entry {id} gives a countermodel size for a valid check")));
    }
    let basis = basis.ok_or_else(|| missing("basis"))?;
    Ok(CorpusEntry { source: source.expect("set with formula"), id, formula, checks, basis, note })
}
