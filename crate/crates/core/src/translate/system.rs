use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::TranslateError;
use crate::fol::{FolFormula as F, Term};
use crate::formula::{
    is_euclidean, is_reflexive, is_serial, is_symmetric, is_transitive, Modality, Relation,
};

/// A frame-axiom schema and its first-order correspondent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    /// serial
    D,
    /// reflexive
    T,
    /// symmetric
    B,
    /// transitive
    Four,
    /// euclidean
    Five,
}

impl Schema {
    pub const ALL: [Schema; 5] = [Schema::D, Schema::T, Schema::B, Schema::Four, Schema::Five];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn symbol(self) -> char {
        match self {
            Schema::D => 'D',
            Schema::T => 'T',
            Schema::B => 'B',
            Schema::Four => '4',
            Schema::Five => '5',
        }
    }

    pub fn from_symbol(c: char) -> Option<Schema> {
        Schema::ALL.into_iter().find(|s| s.symbol() == c)
    }

    pub fn property(self) -> &'static str {
        match self {
            Schema::D => "serial",
            Schema::T => "reflexive",
            Schema::B => "symmetric",
            Schema::Four => "transitive",
            Schema::Five => "euclidean",
        }
    }

    /// The frame condition over the binary predicate `rel`.
    pub fn axiom(self, rel: &str) -> F {
        let r = |a: &str, b: &str| F::pred(rel, vec![Term::var(a), Term::var(b)]);
        match self {
            Schema::D => F::forall("x", F::exists("y", r("x", "y"))),
            Schema::T => F::forall("x", r("x", "x")),
            Schema::B => F::forall("x", F::forall("y", r("x", "y").implies(r("y", "x")))),
            Schema::Four => F::forall(
                "x",
                F::forall("y", F::forall("z", r("x", "y").and(r("y", "z")).implies(r("x", "z")))),
            ),
            Schema::Five => F::forall(
                "x",
                F::forall("y", F::forall("z", r("x", "y").and(r("x", "z")).implies(r("y", "z")))),
            ),
        }
    }

    /// Independent relational check of the frame condition.
    pub fn holds_on(self, r: &Relation, worlds: usize) -> bool {
        match self {
            Schema::D => is_serial(r, worlds),
            Schema::T => is_reflexive(r, worlds),
            Schema::B => is_symmetric(r, worlds),
            Schema::Four => is_transitive(r, worlds),
            Schema::Five => is_euclidean(r, worlds),
        }
    }
}

/// A subset of {D, T, B, 4, 5}.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchemaSet(u8);

impl SchemaSet {
    pub const EMPTY: SchemaSet = SchemaSet(0);

    pub fn contains(self, s: Schema) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn with(self, s: Schema) -> SchemaSet {
        SchemaSet(self.0 | s.bit())
    }

    pub fn without(self, s: Schema) -> SchemaSet {
        SchemaSet(self.0 & !s.bit())
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Schema> {
        Schema::ALL.into_iter().filter(move |s| self.contains(*s))
    }

    /// Closure under the entailments between frame conditions.
    pub fn closure(self) -> SchemaSet {
        use Schema::*;
        let mut s = self;
        loop {
            let before = s;
            let has = |x: Schema| before.contains(x);
            if has(T) {
                s = s.with(D);
            }
            if has(B) && has(Four) {
                s = s.with(Five);
            }
            if has(B) && has(Five) {
                s = s.with(Four);
            }
            if has(T) && has(Five) {
                s = s.with(B).with(Four);
            }
            if has(D) && has(B) && (has(Four) || has(Five)) {
                s = s.with(T).with(Four).with(Five);
            }
            if s == before {
                return s;
            }
        }
    }

    /// A smallest generating subset of the closure, preferring T and 5 as
    /// generators. `KT` yields exactly {T}.
    pub fn basis(self) -> SchemaSet {
        let full = self.closure();
        let mut s = full;
        for cand in [Schema::D, Schema::B, Schema::Four, Schema::Five, Schema::T] {
            let smaller = s.without(cand);
            if s.contains(cand) && smaller.closure() == full {
                s = smaller;
            }
        }
        s
    }
}

impl fmt::Display for SchemaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for SchemaSet {
    type Err = TranslateError;

    /// Schema letters, optionally after a leading `K`: `D45`, `KT4`, `K`, ``.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let body = text.trim();
        let body = body.strip_prefix('K').unwrap_or(body);
        let mut set = SchemaSet::EMPTY;
        for c in body.chars() {
            let s = Schema::from_symbol(c.to_ascii_uppercase())
                .ok_or_else(|| TranslateError::BadSchemas(text.to_string()))?;
            set = set.with(s);
        }
        Ok(set)
    }
}

/// The fifteen distinct normal systems, by closed schema set.
const CANONICAL: [(&str, &str); 15] = [
    ("K", ""),
    ("KD", "D"),
    ("KT", "DT"),
    ("KB", "B"),
    ("K4", "4"),
    ("K5", "5"),
    ("KD4", "D4"),
    ("KD5", "D5"),
    ("K45", "45"),
    ("KDB", "DB"),
    ("KB4", "B45"),
    ("KD45", "D45"),
    ("KTB", "DTB"),
    ("S4", "DT4"),
    ("S5", "DTB45"),
];

fn canonical_name(closed: SchemaSet) -> &'static str {
    CANONICAL
        .iter()
        .find(|(_, s)| s.parse::<SchemaSet>().expect("static schema list") == closed)
        .map(|(n, _)| *n)
        .expect("every closed schema set is one of the fifteen systems")
}

/// A normal modal system: a schema set for the default modality and for
/// every index without an override.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalSystem {
    schemas: SchemaSet,
    overrides: BTreeMap<String, SchemaSet>,
}

impl ModalSystem {
    pub fn from_schemas(schemas: SchemaSet) -> Self {
        ModalSystem { schemas: schemas.closure(), overrides: BTreeMap::new() }
    }

    /// Accepts the fifteen canonical names, the aliases `KT4`, `KT5`, `B`
    /// and `KB5`, and any schema string such as `KDT45`.
    pub fn named(name: &str) -> Result<Self, TranslateError> {
        let upper = name.trim().to_ascii_uppercase();
        let schemas = match upper.as_str() {
            "S4" => "DT4".parse()?,
            "S5" => "DTB45".parse()?,
            "B" => "TB".parse()?,
            other if other.starts_with('K') => other
                .parse()
                .map_err(|_| TranslateError::UnknownSystem(name.to_string()))?,
            _ => return Err(TranslateError::UnknownSystem(name.to_string())),
        };
        Ok(Self::from_schemas(schemas))
    }

    /// Every one of the fifteen systems, in a fixed order.
    pub fn all() -> Vec<ModalSystem> {
        CANONICAL
            .iter()
            .map(|(_, s)| Self::from_schemas(s.parse().expect("static schema list")))
            .collect()
    }

    /// Gives `index` its own schema set.
    pub fn with_override(mut self, index: impl Into<String>, schemas: SchemaSet) -> Self {
        self.overrides.insert(index.into(), schemas.closure());
        self
    }

    /// Closed schema set of the default modality.
    pub fn schemas(&self) -> SchemaSet {
        self.schemas
    }

    pub fn schemas_for(&self, index: &Modality) -> SchemaSet {
        index
            .as_ref()
            .and_then(|i| self.overrides.get(i))
            .copied()
            .unwrap_or(self.schemas)
    }

    pub fn name(&self) -> String {
        let mut out = canonical_name(self.schemas).to_string();
        for (i, s) in &self.overrides {
            out.push_str(&format!(" [{i}]={}", canonical_name(*s)));
        }
        out
    }

    pub fn is_s5(&self) -> bool {
        self.overrides.is_empty() && canonical_name(self.schemas) == "S5"
    }
}

impl fmt::Display for ModalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ModalSystem {
    type Err = TranslateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModalSystem::named(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SchemaSet {
        s.parse().unwrap()
    }

    #[test]
    fn fifteen_distinct_closures() {
        let mut seen = std::collections::BTreeSet::new();
        for bits in 0u8..32 {
            seen.insert(SchemaSet(bits).closure());
        }
        assert_eq!(seen.len(), 15);
        for s in seen {
            // every closed set has a name
            let _ = canonical_name(s);
        }
    }

    #[test]
    fn aliases() {
        assert_eq!(ModalSystem::named("S4").unwrap(), ModalSystem::named("KT4").unwrap());
        assert_eq!(ModalSystem::named("S5").unwrap(), ModalSystem::named("KT5").unwrap());
        assert_eq!(ModalSystem::named("B").unwrap().name(), "KTB");
        assert_eq!(ModalSystem::named("KB5").unwrap().name(), "KB4");
        assert_eq!(ModalSystem::named("KDB4").unwrap().name(), "S5");
        assert_eq!(ModalSystem::named("kd45").unwrap().name(), "KD45");
        assert!(ModalSystem::named("S3").is_err());
        assert!(ModalSystem::named("KX").is_err());
        let names: Vec<String> = ModalSystem::all().iter().map(|s| s.name()).collect();
        assert_eq!(names.len(), 15);
        assert_eq!(names[0], "K");
    }

    #[test]
    fn bases() {
        assert_eq!(set("DT").basis(), set("T"));
        assert_eq!(set("D45").basis(), set("D45"));
        assert_eq!(set("DTB45").basis(), set("T5"));
        assert_eq!(set("DT4").basis(), set("T4"));
        for bits in 0u8..32 {
            let s = SchemaSet(bits);
            assert_eq!(s.basis().closure(), s.closure());
        }
    }

    #[test]
    fn overrides() {
        let sys = ModalSystem::named("S4").unwrap().with_override("a", set("D45"));
        assert_eq!(sys.schemas_for(&Some("a".into())), set("D45"));
        assert_eq!(sys.schemas_for(&Some("b".into())), set("DT4"));
        assert_eq!(sys.schemas_for(&None), set("DT4"));
        assert_eq!(sys.name(), "S4 [a]=KD45");
    }
}
