use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::Modality;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("world {world} out of range for a {worlds}-world model")]
    WorldOutOfRange { world: usize, worlds: usize },
    #[error("a model needs at least one world")]
    Empty,
    #[error("successor table has {found} entries for {worlds} worlds")]
    PartialSuccessor { found: usize, worlds: usize },
    #[error("world {0} has no successor")]
    MissingSuccessor(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A binary relation over worlds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Relation {
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: usize, to: usize) -> bool {
        self.pairs.insert((from, to))
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.pairs.contains(&(from, to))
    }

    pub fn successors(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        self.pairs.range((from, 0)..=(from, usize::MAX)).map(|&(_, to)| to)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl FromIterator<(usize, usize)> for Relation {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Relation { pairs: iter.into_iter().collect() }
    }
}

pub fn is_reflexive(r: &Relation, worlds: usize) -> bool {
    (0..worlds).all(|w| r.contains(w, w))
}

pub fn is_serial(r: &Relation, worlds: usize) -> bool {
    (0..worlds).all(|w| r.successors(w).next().is_some())
}

pub fn is_symmetric(r: &Relation, _worlds: usize) -> bool {
    r.pairs().all(|(a, b)| r.contains(b, a))
}

pub fn is_transitive(r: &Relation, _worlds: usize) -> bool {
    r.pairs()
        .all(|(a, b)| r.successors(b).all(|c| r.contains(a, c)))
}

pub fn is_euclidean(r: &Relation, _worlds: usize) -> bool {
    r.pairs()
        .all(|(a, b)| r.successors(a).all(|c| r.contains(b, c)))
}

/// A finite pointed Kripke model, optionally with a successor function for
/// next-time readings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: usize,
    relations: BTreeMap<Modality, Relation>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
    real_world: usize,
    successor: Option<Vec<usize>>,
}

impl KripkeModel {
    /// A model with `worlds` worlds, an empty default relation and an empty
    /// valuation.
    pub fn new(worlds: usize, real_world: usize) -> Result<Self, KripkeError> {
        if worlds == 0 {
            return Err(KripkeError::Empty);
        }
        if real_world >= worlds {
            return Err(KripkeError::WorldOutOfRange { world: real_world, worlds });
        }
        let mut relations = BTreeMap::new();
        relations.insert(None, Relation::new());
        Ok(KripkeModel {
            worlds,
            relations,
            valuation: BTreeMap::new(),
            real_world,
            successor: None,
        })
    }

    fn check(&self, w: usize) -> Result<(), KripkeError> {
        if w < self.worlds {
            Ok(())
        } else {
            Err(KripkeError::WorldOutOfRange { world: w, worlds: self.worlds })
        }
    }

    /// Declares a (possibly empty) relation for `index`.
    pub fn declare_relation(&mut self, index: Modality) {
        self.relations.entry(index).or_default();
    }

    pub fn add_edge(&mut self, index: Modality, from: usize, to: usize) -> Result<(), KripkeError> {
        self.check(from)?;
        self.check(to)?;
        self.relations.entry(index).or_default().insert(from, to);
        Ok(())
    }

    pub fn set_true(&mut self, atom: impl Into<String>, world: usize) -> Result<(), KripkeError> {
        self.check(world)?;
        self.valuation.entry(atom.into()).or_default().insert(world);
        Ok(())
    }

    /// Declares an atom false everywhere unless set true later.
    pub fn declare_atom(&mut self, atom: impl Into<String>) {
        self.valuation.entry(atom.into()).or_default();
    }

    pub fn set_successor(&mut self, table: Vec<usize>) -> Result<(), KripkeError> {
        if table.len() != self.worlds {
            return Err(KripkeError::PartialSuccessor { found: table.len(), worlds: self.worlds });
        }
        for &w in &table {
            self.check(w)?;
        }
        self.successor = Some(table);
        Ok(())
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn real_world(&self) -> usize {
        self.real_world
    }

    pub fn relation(&self, index: &Modality) -> Option<&Relation> {
        self.relations.get(index)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&Modality, &Relation)> {
        self.relations.iter()
    }

    pub fn holds(&self, atom: &str, world: usize) -> bool {
        self.valuation.get(atom).is_some_and(|s| s.contains(&world))
    }

    pub fn valuation(&self) -> impl Iterator<Item = (&str, &BTreeSet<usize>)> {
        self.valuation.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn successor(&self) -> Option<&[usize]> {
        self.successor.as_deref()
    }
}

fn relation_name(index: &Modality) -> String {
    match index {
        None => "R".to_string(),
        Some(i) => format!("R_{i}"),
    }
}

/// Line format: `worlds n real w`, then `R i j` / `R_a i j` edges, `V p i`
/// valuation facts and `S i j` successor entries. A bare `R_a` line declares
/// an empty relation.
impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds {} real {}", self.worlds, self.real_world)?;
        for (index, rel) in &self.relations {
            let name = relation_name(index);
            if rel.is_empty() {
                writeln!(f, "{name}")?;
            }
            for (a, b) in rel.pairs() {
                writeln!(f, "{name} {a} {b}")?;
            }
        }
        for (p, ws) in &self.valuation {
            for w in ws {
                writeln!(f, "V {p} {w}")?;
            }
        }
        if let Some(s) = &self.successor {
            for (a, b) in s.iter().enumerate() {
                writeln!(f, "S {a} {b}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for KripkeModel {
    type Err = KripkeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut model: Option<KripkeModel> = None;
        let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let err = |msg: &str| KripkeError::Parse { line, msg: msg.to_string() };
            let trimmed = raw.split('#').next().unwrap_or("").trim();
            if trimmed.is_empty() {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err("expected a world number"));
            if fields[0] == "worlds" {
                if model.is_some() {
                    return Err(err("duplicate header"));
                }
                if fields.len() != 4 || fields[2] != "real" {
                    return Err(err("header must read `worlds n real w`"));
                }
                model = Some(KripkeModel::new(num(fields[1])?, num(fields[3])?)?);
                continue;
            }
            let m = model.as_mut().ok_or_else(|| err("missing `worlds` header"))?;
            match fields[0] {
                "V" if fields.len() == 3 => m.set_true(fields[1], num(fields[2])?)?,
                "S" if fields.len() == 3 => {
                    let from = num(fields[1])?;
                    if succ.insert(from, num(fields[2])?).is_some() {
                        return Err(err("successor defined twice"));
                    }
                }
                name if name == "R" || name.starts_with("R_") => {
                    let index = name.strip_prefix("R_").map(str::to_string);
                    match fields.len() {
                        1 => m.declare_relation(index),
                        3 => m.add_edge(index, num(fields[1])?, num(fields[2])?)?,
                        _ => return Err(err("relation line must read `R i j`")),
                    }
                }
                _ => return Err(err("unrecognised line")),
            }
        }
        let mut m = model.ok_or(KripkeError::Parse { line: 0, msg: "empty model".into() })?;
        if !succ.is_empty() {
            let table = (0..m.worlds)
                .map(|w| succ.get(&w).copied().ok_or(KripkeError::MissingSuccessor(w)))
                .collect::<Result<Vec<_>, _>>()?;
            m.set_successor(table)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "worlds 2 real 0\nR 0 1\nR 1 0\nR_a\nV p 1\nS 0 1\nS 1 1\n";
        let m: KripkeModel = text.parse().unwrap();
        assert_eq!(m.worlds(), 2);
        assert!(m.relation(&None).unwrap().contains(1, 0));
        assert!(m.relation(&Some("a".into())).unwrap().is_empty());
        assert!(m.holds("p", 1) && !m.holds("p", 0));
        assert_eq!(m.successor(), Some(&[1usize, 1][..]));
        assert_eq!(m.to_string(), text);
        assert_eq!(m.to_string().parse::<KripkeModel>().unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("R 0 1".parse::<KripkeModel>().is_err());
        assert!("worlds 2 real 2".parse::<KripkeModel>().is_err());
        assert!("worlds 2 real 0\nR 0 5".parse::<KripkeModel>().is_err());
        assert!(matches!(
            "worlds 2 real 0\nS 0 1".parse::<KripkeModel>(),
            Err(KripkeError::MissingSuccessor(1))
        ));
        assert!(KripkeModel::new(0, 0).is_err());
    }

    #[test]
    fn frame_properties() {
        let r: Relation = [(0, 1), (1, 0), (0, 0), (1, 1)].into_iter().collect();
        assert!(is_reflexive(&r, 2) && is_symmetric(&r, 2) && is_transitive(&r, 2));
        assert!(is_euclidean(&r, 2) && is_serial(&r, 2));
        let chain: Relation = [(0, 1), (1, 2)].into_iter().collect();
        assert!(!is_transitive(&chain, 3) && !is_serial(&chain, 3) && !is_reflexive(&chain, 3));
        // 0 -> 1, 0 -> 2 requires 1 -> 2 and 2 -> 1 (and loops) to be euclidean
        let fan: Relation = [(0, 1), (0, 2)].into_iter().collect();
        assert!(!is_euclidean(&fan, 3) && is_transitive(&fan, 3));
    }
}
