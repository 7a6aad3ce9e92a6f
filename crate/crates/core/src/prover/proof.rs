use std::fmt;

use thiserror::Error;

use super::rules::{rename_apart, resolvent, Substitution};
use crate::fol::Clause;

/// How a proof step's clause was obtained. Premises are step indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inference {
    /// The `index`-th input clause, duplicates removed.
    Input { index: usize },
    /// Binary resolution; the right premise is standardized apart by
    /// [`rename_apart`](super::rename_apart).
    Resolve { left: usize, left_lit: usize, right: usize, right_lit: usize },
    /// Unification of two same-sign literals of one clause.
    Factor { parent: usize, first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub rule: Inference,
    pub clause: Clause,
    pub unifier: Substitution,
}

/// A refutation as a topologically ordered DAG ending in the empty clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: premise {premise} is not an earlier step")]
    ForwardReference { step: usize, premise: usize },
    #[error("step {step}: literal index out of range")]
    LiteralIndex { step: usize },
    #[error("step {step}: input clause {index} does not exist")]
    MissingInput { step: usize, index: usize },
    #[error("step {step}: the recorded unifier does not unify the selected literals")]
    NotAUnifier { step: usize },
    #[error("step {step}: selected literals have the wrong signs")]
    Signs { step: usize },
    #[error("step {step}: conclusion does not match the replayed clause")]
    Mismatch { step: usize },
    #[error("the last step is not the empty clause")]
    NotARefutation,
}

impl Proof {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-derives every step from its premises with the recorded unifier.
    pub fn replay(&self, inputs: &[Clause]) -> Result<(), ReplayError> {
        for (k, step) in self.steps.iter().enumerate() {
            let earlier = |p: usize| {
                if p < k {
                    Ok(&self.steps[p].clause)
                } else {
                    Err(ReplayError::ForwardReference { step: k, premise: p })
                }
            };
            let sigma = &step.unifier;
            let derived = match step.rule {
                Inference::Input { index } => {
                    let mut c = inputs
                        .get(index)
                        .ok_or(ReplayError::MissingInput { step: k, index })?
                        .clone();
                    c.dedup();
                    c
                }
                Inference::Resolve { left, left_lit, right, right_lit } => {
                    let l = earlier(left)?;
                    let r = rename_apart(earlier(right)?);
                    let (Some(a), Some(b)) = (l.literals.get(left_lit), r.literals.get(right_lit)) else {
                        return Err(ReplayError::LiteralIndex { step: k });
                    };
                    if a.positive == b.positive {
                        return Err(ReplayError::Signs { step: k });
                    }
                    if sigma.apply_literal(a) != sigma.apply_literal(&b.negated()) {
                        return Err(ReplayError::NotAUnifier { step: k });
                    }
                    resolvent(l, left_lit, &r, right_lit, sigma)
                }
                Inference::Factor { parent, first, second } => {
                    let p = earlier(parent)?;
                    let (Some(a), Some(b)) = (p.literals.get(first), p.literals.get(second)) else {
                        return Err(ReplayError::LiteralIndex { step: k });
                    };
                    if first == second || a.positive != b.positive {
                        return Err(ReplayError::Signs { step: k });
                    }
                    if sigma.apply_literal(a) != sigma.apply_literal(b) {
                        return Err(ReplayError::NotAUnifier { step: k });
                    }
                    let mut c = sigma.apply_clause(p);
                    c.dedup();
                    c
                }
            };
            if !derived.is_variant(&step.clause) {
                return Err(ReplayError::Mismatch { step: k });
            }
        }
        match self.steps.last() {
            Some(s) if s.clause.is_empty() => Ok(()),
            _ => Err(ReplayError::NotARefutation),
        }
    }
}

/// Line-oriented trace: `id rule premises | clause | unifier`.
impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            match s.rule {
                Inference::Input { index } => write!(f, "{k} input {index}")?,
                Inference::Resolve { left, left_lit, right, right_lit } => {
                    write!(f, "{k} resolve {left}.{left_lit} {right}.{right_lit}")?
                }
                Inference::Factor { parent, first, second } => {
                    write!(f, "{k} factor {parent}.{first} {parent}.{second}")?
                }
            }
            write!(f, " | {}", s.clause)?;
            if !s.unifier.is_empty() {
                write!(f, " | {}", s.unifier)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_clause, Term};

    fn cl(s: &str) -> Clause {
        parse_clause(s).unwrap()
    }

    fn tiny() -> (Vec<Clause>, Proof) {
        let inputs = vec![cl("p(a)"), cl("~p(x) | q(x)"), cl("~q(a)")];
        let mut s1 = Substitution::new();
        s1.insert("x_r", Term::constant("a"));
        let steps = vec![
            ProofStep { rule: Inference::Input { index: 0 }, clause: cl("p(a)"), unifier: Substitution::new() },
            ProofStep { rule: Inference::Input { index: 1 }, clause: cl("~p(x) | q(x)"), unifier: Substitution::new() },
            ProofStep {
                rule: Inference::Resolve { left: 0, left_lit: 0, right: 1, right_lit: 0 },
                clause: cl("q(a)"),
                unifier: s1,
            },
            ProofStep { rule: Inference::Input { index: 2 }, clause: cl("~q(a)"), unifier: Substitution::new() },
            ProofStep {
                rule: Inference::Resolve { left: 2, left_lit: 0, right: 3, right_lit: 0 },
                clause: Clause::default(),
                unifier: Substitution::new(),
            },
        ];
        (inputs, Proof { steps })
    }

    #[test]
    fn replays_and_prints() {
        let (inputs, proof) = tiny();
        proof.replay(&inputs).unwrap();
        let text = proof.to_string();
        assert!(text.contains("2 resolve 0.0 1.0 | q(a) | {x_r -> a}"));
        assert!(text.ends_with("4 resolve 2.0 3.0 | $false\n"));
    }

    #[test]
    fn tampering_is_detected() {
        let (inputs, mut proof) = tiny();
        proof.steps[2].clause = cl("q(b)");
        assert_eq!(proof.replay(&inputs), Err(ReplayError::Mismatch { step: 2 }));
        let (inputs, mut proof) = tiny();
        proof.steps[2].unifier = Substitution::new();
        assert_eq!(proof.replay(&inputs), Err(ReplayError::NotAUnifier { step: 2 }));
        let (inputs, mut proof) = tiny();
        proof.steps[2].rule = Inference::Resolve { left: 3, left_lit: 0, right: 1, right_lit: 0 };
        assert!(matches!(proof.replay(&inputs), Err(ReplayError::ForwardReference { .. })));
    }
}
