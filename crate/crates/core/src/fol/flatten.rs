use std::collections::HashMap;
use std::fmt;

use super::{Clause, Term};

/// A literal whose arguments are all variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FlatLiteral {
    Pred { positive: bool, pred: String, args: Vec<String> },
    /// The function-graph literal `fun(args) != result`.
    FunNeq { fun: String, args: Vec<String>, result: String },
}

impl fmt::Display for FlatLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatLiteral::Pred { positive, pred, args } => {
                if !positive {
                    f.write_str("~")?;
                }
                if args.is_empty() {
                    f.write_str(pred)
                } else {
                    write!(f, "{pred}({})", args.join(","))
                }
            }
            FlatLiteral::FunNeq { fun, args, result } if args.is_empty() => {
                write!(f, "{fun} != {result}")
            }
            FlatLiteral::FunNeq { fun, args, result } => {
                write!(f, "{fun}({}) != {result}", args.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FlatClause {
    pub literals: Vec<FlatLiteral>,
}

impl FlatClause {
    /// Variables in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut add = |v: &String| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        for l in &self.literals {
            match l {
                FlatLiteral::Pred { args, .. } => args.iter().for_each(&mut add),
                FlatLiteral::FunNeq { args, result, .. } => {
                    args.iter().for_each(&mut add);
                    add(result);
                }
            }
        }
        out
    }
}

impl fmt::Display for FlatClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$false");
        }
        let parts: Vec<String> = self.literals.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" | "))
    }
}

/// Rewrites every non-variable argument `t` into a fresh variable `y`
/// guarded by `t != y`, innermost first, so that all arguments become
/// variables. Identical subterms of one clause share a variable.
/// Satisfaction on a given finite structure is unchanged.
pub fn flatten(clauses: &[Clause]) -> Vec<FlatClause> {
    clauses.iter().map(flatten_clause).collect()
}

struct ClauseFlattener {
    guards: Vec<FlatLiteral>,
    names: HashMap<Term, String>,
}

impl ClauseFlattener {
    fn var_for(&mut self, t: &Term) -> String {
        match t {
            Term::Var(v) => v.clone(),
            Term::Const(_) | Term::App(..) => {
                if let Some(v) = self.names.get(t) {
                    return v.clone();
                }
                let (fun, args) = match t {
                    Term::Const(c) => (c.clone(), Vec::new()),
                    Term::App(g, args) => (g.clone(), args.iter().map(|a| self.var_for(a)).collect()),
                    Term::Var(_) => unreachable!(),
                };
                let result = format!("_f{}", self.names.len());
                self.names.insert(t.clone(), result.clone());
                self.guards.push(FlatLiteral::FunNeq { fun, args, result: result.clone() });
                result
            }
        }
    }
}

fn flatten_clause(c: &Clause) -> FlatClause {
    let mut fl = ClauseFlattener { guards: Vec::new(), names: HashMap::new() };
    let mut body = Vec::new();
    for l in &c.literals {
        let args = l.args.iter().map(|t| fl.var_for(t)).collect();
        body.push(FlatLiteral::Pred { positive: l.positive, pred: l.pred.clone(), args });
    }
    let mut literals = fl.guards;
    literals.extend(body);
    FlatClause { literals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_clause;

    #[test]
    fn skolem_argument() {
        let flat = flatten(&[parse_clause("R(x, sk1(x))").unwrap()]);
        assert_eq!(flat[0].to_string(), "sk1(x) != _f0 | R(x,_f0)");
    }

    #[test]
    fn already_flat_is_unchanged() {
        let flat = flatten(&[parse_clause("~R(x,y) | p(y)").unwrap()]);
        assert_eq!(flat[0].to_string(), "~R(x,y) | p(y)");
    }

    #[test]
    fn nesting_gets_one_variable_per_level() {
        let flat = flatten(&[parse_clause("p(S(S(x)))").unwrap()]);
        assert_eq!(flat[0].to_string(), "S(x) != _f0 | S(_f0) != _f1 | p(_f1)");
    }

    #[test]
    fn shared_subterms_and_constants() {
        let flat = flatten(&[parse_clause("R(w0, f(w0)) | ~R(f(w0), y)").unwrap()]);
        assert_eq!(
            flat[0].to_string(),
            "w0 != _f0 | f(_f0) != _f1 | R(_f0,_f1) | ~R(_f1,y)"
        );
    }
}
