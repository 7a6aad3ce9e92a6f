//! Finite model search: ground flattened clauses over an `n`-element
//! domain, decide the propositional CNF with DPLL and decode models.

mod dpll;
mod ground;
mod search;

pub use dpll::{dpll, satisfies, Dpll, DpllResult, DpllStats};
pub use ground::{decode, ground, ground_with, Cell, DecodeError, GroundError, PropCnf, MAX_GROUND_CLAUSES};
pub use search::{
    find_smallest_model, ModelSearch, ModelSearchResult, SizeReport, DEFAULT_N_MAX, DEFAULT_QUANTUM,
};
