//! Resolution refutation: unification, binary resolution, factoring,
//! subsumption and a given-clause saturation loop with checkable proofs.

mod index;
mod proof;
mod rules;
mod saturate;
mod term;

pub use proof::{Inference, Proof, ProofStep, ReplayError};
pub use rules::{factor, rename_apart, resolve, subsumes, unify, unify_terms, Substitution, APART_SUFFIX};
pub use saturate::{
    saturate, Exhausted, ProverOptions, ProverStats, ResourceReport, Saturation, SaturationLimits,
    SaturationOutcome,
};
