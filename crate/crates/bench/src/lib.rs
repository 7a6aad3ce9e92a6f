//! Fixed workloads shared by the criterion benches.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relmodal::bench::load_corpus;
use relmodal::formula::ModalFormula;
use relmodal::translate::ModalSystem;

/// The formula of corpus entry `id` with the system of its first check.
pub fn corpus_goal(id: &str) -> (ModalFormula, ModalSystem) {
    let entry = load_corpus().into_iter().find(|e| e.id == id).unwrap_or_else(|| panic!("no corpus entry {id}"));
    let system = entry.checks[0].system.clone();
    (entry.formula, system)
}

/// Random CNF over `vars` variables with three literals per clause,
/// deterministic in `seed`.
pub fn random_3sat(vars: usize, clauses: usize, seed: u64) -> Vec<Vec<i32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..clauses)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let v = rng.random_range(1..=vars as i32);
                    if rng.random_bool(0.5) { v } else { -v }
                })
                .collect()
        })
        .collect()
}
