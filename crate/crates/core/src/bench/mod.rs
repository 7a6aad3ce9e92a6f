//! The built-in formula corpus, the random formula generator and the
//! corpus runner shared by the command line and the test suite.

mod corpus;
mod random;
mod runner;

pub use corpus::{
    builtin_corpus_text, corpus_macros, load_corpus, parse_corpus, Basis, Check, CorpusEntry, CorpusError, Expect,
};
pub use random::{clause_literals, gen_random_3cnf, is_complement_free, RandomCnfSpec};
pub use runner::{render_records, render_summary, render_table, run_bench, BenchRow};
