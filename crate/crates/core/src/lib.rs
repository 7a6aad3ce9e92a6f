pub mod bench;
pub mod cdp;
pub mod fol;
pub mod model;
pub mod formula;
pub mod prover;
pub mod translate;
