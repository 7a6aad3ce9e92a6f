//! Property tests of the pipeline against independent brute-force oracles.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::Duration;

use proptest::prelude::*;
use relmodal::bench::{gen_random_3cnf, is_complement_free, RandomCnfSpec};
use relmodal::fol::{
    clausify, clausify_with, eval_clauses, eval_flat_clauses, eval_fol, flatten, for_each_structure, Clause,
    ClausifyOptions, FiniteStructure, Literal, Signature, Term,
};
use relmodal::formula::{eval_ltl_lasso, eval_modal, parse_modal, print_modal};
use relmodal::model::{decode, dpll, ground, satisfies, DpllResult};
use relmodal::prover::{ProverOptions, Saturation, SaturationLimits, SaturationOutcome};
use relmodal::translate::{frame_axioms, structure_of, translate, ModalSystem, Schema};

use common::{fol_sentence, kripke, lasso, modal};

const PQ: &[&str] = &["p", "q"];

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(2_000))]

    #[test]
    fn print_then_parse_is_identity(f in modal(6, &["p", "q", "r"], true, true)) {
        prop_assert_eq!(parse_modal(&print_modal(&f)).unwrap(), f);
    }
}

proptest! {
    // One (formula, model, world) triple per case.
    #![proptest_config(cases(10_000))]

    #[test]
    fn translation_agrees_with_kripke_semantics(
        f in modal(4, PQ, true, false),
        m in kripke(3, PQ, vec![None, Some("a".to_string())]),
        pick in any::<prop::sample::Index>(),
    ) {
        let w = pick.index(m.worlds());
        let tr = translate(&f, &Term::var("w")).unwrap();
        let atoms: BTreeSet<String> = PQ.iter().map(|s| s.to_string()).collect();
        let s = structure_of(&m, &atoms);
        let env = HashMap::from([("w".to_string(), w)]);
        prop_assert_eq!(eval_modal(&f, &m, w).unwrap(), eval_fol(&tr, &s, &env).unwrap());
    }
}

proptest! {
    #![proptest_config(cases(1_000))]

    #[test]
    fn frame_axioms_define_their_frame_classes(m in kripke(3, &[], vec![None])) {
        let atoms = BTreeSet::new();
        let s = structure_of(&m, &atoms);
        let r = m.relation(&None).unwrap();
        let n = m.worlds();
        let env = HashMap::new();
        for schema in Schema::ALL {
            prop_assert_eq!(eval_fol(&schema.axiom("R"), &s, &env).unwrap(), schema.holds_on(r, n), "{:?}", schema);
        }
        for system in ModalSystem::all() {
            let emitted = frame_axioms(&system, &[None].into());
            let by_axioms = emitted.iter().all(|a| eval_fol(a, &s, &env).unwrap());
            let by_closure = system.schemas().iter().all(|x| x.holds_on(r, n));
            prop_assert_eq!(by_axioms, by_closure, "{}", system);
        }
    }

    #[test]
    fn ltl_next_is_a_shift(f in modal(3, PQ, false, true), w in lasso(PQ)) {
        let next = eval_ltl_lasso(&f.clone().next(), &w).unwrap();
        prop_assert_eq!(next, eval_ltl_lasso(&f, &w.shifted()).unwrap());
        let always = eval_ltl_lasso(&f.clone().nec(), &w).unwrap();
        let unfolded = eval_ltl_lasso(&f, &w).unwrap() && eval_ltl_lasso(&f.clone().nec(), &w.shifted()).unwrap();
        prop_assert_eq!(always, unfolded);
    }

    #[test]
    fn random_3cnf_parses_and_filters(atoms in 1usize..4, clauses in 1usize..6, depth in 0usize..3, seed in any::<u64>()) {
        let spec = RandomCnfSpec { atoms, clauses, depth, seed, filtered: true };
        let f = gen_random_3cnf(spec);
        prop_assert_eq!(parse_modal(&print_modal(&f)).unwrap(), f.clone());
        prop_assert!(is_complement_free(&f));
        prop_assert!(f.modal_depth() <= depth);
        prop_assert_eq!(gen_random_3cnf(spec), f);
    }
}

fn has_model(sig: &Signature, max: usize, holds: &mut dyn FnMut(&FiniteStructure) -> bool) -> Vec<bool> {
    (1..=max).map(|n| !for_each_structure(sig, n, &mut |m| !holds(m))).collect()
}

proptest! {
    #![proptest_config(cases(300))]

    #[test]
    fn clausification_preserves_satisfiability_per_domain_size(f in fol_sentence(), definitional in any::<bool>()) {
        let clauses = clausify_with(&f, ClausifyOptions { definitional });
        let mut sig = Signature::of_formula(&f);
        sig.merge(&Signature::of_clauses(&clauses));
        prop_assume!(sig.structure_count(2) <= 300_000.0);
        let env = HashMap::new();
        let by_formula = has_model(&Signature::of_formula(&f), 2, &mut |m| eval_fol(&f, m, &env).unwrap());
        let by_clauses = has_model(&sig, 2, &mut |m| eval_clauses(&clauses, m).unwrap());
        prop_assert_eq!(by_formula, by_clauses, "{}", f);
    }

    #[test]
    fn flattening_and_grounding_are_faithful(f in fol_sentence()) {
        let clauses = clausify(&f);
        let flat = flatten(&clauses);
        let sig = Signature::of_clauses(&clauses);
        prop_assume!(sig.structure_count(2) <= 100_000.0);
        for n in 1..=2 {
            let cnf = ground(&flat, n).unwrap();
            for_each_structure(&cnf.signature(), n, &mut |m| {
                let truth = eval_clauses(&clauses, m).unwrap();
                assert_eq!(eval_flat_clauses(&flat, m).unwrap(), truth);
                let a = cnf.encode(m);
                assert_eq!(satisfies(&a, &cnf.clauses), truth, "{f}");
                if truth {
                    assert_eq!(&decode(&a, &cnf).unwrap(), m);
                }
                true
            });
        }
    }
}

fn truth_table(nvars: usize, clauses: &[Vec<i32>]) -> bool {
    (0u32..1 << nvars).any(|bits| {
        let a: Vec<bool> = (0..nvars).map(|i| bits >> i & 1 == 1).collect();
        satisfies(&a, clauses)
    })
}

fn cnf() -> impl Strategy<Value = (usize, Vec<Vec<i32>>)> {
    (1usize..=16).prop_flat_map(|n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        (Just(n), proptest::collection::vec(proptest::collection::vec(lit, 1..=4), 0..=(4 * n + 4)))
    })
}

proptest! {
    #![proptest_config(cases(1_200))]

    #[test]
    fn dpll_agrees_with_truth_tables((n, clauses) in cnf()) {
        match dpll(n, &clauses) {
            DpllResult::Sat(a) => prop_assert!(satisfies(&a, &clauses)),
            DpllResult::Unsat => prop_assert!(!truth_table(n, &clauses)),
        }
    }
}

fn clause_set(vars: bool) -> impl Strategy<Value = Vec<Clause>> {
    let mut terms = vec![Term::constant("a"), Term::constant("b")];
    if vars {
        terms.extend([Term::var("x"), Term::var("y")]);
    }
    let term = prop::sample::select(terms);
    let lit = prop_oneof![
        (any::<bool>(), prop::sample::select(&["P", "Q"][..]), term.clone())
            .prop_map(|(s, p, t)| Literal::new(s, p, vec![t])),
        (any::<bool>(), term.clone(), term).prop_map(|(s, t, u)| Literal::new(s, "R", vec![t, u])),
    ];
    proptest::collection::vec(proptest::collection::vec(lit, 1..=3).prop_map(Clause::new), 1..=7)
}

/// Satisfiability over the Herbrand universe `{a, b}`, which suffices
/// without function symbols.
fn herbrand_sat(cs: &[Clause]) -> bool {
    let mut sig = Signature::of_clauses(cs);
    sig.funs.insert("a".into(), 0);
    sig.funs.insert("b".into(), 0);
    has_model(&sig, 2, &mut |m| eval_clauses(cs, m).unwrap()).contains(&true)
}

fn all_options() -> impl Iterator<Item = ProverOptions> {
    [(true, true), (true, false), (false, true), (false, false)].into_iter().map(|(selection, subsumption)| {
        ProverOptions {
            forward_subsumption: subsumption,
            backward_subsumption: subsumption,
            negative_selection: selection,
        }
    })
}

proptest! {
    #![proptest_config(cases(600))]

    #[test]
    fn prover_decides_ground_sets(cs in clause_set(false)) {
        let sat = herbrand_sat(&cs);
        for options in all_options() {
            match Saturation::new(&cs, SaturationLimits::default(), options).run(None) {
                SaturationOutcome::Refutation(p) => {
                    prop_assert!(!sat, "refuted a satisfiable set");
                    prop_assert_eq!(p.replay(&cs), Ok(()));
                }
                SaturationOutcome::Saturated => prop_assert!(sat, "saturated an unsatisfiable set"),
                other => prop_assert!(false, "ground sets must be decided: {:?} with {:?}", other, options),
            }
        }
    }

    #[test]
    fn prover_is_sound_and_refutes_function_free_sets(cs in clause_set(true)) {
        let sat = herbrand_sat(&cs);
        for options in all_options() {
            // Resolvents such as ~R(x,y) | ~R(y,z) | ... can grow without
            // bound, so satisfiable sets may exhaust the limits. Without
            // subsumption the search space of unsatisfiable sets explodes
            // too, so only soundness is required there, under a time cap.
            let limits = if options.forward_subsumption {
                SaturationLimits { max_clauses: 100_000, ..SaturationLimits::default() }
            } else {
                SaturationLimits { max_clauses: 5_000, max_time: Some(Duration::from_millis(200)), ..SaturationLimits::default() }
            };
            match Saturation::new(&cs, limits, options).run(None) {
                SaturationOutcome::Refutation(p) => {
                    prop_assert!(!sat, "refuted a satisfiable set");
                    prop_assert_eq!(p.replay(&cs), Ok(()));
                }
                SaturationOutcome::Saturated => prop_assert!(sat, "saturated an unsatisfiable set"),
                other => prop_assert!(
                    sat || !options.forward_subsumption,
                    "unsatisfiable set not refuted: {:?} with {:?}",
                    other,
                    options
                ),
            }
        }
    }
}
