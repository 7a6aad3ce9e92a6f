//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use relmodal::fol::{FolFormula as F, Term};
use relmodal::formula::{eval_modal, KripkeModel, LassoWord, ModalFormula as M, Modality};
use relmodal::translate::ModalSystem;

/// Modal formulas over `atoms`, with indexed modalities `[a]`/`<a>` when
/// `indexed` and next-time when `next`.
pub fn modal(depth: u32, atoms: &'static [&'static str], indexed: bool, next: bool) -> BoxedStrategy<M> {
    let leaf = prop_oneof![
        6 => proptest::sample::select(atoms).prop_map(M::atom),
        1 => Just(M::True),
        1 => Just(M::False),
    ];
    leaf.prop_recursive(depth, 48, 2, move |inner| {
        let mut options: Vec<BoxedStrategy<M>> = vec![
            inner.clone().prop_map(M::not).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.iff(b)).boxed(),
            inner.clone().prop_map(M::nec).boxed(),
            inner.clone().prop_map(M::pos).boxed(),
        ];
        if indexed {
            options.push(inner.clone().prop_map(|a| a.nec_in("a")).boxed());
            options.push(inner.clone().prop_map(|a| a.pos_in("a")).boxed());
        }
        if next {
            options.push(inner.clone().prop_map(M::next).boxed());
        }
        proptest::strategy::Union::new(options)
    })
    .boxed()
}

/// Pointed Kripke models with up to `max_worlds` worlds over `atoms` and the
/// relations of `indices`.
pub fn kripke(max_worlds: usize, atoms: &'static [&'static str], indices: Vec<Modality>) -> BoxedStrategy<KripkeModel> {
    (1..=max_worlds)
        .prop_flat_map(move |n| {
            let rels = proptest::collection::vec(proptest::collection::vec(any::<bool>(), n * n), indices.len());
            let vals = proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), atoms.len());
            (Just(n), 0..n, rels, vals, Just(indices.clone()))
        })
        .prop_map(move |(n, real, rels, vals, indices)| {
            let mut m = KripkeModel::new(n, real).unwrap();
            for (i, bits) in indices.iter().zip(rels) {
                m.declare_relation(i.clone());
                for (k, b) in bits.into_iter().enumerate() {
                    if b {
                        m.add_edge(i.clone(), k / n, k % n).unwrap();
                    }
                }
            }
            for (p, bits) in atoms.iter().zip(vals) {
                m.declare_atom(*p);
                for (w, b) in bits.into_iter().enumerate() {
                    if b {
                        m.set_true(*p, w).unwrap();
                    }
                }
            }
            m
        })
        .boxed()
}

/// Lasso words over `atoms` with prefix up to 3 and cycle of 1 to 3 letters.
pub fn lasso(atoms: &'static [&'static str]) -> BoxedStrategy<LassoWord> {
    let letter = proptest::collection::vec(any::<bool>(), atoms.len()).prop_map(move |bits| {
        atoms.iter().zip(bits).filter(|(_, b)| *b).map(|(p, _)| p.to_string()).collect::<BTreeSet<String>>()
    });
    (proptest::collection::vec(letter.clone(), 0..=3), proptest::collection::vec(letter, 1..=3))
        .prop_map(|(prefix, cycle)| LassoWord::new(prefix, cycle))
        .boxed()
}

/// Closed first-order formulas over `P/1`, `R/2` and the constant `c`, with
/// variables `x` and `y`.
pub fn fol_sentence() -> BoxedStrategy<F> {
    let term = prop_oneof![Just(Term::var("x")), Just(Term::var("y")), Just(Term::constant("c"))];
    let atom = prop_oneof![
        term.clone().prop_map(|t| F::pred("P", vec![t])),
        (term.clone(), term).prop_map(|(s, t)| F::pred("R", vec![s, t])),
    ];
    let body = atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(F::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.iff(b)),
            (proptest::sample::select(&["x", "y"][..]), inner.clone()).prop_map(|(v, a)| F::forall(v, a)),
            (proptest::sample::select(&["x", "y"][..]), inner).prop_map(|(v, a)| F::exists(v, a)),
        ]
    });
    (body, any::<bool>(), any::<bool>())
        .prop_map(|(f, ex, ey)| {
            let close = |f: F, v: &str, ex: bool| if ex { F::exists(v, f) } else { F::forall(v, f) };
            close(close(f, "y", ey), "x", ex)
        })
        .boxed()
}

/// Every pointed Kripke model with `n` worlds over `atoms` and one default
/// relation, stopping early when `visit` returns false.
pub fn for_each_kripke(n: usize, atoms: &[&str], visit: &mut dyn FnMut(&KripkeModel) -> bool) -> bool {
    let edges = n * n;
    let vals = n * atoms.len();
    for bits in 0u64..(1 << (edges + vals)) {
        for real in 0..n {
            let mut m = KripkeModel::new(n, real).unwrap();
            m.declare_relation(None);
            for k in 0..edges {
                if bits >> k & 1 == 1 {
                    m.add_edge(None, k / n, k % n).unwrap();
                }
            }
            for (a, p) in atoms.iter().enumerate() {
                m.declare_atom(*p);
                for w in 0..n {
                    if bits >> (edges + a * n + w) & 1 == 1 {
                        m.set_true(*p, w).unwrap();
                    }
                }
            }
            if !visit(&m) {
                return false;
            }
        }
    }
    true
}

/// Whether some Kripke model with at most `max_worlds` worlds satisfies
/// the frame properties of `system` and falsifies `goal` at its real world.
pub fn brute_countermodel(goal: &M, system: &ModalSystem, max_worlds: usize) -> Option<usize> {
    let atoms: Vec<String> = goal.atoms().into_iter().collect();
    let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
    let schemas = system.schemas();
    (1..=max_worlds).find(|&n| {
        !for_each_kripke(n, &atoms, &mut |m| {
            let r = m.relation(&None).unwrap();
            let frame = schemas.iter().all(|s| s.holds_on(r, n));
            !(frame && !eval_modal(goal, m, m.real_world()).unwrap())
        })
    })
}
