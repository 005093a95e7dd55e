#![allow(dead_code)]

use proptest::prelude::*;
use seqwork::{FMultiset, Formula, Sequent};

pub fn leaf(atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    prop_oneof![
        6 => proptest::sample::select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::bot()),
        1 => Just(Formula::top()),
    ]
    .boxed()
}

/// Propositional formulas over `atoms`, at most `depth` connectives deep.
pub fn formula(atoms: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    leaf(atoms)
        .prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            ]
        })
        .boxed()
}

/// As [`formula`], with both modalities.
pub fn modal_formula(atoms: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    leaf(atoms)
        .prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                inner.clone().prop_map(Formula::boxed),
                inner.prop_map(Formula::circle),
            ]
        })
        .boxed()
}

pub fn bag(f: BoxedStrategy<Formula>, max: usize) -> BoxedStrategy<FMultiset> {
    proptest::collection::vec(f, 0..=max).prop_map(FMultiset::from_vec).boxed()
}

pub fn sequent(f: BoxedStrategy<Formula>, max_ant: usize, max_suc: usize) -> BoxedStrategy<Sequent> {
    (bag(f.clone(), max_ant), bag(f, max_suc)).prop_map(|(a, s)| Sequent::new(a, s)).boxed()
}

pub fn parse(s: &str) -> Formula {
    seqwork::syntax::parse_formula(s).unwrap()
}

pub fn seq(s: &str) -> Sequent {
    seqwork::syntax::parse_sequent(s).unwrap()
}
