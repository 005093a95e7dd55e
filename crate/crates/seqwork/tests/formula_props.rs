mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use seqwork::corpus::{self, Space};
use seqwork::formula::{apply_subst, Substitution};
use seqwork::multiset::multiset_less;
use seqwork::{FMultiset, Formula, Kind, Measure};

use common::{bag, formula, modal_formula};

const ATOMS: &[&str] = &["p", "q", "r"];

/// Replaces the subformula reached by following `path` (0 = left, 1 = right).
fn replace_at(f: &Formula, path: &[bool], by: &Formula) -> Formula {
    let Some((&right, rest)) = path.split_first() else { return by.clone() };
    match f.kind() {
        Kind::And(a, b) if right => Formula::and(a.clone(), replace_at(b, rest, by)),
        Kind::And(a, b) => Formula::and(replace_at(a, rest, by), b.clone()),
        Kind::Or(a, b) if right => Formula::or(a.clone(), replace_at(b, rest, by)),
        Kind::Or(a, b) => Formula::or(replace_at(a, rest, by), b.clone()),
        Kind::Imp(a, b) if right => Formula::imp(a.clone(), replace_at(b, rest, by)),
        Kind::Imp(a, b) => Formula::imp(replace_at(a, rest, by), b.clone()),
        Kind::Box(a) => Formula::boxed(replace_at(a, rest, by)),
        Kind::Circle(a) => Formula::circle(replace_at(a, rest, by)),
        _ => by.clone(),
    }
}

fn subterm<'a>(f: &'a Formula, path: &[bool]) -> &'a Formula {
    let Some((&right, rest)) = path.split_first() else { return f };
    match f.kind() {
        Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => subterm(if right { b } else { a }, rest),
        Kind::Box(a) | Kind::Circle(a) => subterm(a, rest),
        _ => f,
    }
}

fn path_depth(f: &Formula, path: &[bool]) -> usize {
    let mut cur = f;
    for (i, &right) in path.iter().enumerate() {
        cur = match cur.kind() {
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                if right {
                    b
                } else {
                    a
                }
            }
            Kind::Box(a) | Kind::Circle(a) => a,
            _ => return i,
        };
    }
    path.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn substitution_atoms_are_bounded(f in modal_formula(ATOMS, 4), g in modal_formula(&["q", "s"], 3), h in modal_formula(&["t"], 2)) {
        let s = Substitution::new().with("p", g).with("r", h);
        let mut bound: BTreeSet<String> = BTreeSet::new();
        for q in f.atoms() {
            match s.get(&q) {
                Some(img) => bound.extend(img.atoms()),
                None => { bound.insert(q); }
            }
        }
        prop_assert!(apply_subst(&s, &f).atoms().is_subset(&bound));
    }

    #[test]
    fn polarity_sets_cover_atoms(f in modal_formula(ATOMS, 5)) {
        let (pos, neg) = f.polarity_atoms();
        prop_assert_eq!(pos.union(&neg).cloned().collect::<BTreeSet<_>>(), f.atoms());
    }

    #[test]
    fn measures_drop_when_a_subformula_shrinks(f in modal_formula(ATOMS, 5), path in proptest::collection::vec(any::<bool>(), 1..6), small in modal_formula(ATOMS, 2)) {
        let d = path_depth(&f, &path);
        prop_assume!(d > 0);
        let path = &path[..d];
        let old = subterm(&f, path);
        let g = replace_at(&f, path, &small);
        for m in [Measure::Weight, Measure::Degree] {
            if small.measure(m) < old.measure(m) {
                prop_assert!(g.measure(m) < f.measure(m), "{m:?}: {f} became {g}");
            }
        }
    }

    #[test]
    fn multiset_order_is_strict_partial(a in bag(formula(&["p", "q"], 2), 4), b in bag(formula(&["p", "q"], 2), 4), c in bag(formula(&["p", "q"], 2), 4)) {
        for m in [Measure::Weight, Measure::Degree] {
            prop_assert!(!multiset_less(&a, &a, m));
            prop_assert!(!(multiset_less(&a, &b, m) && multiset_less(&b, &a, m)));
            if multiset_less(&a, &b, m) && multiset_less(&b, &c, m) {
                prop_assert!(multiset_less(&a, &c, m));
            }
        }
    }
}

/// Every bag over two atoms of total weight at most 8; the descent relation
/// restricted to them must be acyclic, so no descending chain repeats.
#[test]
fn multiset_order_has_no_cycles_on_small_bags() {
    let by_w = corpus::formulas_by_weight(&Space::atoms(2), 8);
    let bags: Vec<FMultiset> = corpus::bags_by_weight(&by_w, 8).into_iter().flatten().collect();
    assert!(bags.len() > 1000);
    for m in [Measure::Weight, Measure::Degree] {
        // Kahn's algorithm over the "is below" edges
        let n = bags.len();
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if multiset_less(&bags[j], &bags[i], m) {
                    below[i].push(j);
                    indeg[j] += 1;
                }
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for &j in &below[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
        assert_eq!(seen, n, "{m:?}: a cycle among {} bags", n - seen);
    }
}
