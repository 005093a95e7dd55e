mod common;

use proptest::prelude::*;
use seqwork::calculus::{instantiate, match_conclusion};
use seqwork::corpus::{self, Space};
use seqwork::formula::big_and;
use seqwork::interp::{self, craig_interpolate, extract, InterpolationProblem};
use seqwork::multiset::PartitionedSequent;
use seqwork::prover::{self, check_derivation, decide, split_disjunction, Disjunct, Logic, ProofSearchResult};
use seqwork::{Formula, Kind, SearchBudget};

use common::{formula, modal_formula, parse, sequent};

const ATOMS: &[&str] = &["p", "q", "r"];
const TERMINATING: [&str; 5] = ["G3cp", "G4ip", "G4iK[]", "G4iKD[]", "G4LL"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn proofs_found_are_checked(s in sequent(formula(ATOMS, 3), 2, 2)) {
        for name in ["G3cp", "G3ip", "G4ip"] {
            let c = prover::builtin(name);
            if !c.admits(&s) {
                continue;
            }
            if let ProofSearchResult::Provable(d) = prover::prove(c, &s, SearchBudget { max_depth: u32::MAX, max_nodes: 200_000 }) {
                prop_assert!(check_derivation(c, &d).is_ok(), "{name}: {s}");
            }
        }
    }

    #[test]
    fn modal_proofs_found_are_checked(s in sequent(modal_formula(&["p", "q"], 3), 2, 1)) {
        for name in TERMINATING {
            let c = prover::builtin(name);
            if !c.admits(&s) {
                continue;
            }
            if let ProofSearchResult::Provable(d) = prover::prove(c, &s, SearchBudget::UNLIMITED) {
                prop_assert!(check_derivation(c, &d).is_ok(), "{name}: {s}");
            }
        }
    }

    #[test]
    fn matched_instances_resubstitute(s in sequent(modal_formula(ATOMS, 3), 3, 2)) {
        for name in ["G3cp", "G3ip", "G4ip", "G4iKD[]", "G4LL", "G1ip"] {
            let c = prover::builtin(name);
            for inst in match_conclusion(c, &s) {
                let r = c.schema(&inst.schema).unwrap();
                let concl = instantiate(&r.conclusion, &inst.env);
                prop_assert_eq!(concl.as_ref(), Some(&inst.conclusion), "{} {}", name, inst.schema);
                let premises: Option<Vec<_>> = r.premises.iter().map(|p| instantiate(p, &inst.env)).collect();
                prop_assert_eq!(premises.as_ref(), Some(&inst.premises));
            }
        }
    }

    #[test]
    fn extraction_is_deterministic(s in sequent(formula(&["p", "q"], 2), 3, 1)) {
        let c = prover::builtin("G4ip");
        if let ProofSearchResult::Provable(d) = prover::prove(c, &s, SearchBudget::UNLIMITED) {
            for part in interp::partitions(&s) {
                let prob = InterpolationProblem { calculus: c.name.clone(), derivation: d.clone(), partition: part };
                let a = craig_interpolate(c, &prob).unwrap();
                let b = craig_interpolate(c, &prob).unwrap();
                prop_assert_eq!(a.alpha, b.alpha);
            }
        }
    }
}

/// On derivations ending in R&, the interpolant is the conjunction of the
/// premises' interpolants for the same antecedent split.
#[test]
fn right_conjunction_combines_by_and() {
    let c = prover::builtin("G4ip");
    let mut seen = 0;
    for s in corpus::random_sequents(&Space::atoms(2), 7, 4000, 9, true) {
        if !s.suc.iter().any(|g| matches!(g.kind(), Kind::And(..))) {
            continue;
        }
        let ProofSearchResult::Provable(d) = prover::prove(c, &s, SearchBudget::UNLIMITED) else { continue };
        if d.rule != "R&" {
            continue;
        }
        for part in interp::partitions(&s) {
            let PartitionedSequent::SplitAnt { g, pi, delta } = &part else { unreachable!() };
            let (alpha, _) = extract(c, &d, g, pi, delta).unwrap();
            let kids: Vec<Formula> = d.children.iter().map(|k| extract(c, k, g, pi, &k.conclusion.suc).unwrap().0).collect();
            assert_eq!(alpha, big_and(kids), "{s}");
            seen += 1;
        }
    }
    assert!(seen > 50, "only {seen} R& cases");
}

#[test]
fn provable_disjunctions_have_a_provable_disjunct() {
    let mut seen = 0;
    for f in corpus::formulas(&Space::atoms(2).with_bottom(), 9) {
        if matches!(f.kind(), Kind::Or(..)) && decide(Logic::Ipc, &f) {
            assert_ne!(split_disjunction(Logic::Ipc, &f).unwrap(), Disjunct::Neither, "{f}");
            seen += 1;
        }
    }
    assert!(seen > 100);
}

#[test]
fn kreisel_putnam_instance_is_not_derivable() {
    let kp = parse("(~p -> q | r) -> (~p -> q) | (~p -> r)");
    assert!(!decide(Logic::Ipc, &kp));
    assert!(decide(Logic::Cpc, &kp));
}
