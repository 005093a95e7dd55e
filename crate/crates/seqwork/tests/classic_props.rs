use seqwork::classic::{
    check_hilbert, check_nd, contraposition, deduction_theorem, detour_corpus, find_detours, last_rule_kind, normal_proof_corpus, normalize, parse_hilbert, parse_nd,
    random_hilbert_proof, reduce_detour, render_hilbert, render_nd, HilbertSystem, LastRule, Nd, NdSystem,
};
use seqwork::classic::nd::nd_measure;
use seqwork::corpus::{self, Space};
use seqwork::prover::{decide, decide_sequent, Logic};
use seqwork::{Formula, Sequent};

fn hj_proofs(count: u64) -> impl Iterator<Item = seqwork::classic::HilbertProof> {
    let space = Space::atoms(3);
    (0..count).map(move |seed| random_hilbert_proof(&space, &mut corpus::rng(seed), 8 + (seed as usize % 12)))
}

#[test]
fn hilbert_theorems_are_intuitionistic() {
    for (i, p) in hj_proofs(120).enumerate() {
        check_hilbert(HilbertSystem::HJ, &p).unwrap_or_else(|d| panic!("proof {i}: {d:?}"));
        let concl = p.conclusion().unwrap().clone();
        assert!(decide_sequent(Logic::Ipc, &Sequent::from_vecs(p.assumptions.clone(), vec![concl])), "proof {i}");
        // discharge every assumption, last first
        let mut q = p.clone();
        while !q.assumptions.is_empty() {
            q = deduction_theorem(&q, q.assumptions.len()).unwrap();
            check_hilbert(HilbertSystem::HJ, &q).unwrap_or_else(|d| panic!("proof {i} after deduction: {d:?}"));
        }
        let thm = q.conclusion().unwrap();
        let expected = p.assumptions.iter().rev().fold(p.conclusion().unwrap().clone(), |acc, a| Formula::imp(a.clone(), acc));
        assert_eq!(*thm, expected);
        assert!(decide(Logic::Ipc, thm), "proof {i}: {thm}");
    }
}

#[test]
fn contraposition_and_text_round_trip() {
    for (i, p) in hj_proofs(60).enumerate() {
        let q = contraposition(&p, 1).unwrap();
        check_hilbert(HilbertSystem::HJ, &q).unwrap_or_else(|d| panic!("proof {i}: {d:?}"));
        for r in [&p, &q] {
            let back = parse_hilbert(&render_hilbert(r)).unwrap();
            assert_eq!(render_hilbert(&back), render_hilbert(r));
            check_hilbert(HilbertSystem::HJ, &back).unwrap();
        }
    }
}

fn normal_corpus() -> Vec<Nd> {
    normal_proof_corpus(&Space::atoms(2).with_bottom(), 7, 12)
}

#[test]
fn normal_proofs_are_intuitionistic_theorems() {
    let proofs = normal_corpus();
    assert!(proofs.len() > 200, "{}", proofs.len());
    for d in &proofs {
        assert!(check_nd(NdSystem::NDi, d).is_ok(), "{}", render_nd(d));
        assert!(d.is_proof());
        assert!(find_detours(d).is_empty());
        assert_eq!(last_rule_kind(d), LastRule::Introduction, "{}", render_nd(d));
        assert!(decide(Logic::Ipc, d.conclusion()), "{}", d.conclusion());
        assert_eq!(parse_nd(&render_nd(d)).unwrap(), *d);
    }
}

#[test]
fn normalization_removes_detours_without_flags() {
    let proofs = normal_corpus();
    let detours = detour_corpus(&proofs, 3, 300);
    assert_eq!(detours.len(), 300);
    for d in &detours {
        assert!(check_nd(NdSystem::NDi, d).is_ok(), "{}", render_nd(d));
        assert!(!find_detours(d).is_empty());
        let n = normalize(d).unwrap();
        assert!(n.flags.is_empty(), "{:?}", n.flags);
        assert!(n.reductions > 0);
        assert!(find_detours(&n.deduction).is_empty());
        assert_eq!(n.deduction.conclusion(), d.conclusion());
        assert!(check_nd(NdSystem::NDi, &n.deduction).is_ok());
        assert_eq!(last_rule_kind(&n.deduction), LastRule::Introduction);
    }
}

/// A single reduction at the innermost detour lowers the measure.
#[test]
fn one_step_reduction_decreases_the_measure() {
    let proofs = normal_corpus();
    for d in detour_corpus(&proofs, 9, 200) {
        let ds = find_detours(&d);
        // pre-order, so the last detour has no detour below it
        let inner = ds.last().unwrap();
        let r = reduce_detour(&d, &inner.path).unwrap();
        let (before, after) = (nd_measure(&d), nd_measure(&r));
        assert!(seqwork::classic::nd::measure_less(&after, &before), "{before:?} -> {after:?}");
        assert!(check_nd(NdSystem::NDi, &r).is_ok());
    }
}
