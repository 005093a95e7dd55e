//! Hilbert systems and natural deduction.

pub mod hilbert;
pub mod nd;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{self, Space};
use crate::formula::{Formula, Kind};

pub use hilbert::{
    axiom_match, axiom_schema, check_hilbert, contraposition, deduction_theorem, parse_hilbert, random_hilbert_proof, render_hilbert, Axiom, HilbertDefect, HilbertError,
    HilbertProof, HilbertSystem, Justification,
};
pub use nd::{
    check_nd, find_detours, last_rule_kind, normalize, normalize_capped, parse_nd, reduce_detour, render_nd, Detour, DetourKind, LastRule, Nd, NdDefect, NdError, NdRule,
    NdSystem, NormalSearch, Normalized,
};

/// Closed normal NDi proofs, found by the normal-proof search with height
/// bound `max_height`, for every formula over `space` up to `max_weight`.
pub fn normal_proof_corpus(space: &Space, max_weight: u32, max_height: usize) -> Vec<Nd> {
    let mut s = NormalSearch::new(max_height);
    corpus::formulas(space, max_weight).iter().filter_map(|f| s.prove(f)).collect()
}

fn fresh(d: &Nd, used: &mut BTreeSet<String>) -> Nd {
    nd::freshen_all(d, used)
}

/// Deductions with detours, built from closed normal proofs by composing the
/// three detour shapes, some nested. Deterministic for a seed.
pub fn detour_corpus(proofs: &[Nd], seed: u64, count: usize) -> Vec<Nd> {
    let mut rng = corpus::rng(seed);
    let mut used = BTreeSet::new();
    for d in proofs {
        nd::collect_labels(d, &mut used);
    }
    let mut out: Vec<Nd> = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 200 {
        tries += 1;
        // a base proof, sometimes an earlier detour deduction for nesting
        let base = if !out.is_empty() && rng.gen_bool(0.3) { out.choose(&mut rng).unwrap().clone() } else { proofs.choose(&mut rng).unwrap().clone() };
        let a = base.conclusion().clone();
        let built = match rng.gen_range(0..3) {
            0 => {
                let other = proofs.choose(&mut rng).unwrap();
                let b = other.conclusion().clone();
                let pair = Nd::infer(NdRule::AndI, Formula::and(a.clone(), b), vec![fresh(&base, &mut used), fresh(other, &mut used)], &[]);
                Some(Nd::infer(NdRule::AndE(0), a, vec![pair], &[]))
            }
            1 => {
                // a proof of a -> c ending in ->I, applied to the base
                proofs.iter().filter(|d| matches!(d.conclusion().kind(), Kind::Imp(x, _) if *x == a) && d.rule() == Some(NdRule::ImpI)).collect::<Vec<_>>().choose(&mut rng).map(|imp| {
                    let Kind::Imp(_, c) = imp.conclusion().kind() else { unreachable!() };
                    Nd::infer(NdRule::ImpE, c.clone(), vec![fresh(imp, &mut used), fresh(&base, &mut used)], &[])
                })
            }
            _ => {
                // a | b by |I0, then cases from proofs of a -> c and b -> c
                let cands: Vec<&Nd> = proofs.iter().filter(|d| matches!(d.conclusion().kind(), Kind::Imp(x, _) if *x == a) && d.rule() == Some(NdRule::ImpI)).collect();
                cands.choose(&mut rng).and_then(|left| {
                    let Kind::Imp(_, c) = left.conclusion().kind() else { unreachable!() };
                    let right: Vec<&Nd> = proofs
                        .iter()
                        .filter(|d| matches!(d.conclusion().kind(), Kind::Imp(_, y) if y == c) && d.rule() == Some(NdRule::ImpI))
                        .collect();
                    let right = *right.choose(&mut rng)?;
                    let Kind::Imp(b, _) = right.conclusion().kind() else { unreachable!() };
                    let (l, r) = (fresh(left, &mut used), fresh(right, &mut used));
                    let case = |d: Nd| match d {
                        Nd::Inference { children, discharged, .. } => (children.into_iter().next().unwrap(), discharged.first().cloned()),
                        _ => unreachable!(),
                    };
                    let (body_l, lab_l) = case(l);
                    let (body_r, lab_r) = case(r);
                    let la = lab_l.unwrap_or_else(|| nd::new_label(&mut used));
                    let lb = lab_r.unwrap_or_else(|| nd::new_label(&mut used));
                    let inj = Nd::infer(NdRule::OrI(0), Formula::or(a.clone(), b.clone()), vec![fresh(&base, &mut used)], &[]);
                    Some(Nd::infer(NdRule::OrE, c.clone(), vec![inj, body_l, body_r], &[&la, &lb]))
                })
            }
        };
        out.extend(built);
    }
    out
}
