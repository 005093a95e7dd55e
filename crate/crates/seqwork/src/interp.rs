//! Craig interpolants read off cut-free derivations, rule by rule, and
//! certificates checked by the prover.
//!
//! Single-conclusion calculi use the split `Γ ; Π => Δ`. Multi-conclusion
//! calculi use the two-sided split `Γ1 => Δ1 | Γ2 => Δ2` internally, with
//! `Δ1` empty at the top.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::matching::instantiate_pat;
use crate::calculus::{classify_rule, instances_of, match_full_instance, Binding, Calculus, Classification, Env, Item, MatchOptions, MetaSequent, Mode, RuleSchema};
use crate::corpus::{self, Space};
use crate::formula::{big_and, big_or, Formula, Kind};
use crate::multiset::{FMultiset, PartitionedSequent, Sequent};
use crate::prover::{self, check_derivation, Derivation, Logic, ProofSearchResult, SearchBudget};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InterpError {
    #[error("not an axiom instance: {0}")]
    NotAnAxiom(String),
    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),
    #[error("partition does not match the derivation: {0}")]
    PartitionMismatch(String),
    #[error("not provable: {0}")]
    NotProvable(String),
    #[error("not an implication: {0}")]
    NotAnImplication(String),
    #[error("could not derive certificate sequent {0}")]
    CertificateSearch(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationProblem {
    pub calculus: String,
    pub derivation: Derivation,
    pub partition: PartitionedSequent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolantCertificate {
    pub alpha: Formula,
    /// `Γ => α`
    pub left_derivation: Derivation,
    /// `Π, α => Δ`
    pub right_derivation: Derivation,
    /// Choices the extractor made, e.g. which premise owns the succedent.
    pub notes: Vec<String>,
}

/// Two-sided split of a sequent.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Split {
    g1: FMultiset,
    d1: FMultiset,
    g2: FMultiset,
    d2: FMultiset,
}

impl Split {
    fn ant(g: FMultiset, pi: FMultiset, delta: FMultiset) -> Split {
        Split { g1: g, d1: FMultiset::new(), g2: pi, d2: delta }
    }
    fn sequent(&self) -> Sequent {
        Sequent::new(self.g1.union(&self.g2), self.d1.union(&self.d2))
    }
}

fn split_of(p: &PartitionedSequent) -> Result<Split, InterpError> {
    match p {
        PartitionedSequent::SplitAnt { g, pi, delta } => Ok(Split::ant(g.clone(), pi.clone(), delta.clone())),
        PartitionedSequent::RestInterp { .. } => Err(InterpError::PartitionMismatch("expected a partition of the form G ; P => D".into())),
    }
}

/// Atoms allowed in an interpolant of `g ; pi => delta`.
pub fn common_language(g: &FMultiset, pi: &FMultiset, delta: &FMultiset) -> BTreeSet<String> {
    let right: BTreeSet<String> = pi.atoms().union(&delta.atoms()).cloned().collect();
    g.atoms().intersection(&right).cloned().collect()
}

fn pats(side: &[Item], env: &Env) -> Vec<Formula> {
    MetaSequent::formula_pats(side).into_iter().filter_map(|p| instantiate_pat(p, env)).collect()
}

fn bag(env: &Env, v: usize) -> FMultiset {
    match &env[v] {
        Some(Binding::Multiset(m)) => m.clone(),
        _ => FMultiset::new(),
    }
}

/// Take `f` out of `a` if it is there, otherwise out of `b`; `true` when it came from `a`.
fn take(f: &Formula, a: &mut FMultiset, b: &mut FMultiset) -> Option<bool> {
    if a.remove_one(f) {
        Some(true)
    } else if b.remove_one(f) {
        Some(false)
    } else {
        None
    }
}

/// Interpolant of a partitioned axiom instance, by the shape of the axiom:
/// identity, `=> φ`, and `Γ, φ1..φn => Δ` with `V(φi) = V(φj)`. Choices are
/// resolved towards the constants.
pub fn axiom_interpolant(c: &Calculus, part: &PartitionedSequent) -> Result<Formula, InterpError> {
    let sp = split_of(part)?;
    let s = sp.sequent();
    for r in &c.axioms {
        if let Some(inst) = instances_of(r, &s, MatchOptions::ALL).into_iter().next() {
            return axiom_case(c, r, &inst.env, &sp);
        }
    }
    Err(InterpError::NotAnAxiom(s.to_string()))
}

fn axiom_case(c: &Calculus, r: &RuleSchema, env: &Env, sp: &Split) -> Result<Formula, InterpError> {
    let ant = pats(&r.conclusion.ant, env);
    let suc = pats(&r.conclusion.suc, env);
    let in1 = |f: &Formula, left: bool| if left { sp.g1.contains(f) } else { sp.d1.contains(f) };
    if ant.len() == 1 && suc.len() == 1 && ant[0] == suc[0] {
        let f = &ant[0];
        return Ok(match (in1(f, true), in1(f, false)) {
            _ if c.mode == Mode::Single && sp.g2.contains(f) => Formula::top(),
            _ if c.mode == Mode::Single => f.clone(),
            // both in part 1 or both in part 2
            (true, true) => Formula::bot(),
            (false, false) => Formula::top(),
            (true, false) => f.clone(),
            (false, true) => Formula::not(f.clone()),
        });
    }
    if ant.is_empty() && suc.len() == 1 {
        return Ok(if sp.d2.contains(&suc[0]) { Formula::top() } else { Formula::bot() });
    }
    if suc.is_empty() && !ant.is_empty() {
        let all = FMultiset::from_vec(ant.clone());
        if sp.g2.contains_all(&all) {
            return Ok(Formula::top());
        }
        if sp.g1.contains_all(&all) {
            return Ok(Formula::bot());
        }
        let mut pi = sp.g2.clone();
        let mut in_pi = Vec::new();
        for f in &ant {
            if pi.remove_one(f) {
                in_pi.push(f.clone());
            }
        }
        return Ok(Formula::not(big_and(in_pi)));
    }
    Err(InterpError::UnsupportedRule(format!("axiom {} is not focused", r.name)))
}

/// Interpolant of `g ; pi => delta` read off `d`, plus the extractor's notes.
pub fn extract(c: &Calculus, d: &Derivation, g: &FMultiset, pi: &FMultiset, delta: &FMultiset) -> Result<(Formula, Vec<String>), InterpError> {
    let sp = Split::ant(g.clone(), pi.clone(), delta.clone());
    if sp.sequent() != d.conclusion {
        return Err(InterpError::PartitionMismatch(format!("{} is not a partition of {}", PartitionedSequent::split(g.clone(), pi.clone(), delta.clone()), d.conclusion)));
    }
    let mut notes = Vec::new();
    let a = go(c, d, &sp, &mut notes)?;
    Ok((a, notes))
}

fn go(c: &Calculus, d: &Derivation, sp: &Split, notes: &mut Vec<String>) -> Result<Formula, InterpError> {
    let r = c.schema(&d.rule).ok_or_else(|| InterpError::UnsupportedRule(d.rule.clone()))?;
    let prem: Vec<Sequent> = d.children.iter().map(|x| x.conclusion.clone()).collect();
    let env = match_full_instance(r, &d.conclusion, &prem).ok_or_else(|| InterpError::UnsupportedRule(format!("{} (node is not an instance)", r.name)))?;
    if r.is_axiom() {
        return axiom_case(c, r, &env, sp);
    }
    match c.mode {
        Mode::Multi => maehara(r, &env, d, sp, notes, c),
        Mode::Single => single(c, r, &env, d, sp, notes),
    }
}

/// Two-sided interpolation for multi-conclusion rules with one principal
/// formula and shared contexts: side formulas go where the principal is;
/// branching combines with `|` on side 1 and `&` on side 2.
fn maehara(r: &RuleSchema, env: &Env, d: &Derivation, sp: &Split, notes: &mut Vec<String>, c: &Calculus) -> Result<Formula, InterpError> {
    let ant = pats(&r.conclusion.ant, env);
    let suc = pats(&r.conclusion.suc, env);
    let mut rest = sp.clone();
    let side1 = match (ant.as_slice(), suc.as_slice()) {
        ([f], []) => take(f, &mut rest.g1, &mut rest.g2),
        ([], [f]) => take(f, &mut rest.d1, &mut rest.d2),
        _ => return Err(InterpError::UnsupportedRule(format!("{} (no single principal formula)", r.name))),
    }
    .ok_or_else(|| InterpError::PartitionMismatch(format!("principal of {} not in the sequent", r.name)))?;
    let mut alphas = Vec::new();
    for ch in &d.children {
        let mut p = rest.clone();
        let extra_a = ch.conclusion.ant.difference(&rest.g1.union(&rest.g2));
        let extra_s = ch.conclusion.suc.difference(&rest.d1.union(&rest.d2));
        if side1 {
            p.g1 = p.g1.union(&extra_a);
            p.d1 = p.d1.union(&extra_s);
        } else {
            p.g2 = p.g2.union(&extra_a);
            p.d2 = p.d2.union(&extra_s);
        }
        if p.sequent() != ch.conclusion {
            return Err(InterpError::UnsupportedRule(format!("{} (premise does not extend the conclusion context)", r.name)));
        }
        alphas.push(go(c, ch, &p, notes)?);
    }
    Ok(match alphas.len() {
        1 => alphas.pop().unwrap(),
        _ if side1 => big_or(alphas),
        _ => big_and(alphas),
    })
}

fn single(c: &Calculus, r: &RuleSchema, env: &Env, d: &Derivation, sp: &Split, notes: &mut Vec<String>) -> Result<Formula, InterpError> {
    let (g, pi) = (&sp.g1, &sp.g2);
    let child = |k: usize, g: FMultiset, pi: FMultiset, notes: &mut Vec<String>| -> Result<Formula, InterpError> {
        let ch = &d.children[k];
        let p = Split::ant(g, pi, ch.conclusion.suc.clone());
        if p.sequent() != ch.conclusion {
            return Err(InterpError::UnsupportedRule(format!("{} (premise {} does not extend the conclusion context)", r.name, k + 1)));
        }
        go(c, ch, &p, notes)
    };
    let ctx: Option<usize> = MetaSequent::ctx_vars(&r.conclusion.ant).first().copied();
    let ctx_bag = ctx.map(|v| bag(env, v)).unwrap_or_default();
    let extras = |k: usize| d.children[k].conclusion.ant.difference(&ctx_bag);
    let ant = pats(&r.conclusion.ant, env);

    match r.name.as_str() {
        "LW" | "LC" => {
            let f = ant.first().cloned().ok_or_else(|| InterpError::UnsupportedRule(r.name.clone()))?;
            let (mut g2, mut pi2) = (g.clone(), pi.clone());
            if r.name == "LW" {
                take(&f, &mut pi2, &mut g2);
            } else if pi.contains(&f) {
                pi2.insert(f);
            } else {
                g2.insert(f);
            }
            return child(0, g2, pi2, notes);
        }
        "RW" => return child(0, g.clone(), pi.clone(), notes),
        "Lp->" => return lp_imp(&ant, sp, notes, &child),
        _ => {}
    }

    match classify_rule(r, c.mode) {
        Classification::RightSemiAnalytic => {
            let mut alphas = Vec::new();
            for k in 0..d.children.len() {
                alphas.push(child(k, g.clone(), pi.union(&extras(k)), notes)?);
            }
            Ok(if alphas.len() == 1 { alphas.pop().unwrap() } else { big_and(alphas) })
        }
        Classification::LeftSemiAnalytic | Classification::LeftSemiAnalyticContextSharing => {
            let phi = &ant[0];
            let (mut g1, mut g2) = (g.clone(), pi.clone());
            let on_left = take(phi, &mut g1, &mut g2).ok_or_else(|| InterpError::PartitionMismatch(phi.to_string()))?;
            if !on_left {
                // principal in Π: everything new joins Π; conjoin
                let mut alphas = Vec::new();
                for k in 0..d.children.len() {
                    alphas.push(child(k, g1.clone(), g2.union(&extras(k)), notes)?);
                }
                return Ok(if alphas.len() == 1 { alphas.pop().unwrap() } else { big_and(alphas) });
            }
            // principal in Γ: the premises carrying the succedent context are
            // index 1; the others are split the other way round
            let mut owners = Vec::new();
            let mut others = Vec::new();
            let mut owner_idx = Vec::new();
            for (k, p) in r.premises.iter().enumerate() {
                if !MetaSequent::ctx_vars(&p.suc).is_empty() {
                    owner_idx.push(k + 1);
                    owners.push(child(k, g1.union(&extras(k)), g2.clone(), notes)?);
                } else {
                    others.push(child(k, g2.clone(), g1.union(&extras(k)), notes)?);
                }
            }
            let idx: Vec<String> = owner_idx.iter().map(|k| k.to_string()).collect();
            notes.push(format!("{}: principal {} on the left; succedent owner premise(s) [{}] taken as index 1", r.name, phi, idx.join(",")));
            Ok(Formula::imp(big_and(others), big_or(owners)))
        }
        Classification::ModalSemiAnalyticK | Classification::ModalSemiAnalyticD => {
            let bv = MetaSequent::box_ctx_vars(&r.conclusion.ant)[0];
            let mut boxed: Vec<Formula> = bag(env, bv).iter().cloned().collect();
            // D: the principal []A is unboxed in the premise as well
            boxed.extend(ant.iter().filter_map(|f| match f.kind() {
                Kind::Box(a) => Some(a.clone()),
                _ => None,
            }));
            let (mut gl, mut pl) = (g.clone(), pi.clone());
            let (mut ug, mut up) = (Vec::new(), Vec::new());
            for a in boxed {
                match take(&Formula::boxed(a.clone()), &mut pl, &mut gl) {
                    Some(true) => up.push(a),
                    Some(false) => ug.push(a),
                    None => return Err(InterpError::PartitionMismatch(format!("[]{a}"))),
                }
            }
            let alpha = child(0, FMultiset::from_vec(ug), FMultiset::from_vec(up), notes)?;
            Ok(Formula::boxed(alpha))
        }
        Classification::NotSemiAnalytic(why) => Err(InterpError::UnsupportedRule(format!("{} ({why})", r.name))),
    }
}

type Child<'a> = dyn Fn(usize, FMultiset, FMultiset, &mut Vec<String>) -> Result<Formula, InterpError> + 'a;

/// `G, p, B => D / G, p, p -> B => D`: when `p` and `p -> B` are split by
/// the partition the interpolant is `β & p` or `p -> β`.
fn lp_imp(ant: &[Formula], sp: &Split, notes: &mut Vec<String>, child: &Child<'_>) -> Result<Formula, InterpError> {
    let (p, imp) = match ant {
        [p, imp] => (p.clone(), imp.clone()),
        _ => return Err(InterpError::UnsupportedRule("Lp->".into())),
    };
    let b = match imp.kind() {
        Kind::Imp(_, b) => b.clone(),
        _ => return Err(InterpError::UnsupportedRule("Lp->".into())),
    };
    let (mut g, mut pi) = (sp.g1.clone(), sp.g2.clone());
    let imp_left = take(&imp, &mut g, &mut pi).ok_or_else(|| InterpError::PartitionMismatch(imp.to_string()))?;
    // keep p with its implication when both sides allow it
    let p_left = if imp_left {
        g.remove_one(&p) || !pi.remove_one(&p)
    } else {
        !pi.remove_one(&p) && g.remove_one(&p)
    };
    match (imp_left, p_left) {
        (true, true) => child(0, g.with(p).with(b), pi, notes),
        (false, false) => child(0, g, pi.with(p).with(b), notes),
        (false, true) => Ok(Formula::and(child(0, g.with(p.clone()), pi.with(b), notes)?, p)),
        (true, false) => Ok(Formula::imp(p.clone(), child(0, g.with(b), pi.with(p), notes)?)),
    }
}

const CERT_BUDGET: SearchBudget = SearchBudget { max_depth: u32::MAX, max_nodes: 5_000_000 };

fn certify(c: &Calculus, alpha: Formula, g: &FMultiset, pi: &FMultiset, delta: &FMultiset, notes: Vec<String>) -> Result<InterpolantCertificate, InterpError> {
    let left = Sequent::new(g.clone(), FMultiset::from_vec(vec![alpha.clone()]));
    let right = Sequent::new(pi.clone().with(alpha.clone()), delta.clone());
    let find = |s: &Sequent| match prover::prove(c, s, CERT_BUDGET) {
        ProofSearchResult::Provable(d) => Ok(d),
        _ => Err(InterpError::CertificateSearch(s.to_string())),
    };
    Ok(InterpolantCertificate { alpha, left_derivation: find(&left)?, right_derivation: find(&right)?, notes })
}

/// Interpolant by structural recursion on the derivation, with both
/// certificate sequents derived by the prover.
pub fn craig_interpolate(c: &Calculus, prob: &InterpolationProblem) -> Result<InterpolantCertificate, InterpError> {
    let sp = split_of(&prob.partition)?;
    if prob.partition.underlying() != prob.derivation.conclusion {
        return Err(InterpError::PartitionMismatch(format!("{} is not a partition of {}", prob.partition, prob.derivation.conclusion)));
    }
    let (alpha, notes) = extract(c, &prob.derivation, &sp.g1, &sp.g2, &sp.d2)?;
    certify(c, alpha, &sp.g1, &sp.g2, &sp.d2, notes)
}

/// Certificate for a given candidate α of `g ; pi => delta`, e.g. a
/// minimized interpolant.
pub fn formula_certificate(c: &Calculus, alpha: Formula, part: &PartitionedSequent) -> Result<InterpolantCertificate, InterpError> {
    let sp = split_of(part)?;
    certify(c, alpha, &sp.g1, &sp.g2, &sp.d2, Vec::new())
}

/// Re-check both derivations, their end sequents, and the atoms of α.
pub fn verify_certificate(c: &Calculus, cert: &InterpolantCertificate, part: &PartitionedSequent) -> Result<(), Vec<String>> {
    let mut defects = Vec::new();
    let sp = match split_of(part) {
        Ok(s) => s,
        Err(e) => return Err(vec![e.to_string()]),
    };
    let left = Sequent::new(sp.g1.clone(), FMultiset::from_vec(vec![cert.alpha.clone()]));
    let right = Sequent::new(sp.g2.clone().with(cert.alpha.clone()), sp.d2.clone());
    if cert.left_derivation.conclusion != left {
        defects.push(format!("left derivation ends in {}, expected {}", cert.left_derivation.conclusion, left));
    }
    if cert.right_derivation.conclusion != right {
        defects.push(format!("right derivation ends in {}, expected {}", cert.right_derivation.conclusion, right));
    }
    for (name, d) in [("left", &cert.left_derivation), ("right", &cert.right_derivation)] {
        if let Err(ds) = check_derivation(c, d) {
            defects.extend(ds.into_iter().map(|x| format!("{name} derivation {x}")));
        }
    }
    let allowed = common_language(&sp.g1, &sp.g2, &sp.d2);
    let foreign: Vec<String> = cert.alpha.atoms().difference(&allowed).cloned().collect();
    if !foreign.is_empty() {
        defects.push(format!("interpolant uses atoms outside the common language: {}", foreign.join(", ")));
    }
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

/// Interpolant of a provable implication `a -> b`, from a derivation of
/// `a => b` split as `a ; => b`.
pub fn formula_interpolant(logic: Logic, f: &Formula) -> Result<InterpolantCertificate, InterpError> {
    let (a, b) = match f.kind() {
        Kind::Imp(a, b) => (a.clone(), b.clone()),
        _ => return Err(InterpError::NotAnImplication(f.to_string())),
    };
    let c = prover::calculus_for(logic);
    let s = Sequent::from_vecs(vec![a.clone()], vec![b.clone()]);
    let d = match prover::prove(c, &s, SearchBudget::UNLIMITED) {
        ProofSearchResult::Provable(d) => d,
        _ => return Err(InterpError::NotProvable(f.to_string())),
    };
    let part = PartitionedSequent::split(FMultiset::from_vec(vec![a]), FMultiset::new(), FMultiset::from_vec(vec![b]));
    craig_interpolate(c, &InterpolationProblem { calculus: c.name.clone(), derivation: d, partition: part })
}

/// Every split `Γ ; Π => Δ` of the antecedent of `s` (as multisets).
pub fn partitions(s: &Sequent) -> Vec<PartitionedSequent> {
    let distinct = s.ant.distinct();
    let mut out = Vec::new();
    let mut counts = vec![0usize; distinct.len()];
    loop {
        let mut g = Vec::new();
        for (f, &n) in distinct.iter().zip(&counts) {
            g.extend(std::iter::repeat(f.clone()).take(n));
        }
        let g = FMultiset::from_vec(g);
        let pi = s.ant.difference(&g);
        out.push(PartitionedSequent::split(g, pi, s.suc.clone()));
        let mut i = 0;
        loop {
            if i == distinct.len() {
                return out;
            }
            if counts[i] < s.ant.count(&distinct[i]) {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Optional post-pass: the first formula in canonical order over the common
/// language (with constants) equivalent to `alpha` in `c`, up to `max_weight`.
pub fn minimize(c: &Calculus, alpha: &Formula, atoms: &BTreeSet<String>, max_weight: u32) -> Formula {
    let mut space = Space::atoms(0).with_constants();
    space.atoms = atoms.iter().cloned().collect();
    for cand in corpus::formulas(&space, max_weight.min(alpha.weight())) {
        let there = Sequent::from_vecs(vec![alpha.clone()], vec![cand.clone()]);
        let back = Sequent::from_vecs(vec![cand.clone()], vec![alpha.clone()]);
        if prover::prove(c, &there, CERT_BUDGET).is_provable() && prover::prove(c, &back, CERT_BUDGET).is_provable() {
            return cand;
        }
    }
    alpha.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{builtin, prove};
    use crate::syntax::{parse_formula, parse_sequent};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }
    fn bag(v: &[&str]) -> FMultiset {
        v.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn axiom_cases() {
        let c = builtin("G3ip");
        let part = |g: &[&str], pi: &[&str], d: &[&str]| PartitionedSequent::split(bag(g), bag(pi), bag(d));
        assert_eq!(axiom_interpolant(c, &part(&["p"], &[], &["p"])), Ok(f("p")));
        assert_eq!(axiom_interpolant(c, &part(&[], &["p"], &["p"])), Ok(f("true")));
        assert_eq!(axiom_interpolant(c, &part(&["false"], &[], &[])), Ok(f("false")));
        assert_eq!(axiom_interpolant(c, &part(&["q"], &["false"], &["r"])), Ok(f("true")));
        assert!(matches!(axiom_interpolant(c, &part(&["p"], &[], &["q"])), Err(InterpError::NotAnAxiom(_))));
    }

    #[test]
    fn conjunction_on_the_right() {
        let c = builtin("G4ip");
        let s = parse_sequent("p, q => q & p").unwrap();
        let d = prove(c, &s, SearchBudget::UNLIMITED).derivation().unwrap().clone();
        assert_eq!(d.rule, "R&");
        let (a, _) = extract(c, &d, &bag(&["p"]), &bag(&["q"]), &bag(&["q & p"])).unwrap();
        assert_eq!(a, big_and([f("true"), f("p")]));
    }

    #[test]
    fn lp_imp_cases() {
        let c = builtin("G4ip");
        let s = parse_sequent("p, p -> q => q").unwrap();
        let d = prove(c, &s, SearchBudget::UNLIMITED).derivation().unwrap().clone();
        assert_eq!(d.rule, "Lp->");
        let (a, _) = extract(c, &d, &bag(&["p"]), &bag(&["p -> q"]), &bag(&["q"])).unwrap();
        assert_eq!(a, f("true & p"));
        let (a, _) = extract(c, &d, &bag(&["p -> q"]), &bag(&["p"]), &bag(&["q"])).unwrap();
        assert_eq!(a, f("p -> q"));
    }

    #[test]
    fn certificates_verify() {
        for (logic, s) in [(Logic::Ipc, "p & q -> q | r"), (Logic::Cpc, "p & ~p -> q"), (Logic::Ipc, "p -> p"), (Logic::Cpc, "~~p -> p | r")] {
            let cert = formula_interpolant(logic, &f(s)).unwrap();
            let (a, b) = match f(s).kind() {
                Kind::Imp(a, b) => (a.clone(), b.clone()),
                _ => unreachable!(),
            };
            let part = PartitionedSequent::split(FMultiset::from_vec(vec![a]), FMultiset::new(), FMultiset::from_vec(vec![b]));
            verify_certificate(prover::calculus_for(logic), &cert, &part).unwrap();
        }
    }

    #[test]
    fn partition_count() {
        let s = parse_sequent("p, p, q => r").unwrap();
        assert_eq!(partitions(&s).len(), 6);
    }
}
