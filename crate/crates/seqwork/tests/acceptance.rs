//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits non-zero if any fails. Pass criterion numbers to run a subset.

use std::collections::BTreeSet;
use std::time::Instant;

use seqwork::calculus::{check_terminating, classify_rule, is_focused_axiom, Classification, WellOrdered};
use seqwork::classic::nd::excluded_middle;
use seqwork::classic::{
    check_hilbert, check_nd, deduction_theorem, detour_corpus, find_detours, last_rule_kind, normal_proof_corpus, normalize, random_hilbert_proof, Axiom, HilbertProof,
    HilbertSystem, LastRule, NdSystem, NormalSearch,
};
use seqwork::corpus::{self, Space};
use seqwork::formula::big_and;
use seqwork::interp::{axiom_interpolant, craig_interpolate, partitions, verify_certificate, InterpolationProblem};
use seqwork::multiset::PartitionedSequent;
use seqwork::prover::{self, admissibility_probe, check_derivation, invert, prove_with_cut, subformula_pool, InversionClause, ProofSearchResult, Prover, StructuralRule};
use seqwork::syntax::{parse_formula, parse_sequent};
use seqwork::uniform::{checker_for, classical_uniform_sequent, ipc_exists_via_forall, ipc_uniform, verify_uniform};
use seqwork::{Calculus, Formula, Kind, Measure, SearchBudget, Sequent};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn seq(s: &str) -> Sequent {
    parse_sequent(s).unwrap()
}

fn decide(c: &Calculus, s: &Sequent) -> Option<bool> {
    Prover::new(c).decide(s, SearchBudget::UNLIMITED)
}

/// Keeps the first few failure descriptions.
#[derive(Default)]
struct Failures {
    count: usize,
    shown: Vec<String>,
}

impl Failures {
    fn add(&mut self, what: impl FnOnce() -> String) {
        self.count += 1;
        if self.shown.len() < 5 {
            self.shown.push(what());
        }
    }
    fn merge(&mut self, o: Failures) {
        self.count += o.count;
        for s in o.shown {
            if self.shown.len() < 5 {
                self.shown.push(s);
            }
        }
    }
    fn tail(&self) -> String {
        if self.shown.is_empty() {
            String::new()
        } else {
            format!("; e.g. {}", self.shown.join(" | "))
        }
    }
}

// ------------------------------------------------------------------ 1

/// Independent truth-table evaluation.
fn eval(x: &Formula, v: u32, atoms: &[&str]) -> bool {
    match x.kind() {
        Kind::Atom(a) => v >> atoms.iter().position(|b| **b == **a).unwrap() & 1 == 1,
        Kind::Top => true,
        Kind::Bot => false,
        Kind::And(a, b) => eval(a, v, atoms) && eval(b, v, atoms),
        Kind::Or(a, b) => eval(a, v, atoms) || eval(b, v, atoms),
        Kind::Imp(a, b) => !eval(a, v, atoms) || eval(b, v, atoms),
        Kind::Box(_) | Kind::Circle(_) => unreachable!("modal formula in the classical corpus"),
    }
}

fn classically_valid(s: &Sequent, atoms: &[&str]) -> bool {
    (0..1u32 << atoms.len()).all(|v| !s.ant.iter().all(|a| eval(a, v, atoms)) || s.suc.iter().any(|b| eval(b, v, atoms)))
}

fn classical_oracle() -> Outcome {
    let atoms = ["p", "q", "r"];
    let space = Space::atoms(3);
    let c = prover::builtin("G3cp");
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let results: Vec<(u64, u64, Failures)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let space = &space;
                scope.spawn(move || {
                    let (mut i, mut n, mut certified) = (0u64, 0u64, 0u64);
                    let mut bad = Failures::default();
                    corpus::for_each_sequent(space, 12, false, |s| {
                        i += 1;
                        if (i - 1) % threads as u64 != k as u64 {
                            return;
                        }
                        n += 1;
                        let truth = classically_valid(&s, &atoms);
                        let got = decide(c, &s);
                        if got != Some(truth) {
                            bad.add(|| format!("{s}: prover {got:?}, truth table {truth}"));
                        }
                        // every 997th sequent also goes through the certifying search
                        if i % 997 == 0 {
                            certified += 1;
                            if let ProofSearchResult::Provable(d) = prover::prove(c, &s, SearchBudget::UNLIMITED) {
                                if check_derivation(c, &d).is_err() || !truth {
                                    bad.add(|| format!("{s}: derivation rejected"));
                                }
                            } else if truth {
                                bad.add(|| format!("{s}: certifying search failed"));
                            }
                        }
                    });
                    (n, certified, bad)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let (mut n, mut certified, mut bad) = (0, 0, Failures::default());
    for (a, b, c) in results {
        n += a;
        certified += b;
        bad.merge(c);
    }
    outcome(bad.count == 0, format!("{n} sequents ({threads} threads, {certified} derivations checked), {} disagreements{}", bad.count, bad.tail()))
}

// ------------------------------------------------------------------ 2

fn calculus_equivalence() -> Outcome {
    let fs = corpus::formulas(&Space::atoms(2), 10);
    let (g3, g1, g4) = (prover::builtin("G3ip"), prover::builtin("G1ip"), prover::builtin("G4ip"));
    let (mut core, mut heuristic, mut provable) = (Failures::default(), Failures::default(), 0);
    let mut p3 = Prover::new(g3);
    let mut p1 = Prover::new(g1);
    let mut p4 = Prover::new(g4);
    for x in &fs {
        let s = Sequent::goal(x.clone());
        let a = p4.decide(&s, SearchBudget::UNLIMITED);
        let b = p3.decide(&s, SearchBudget::UNLIMITED);
        let c = p1.prove(&s, SearchBudget::UNLIMITED).is_provable();
        if a == Some(true) {
            provable += 1;
        }
        if a.is_none() || a != b {
            core.add(|| format!("{x}: G4ip {a:?}, G3ip {b:?}"));
        }
        if Some(c) != a {
            heuristic.add(|| format!("{x}: G4ip {a:?}, G1ip {c}"));
        }
    }
    outcome(
        core.count == 0,
        format!("{} formulas, {provable} provable; G3ip/G4ip disagreements {}, G1ip disagreements {}{}{}", fs.len(), core.count, heuristic.count, core.tail(), heuristic.tail()),
    )
}

// ------------------------------------------------------------------ 3

fn named_sequents() -> Outcome {
    let provable = |c: &str, s: &str| -> Option<bool> {
        let calc = prover::builtin(c);
        match prover::prove(calc, &seq(s), SearchBudget::UNLIMITED) {
            ProofSearchResult::Provable(d) => Some(check_derivation(calc, &d).is_ok()),
            ProofSearchResult::Unprovable { exhaustive: true } => Some(false),
            _ => None,
        }
    };
    let lem = "=> p | ~p";
    let peirce = "=> ((p -> q) -> p) -> p";
    let kp = "=> (~p -> q | r) -> (~p -> q) | (~p -> r)";
    let table = [
        ("G3cp", lem, true),
        ("G3cp", peirce, true),
        ("G3ip", lem, false),
        ("G3ip", peirce, false),
        ("G4ip", lem, false),
        ("G4ip", peirce, false),
        ("G4ip", kp, false),
        ("G4iKD[]", "=> ~[]false", true),
        ("G4iK[]", "=> ~[]false", false),
        ("G4LL", "=> p -> O p", true),
        ("G4LL", "=> O O p -> O p", true),
        ("G4LL", "=> O p & O q -> O (p & q)", true),
    ];
    let mut bad = Failures::default();
    for (c, s, want) in table {
        let got = provable(c, s);
        if got != Some(want) {
            bad.add(|| format!("{c} {s}: got {got:?}, want {want}"));
        }
    }
    outcome(bad.count == 0, format!("{} cases, {} wrong{}", table.len(), bad.count, bad.tail()))
}

// ------------------------------------------------------------------ 4

fn g3cp_provable_corpus() -> Vec<Sequent> {
    let c = prover::builtin("G3cp");
    let mut p = Prover::new(c);
    let mut out = Vec::new();
    corpus::for_each_sequent(&Space::atoms(2), 10, false, |s| {
        if p.decide(&s, SearchBudget::UNLIMITED) == Some(true) {
            out.push(s);
        }
    });
    out
}

fn depth_preserving() -> Outcome {
    let c = prover::builtin("G3cp");
    let corpus = g3cp_provable_corpus();
    let extra: Vec<Formula> = ["p", "q", "false", "p & q", "p | q", "p -> q"].iter().map(|s| f(s)).collect();
    let mut parts = Vec::new();
    let mut pass = true;
    for rule in [StructuralRule::LW, StructuralRule::RW, StructuralRule::LC, StructuralRule::RC] {
        let r = admissibility_probe(c, rule, &corpus, &extra);
        pass &= r.holds() && r.checked > 0;
        parts.push(format!("{rule:?} {} checked, {} violations{}", r.checked, r.counterexamples.len(), r.counterexamples.first().map(|e| format!(" ({e})")).unwrap_or_default()));
    }
    outcome(pass, format!("{} provable sequents; {}", corpus.len(), parts.join("; ")))
}

// ------------------------------------------------------------------ 5

fn cut_admissibility() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["G3cp", "G3ip"] {
        let c = prover::builtin(name);
        let single = c.mode == seqwork::Mode::Single;
        let mut picked = Vec::new();
        for s in corpus::random_sequents(&Space::atoms(2), 0xc07, 20_000, 8, single) {
            if picked.len() == 200 {
                break;
            }
            if prove_with_cut(c, &s, &subformula_pool(&s), SearchBudget::UNLIMITED).is_provable() {
                picked.push(s);
            }
        }
        let r = admissibility_probe(c, StructuralRule::Cut, &picked, &[]);
        pass &= picked.len() == 200 && r.checked == 200 && r.holds();
        parts.push(format!("{name}: {} cut-provable, {} without a cut-free proof", r.checked, r.counterexamples.len()));
    }
    outcome(pass, parts.join("; "))
}

// ------------------------------------------------------------------ 6

fn inversion() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["G3cp", "G3ip"] {
        let c = prover::builtin(name);
        let single = c.mode == seqwork::Mode::Single;
        let mut p = Prover::new(c);
        let (mut conclusions, mut checks) = (0usize, 0usize);
        let mut bad = Failures::default();
        corpus::for_each_sequent(&Space::atoms(2), 10, single, |s| {
            let n = match p.prove(&s, SearchBudget::UNLIMITED) {
                ProofSearchResult::Provable(d) => d.depth() as u32,
                _ => return,
            };
            conclusions += 1;
            for clause in InversionClause::ALL {
                let side = if matches!(clause, InversionClause::LAnd | InversionClause::LOr | InversionClause::LImp) { &s.ant } else { &s.suc };
                for principal in side.distinct() {
                    let Ok(premises) = invert(c, &s, clause, &principal) else { continue };
                    for q in premises {
                        checks += 1;
                        if !p.prove(&q, SearchBudget::depth(n)).is_provable() {
                            bad.add(|| format!("{clause:?} on {s} (depth {n}) -> {q}"));
                        }
                    }
                }
            }
        });
        pass &= bad.count == 0 && checks > 0;
        parts.push(format!("{name}: {conclusions} provable, {checks} premises, {} violations{}", bad.count, bad.tail()));
    }
    outcome(pass, parts.join("; "))
}

// ------------------------------------------------------------------ 7

/// Expected interpolants at the axioms: `Lfalse` gives true when false is in the
/// second part and false otherwise; `At` gives true when the atom is in the
/// second part and the atom itself when it is in the first.
fn axiom_table(part: &PartitionedSequent) -> Vec<Formula> {
    let PartitionedSequent::SplitAnt { g, pi, delta } = part else { unreachable!() };
    let mut out = Vec::new();
    if pi.contains(&Formula::bot()) {
        out.push(Formula::top());
    } else if g.contains(&Formula::bot()) {
        out.push(Formula::bot());
    }
    for x in delta.iter().filter(|x| x.is_atom()) {
        if pi.contains(x) {
            out.push(Formula::top());
        } else if g.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

fn interpolation() -> Outcome {
    let c = prover::builtin("G4ip");
    let (mut provable, mut parts) = (0usize, 0usize);
    let mut bad = Failures::default();
    corpus::for_each_sequent(&Space::atoms(2), 10, true, |s| {
        let ProofSearchResult::Provable(d) = prover::prove(c, &s, SearchBudget::UNLIMITED) else { return };
        provable += 1;
        for part in partitions(&s) {
            parts += 1;
            let prob = InterpolationProblem { calculus: c.name.clone(), derivation: d.clone(), partition: part.clone() };
            match craig_interpolate(c, &prob) {
                Ok(cert) => {
                    if let Err(e) = verify_certificate(c, &cert, &part) {
                        bad.add(|| format!("{part}: {e:?}"));
                    }
                }
                Err(e) => bad.add(|| format!("{part}: {e}")),
            }
        }
    });
    // axiom table, including false, on every partition of every axiom instance
    let (mut exact, mut ambiguous) = (0usize, 0usize);
    corpus::for_each_sequent(&Space::atoms(2).with_bottom(), 7, true, |s| {
        for part in partitions(&s) {
            let want = axiom_table(&part);
            if want.is_empty() {
                continue;
            }
            let got = axiom_interpolant(c, &part);
            let distinct: BTreeSet<&Formula> = want.iter().collect();
            let ok = match &got {
                Ok(a) if distinct.len() == 1 => {
                    exact += 1;
                    *a == want[0]
                }
                Ok(a) => {
                    ambiguous += 1;
                    distinct.contains(a)
                }
                Err(_) => false,
            };
            if !ok {
                bad.add(|| format!("axiom {part}: got {got:?}, table {want:?}"));
            }
        }
    });
    outcome(
        bad.count == 0,
        format!("{provable} provable sequents, {parts} partitions; axiom table {exact} exact + {ambiguous} with several instances; {} failures{}", bad.count, bad.tail()),
    )
}

// ------------------------------------------------------------------ 8

fn uniform_interpolation() -> Outcome {
    let mut bad = Failures::default();
    let cpc = checker_for(true);
    let classical = |a: &Formula, b: &Formula| {
        let e = Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()));
        prover::decide(prover::Logic::Cpc, &e)
    };
    for (s, all, ex) in [("p => q", "q", "~q"), ("p => p", "true", "false")] {
        let u = classical_uniform_sequent(&seq(s), "p").unwrap();
        if !classical(&u.forall_part, &f(all)) || !classical(&u.exists_part, &f(ex)) {
            bad.add(|| format!("classical {s}: {} / {}", u.forall_part, u.exists_part));
        }
        if !verify_uniform(cpc, &u, 6).passes() {
            bad.add(|| format!("classical {s}: verification failed"));
        }
    }
    let ipc = checker_for(false);
    let (mut n, mut checks) = (0usize, 0usize);
    let ipc_equiv = |a: &Formula, b: &Formula| prover::decide(prover::Logic::Ipc, &Formula::imp(a.clone(), b.clone())) && prover::decide(prover::Logic::Ipc, &Formula::imp(b.clone(), a.clone()));
    corpus::for_each_sequent(&Space::atoms(2), 8, true, |s| {
        n += 1;
        let u = ipc_uniform(&s, "p").unwrap();
        let r = verify_uniform(ipc, &u, 8);
        checks += r.checked;
        if !r.passes() {
            bad.add(|| format!("{s}: {:?}", r.violations.first()));
        }
        let body = big_and(s.ant.iter().cloned());
        let via = ipc_exists_via_forall(&body, "p").unwrap();
        if !ipc_equiv(&u.exists_part, &via) {
            bad.add(|| format!("{s}: exists {} but via forall {via}", u.exists_part));
        }
    });
    outcome(bad.count == 0, format!("classical table ok; {n} sequents, {checks} checks; {} failures{}", bad.count, bad.tail()))
}

// ------------------------------------------------------------------ 9

fn classification_and_termination() -> Outcome {
    use Classification::*;
    let mut bad = Failures::default();
    let class = |c: &str, r: &str| classify_rule(prover::builtin(c).schema(r).unwrap(), prover::builtin(c).mode);
    // conjunction, disjunction and right implication rules are semi-analytic
    for c in ["G3ip", "G4ip"] {
        for (r, want) in [("L&", LeftSemiAnalytic), ("L|", LeftSemiAnalytic), ("R&", RightSemiAnalytic), ("R|0", RightSemiAnalytic), ("R|1", RightSemiAnalytic), ("R->", RightSemiAnalytic)] {
            if class(c, r) != want {
                bad.add(|| format!("{c} {r}: {}", class(c, r)));
            }
        }
        for a in &prover::builtin(c).axioms {
            if !is_focused_axiom(&a.conclusion, prover::builtin(c).mode) {
                bad.add(|| format!("{c} axiom {} not focused", a.name));
            }
        }
    }
    // the context-sharing ones
    for (c, r) in [("G3ip", "L->"), ("G4ip", "L->->")] {
        if class(c, r) != LeftSemiAnalyticContextSharing {
            bad.add(|| format!("{c} {r}: {}", class(c, r)));
        }
    }
    if class("G4ip", "Lp->").is_semi_analytic() {
        bad.add(|| "G4ip Lp-> classified semi-analytic".into());
    }
    for r in ["L&->", "L|->"] {
        if !class("G4ip", r).is_semi_analytic() {
            bad.add(|| format!("G4ip {r}: {}", class("G4ip", r)));
        }
    }
    let mut term = Vec::new();
    for c in ["G4ip", "G4LL", "G3cp"] {
        let calc = prover::builtin(c);
        let m = calc.termination_measure.unwrap_or(Measure::Weight);
        let r = check_terminating(calc, m);
        if !r.passes() {
            bad.add(|| format!("{c} under {m:?}: {:?}", r.well_ordered));
        }
        term.push(format!("{c} {m:?} ok"));
    }
    for m in [Measure::Degree, Measure::Weight] {
        match check_terminating(prover::builtin("G3ip"), m).well_ordered {
            WellOrdered::Fail { rule, instance, .. } => term.push(format!("G3ip {m:?} fails at {rule}: {instance}")),
            WellOrdered::Pass => bad.add(|| format!("G3ip passed under {m:?}")),
        }
    }
    outcome(bad.count == 0, format!("{}; {} failures{}", term.join("; "), bad.count, bad.tail()))
}

// ------------------------------------------------------------------ 10

fn identity_hj(a: &Formula) -> HilbertProof {
    let imp = Formula::imp;
    let mut p = HilbertProof::new(HilbertSystem::HJ, vec![]);
    let aa = imp(a.clone(), a.clone());
    p.axiom(Axiom::Ax(1), imp(a.clone(), imp(aa.clone(), a.clone())));
    p.axiom(Axiom::Ax(2), imp(imp(a.clone(), imp(aa.clone(), a.clone())), imp(imp(a.clone(), aa.clone()), aa.clone())));
    p.mp(1, 2);
    p.axiom(Axiom::Ax(1), imp(a.clone(), aa.clone()));
    p.mp(4, 3);
    p
}

fn classic_systems() -> Outcome {
    let mut bad = Failures::default();
    for a in ["p", "p -> q", "p & ~q"] {
        let pr = identity_hj(&f(a));
        if check_hilbert(HilbertSystem::HJ, &pr).is_err() || pr.conclusion() != Some(&f(&format!("({a}) -> ({a})"))) {
            bad.add(|| format!("identity proof for {a}"));
        }
    }
    let space = Space::atoms(3);
    for seed in 0..50 {
        let p = random_hilbert_proof(&space, &mut corpus::rng(seed), 12);
        let k = p.assumptions.len();
        match deduction_theorem(&p, k) {
            Ok(q) if check_hilbert(HilbertSystem::HJ, &q).is_ok() && q.conclusion() == Some(&Formula::imp(p.assumptions[k - 1].clone(), p.conclusion().unwrap().clone())) => {}
            other => bad.add(|| format!("deduction on seed {seed}: {:?}", other.err())),
        }
    }
    let em = excluded_middle(&f("p"));
    if check_nd(NdSystem::ND, &em).is_err() || check_nd(NdSystem::NDi, &em).is_ok() {
        bad.add(|| "excluded middle: ND/NDi verdicts".into());
    }
    let nd_space = Space::atoms(2).with_bottom();
    let proofs = normal_proof_corpus(&nd_space, 8, 12);
    for d in &proofs {
        if last_rule_kind(d) != LastRule::Introduction || !find_detours(d).is_empty() {
            bad.add(|| format!("normal proof of {} ends in {:?}", d.conclusion(), last_rule_kind(d)));
        }
    }
    let detours = detour_corpus(&proofs, 0x5eed, 500);
    let mut reductions = 0;
    for d in &detours {
        match normalize(d) {
            Ok(n) if n.flags.is_empty() && find_detours(&n.deduction).is_empty() && check_nd(NdSystem::NDi, &n.deduction).is_ok() => reductions += n.reductions,
            other => bad.add(|| format!("normalizing {}: {:?}", d.conclusion(), other.map(|n| n.flags))),
        }
    }
    if let Some(d) = NormalSearch::new(12).prove(&Formula::bot()) {
        bad.add(|| format!("closed normal proof of false of height {}", d.height()));
    }
    outcome(
        bad.count == 0,
        format!("HJ identity ok; 50 deduction instances; {} normal proofs; {} detour deductions, {reductions} reductions; no normal proof of false; {} failures{}", proofs.len(), detours.len(), bad.count, bad.tail()),
    )
}

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical oracle", classical_oracle),
        ("calculus equivalence", calculus_equivalence),
        ("named sequents", named_sequents),
        ("depth-preserving weakening and contraction", depth_preserving),
        ("cut admissibility probe", cut_admissibility),
        ("inversion", inversion),
        ("interpolation", interpolation),
        ("uniform interpolation", uniform_interpolation),
        ("classification and termination", classification_and_termination),
        ("Hilbert and natural deduction", classic_systems),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !wanted.is_empty() && !wanted.contains(&(i + 1)) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {name}: {} ({:.1}s)", i + 1, o.detail, t.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
