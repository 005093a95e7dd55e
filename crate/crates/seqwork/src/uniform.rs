//! Uniform interpolants (propositional quantifiers) for CPC and IPC, and a
//! property-based checker for the uniform sequent-interpolation clauses.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{Calculus, Mode};
use crate::corpus::{self, Space};
use crate::formula::{fresh_atom, Formula, Kind};
use crate::multiset::{FMultiset, Sequent};
use crate::prover::{self, builtin, Prover, SearchBudget};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UniformError {
    #[error("formula contains a modal operator: {0}")]
    NonPropositional(String),
    #[error("sequent has more than one succedent formula: {0}")]
    NotSingleConclusion(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    Formula(Formula),
    Sequent(Sequent),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformInterpolant {
    pub target: Target,
    pub atom: String,
    pub forall_part: Formula,
    pub exists_part: Formula,
}

// Constructors with sound IPC simplifications: units, idempotence, and
// replacing a hypothesis (or conjunct) by `true` inside its scope.

fn and(a: Formula, b: Formula) -> Formula {
    if a.is_bot() || b.is_top() || a == b {
        return a;
    }
    if b.is_bot() || a.is_top() {
        return b;
    }
    let (small, big) = if a.weight() <= b.weight() { (a, b) } else { (b, a) };
    let big = assume(&big, &conjuncts(&small));
    if big.is_top() || big == small {
        return small;
    }
    if big.is_bot() {
        return big;
    }
    Formula::and(small, big)
}

fn or(a: Formula, b: Formula) -> Formula {
    if a.is_top() || b.is_bot() || a == b {
        return a;
    }
    if b.is_top() || a.is_bot() {
        return b;
    }
    // absorption
    if conjuncts(&b).contains(&a) {
        return a;
    }
    if conjuncts(&a).contains(&b) {
        return b;
    }
    Formula::or(a, b)
}

fn imp(a: Formula, b: Formula) -> Formula {
    if a.is_top() {
        return b;
    }
    if a.is_bot() || b.is_top() || a == b {
        return Formula::top();
    }
    let b = assume(&b, &conjuncts(&a));
    if b.is_top() {
        return b;
    }
    Formula::imp(a, b)
}

fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f.kind() {
        Kind::And(x, y) => {
            let mut v = conjuncts(x);
            v.extend(conjuncts(y));
            v
        }
        _ => vec![f.clone()],
    }
}

/// `f` with every occurrence of a hypothesis replaced by `true`.
fn assume(f: &Formula, hyps: &[Formula]) -> Formula {
    if hyps.contains(f) {
        return Formula::top();
    }
    if !f.is_compound() || hyps.iter().all(|h| h.weight() > f.weight()) {
        return f.clone();
    }
    match f.kind() {
        Kind::And(x, y) => and(assume(x, hyps), assume(y, hyps)),
        Kind::Or(x, y) => or(assume(x, hyps), assume(y, hyps)),
        Kind::Imp(x, y) => imp(assume(x, hyps), assume(y, hyps)),
        _ => f.clone(),
    }
}

fn conj(v: Vec<Formula>) -> Formula {
    let set: BTreeSet<Formula> = v.into_iter().collect();
    set.into_iter().fold(Formula::top(), and)
}

fn disj(v: Vec<Formula>) -> Formula {
    let set: BTreeSet<Formula> = v.into_iter().collect();
    set.into_iter().fold(Formula::bot(), or)
}

fn propositional(s: &Sequent) -> Result<(), UniformError> {
    match s.all_formulas().iter().find(|f| !f.is_modal_free()) {
        Some(f) => Err(UniformError::NonPropositional(f.to_string())),
        None => Ok(()),
    }
}

/// `∃p f = f[⊤/p] | f[⊥/p]`, `∀p f = f[⊤/p] & f[⊥/p]`.
pub fn classical_uniform(f: &Formula, p: &str) -> Result<UniformInterpolant, UniformError> {
    if !f.is_modal_free() {
        return Err(UniformError::NonPropositional(f.to_string()));
    }
    let (t, b) = (f.replace_atom(p, &Formula::top()), f.replace_atom(p, &Formula::bot()));
    Ok(UniformInterpolant { target: Target::Formula(f.clone()), atom: p.into(), forall_part: and(t.clone(), b.clone()), exists_part: or(t, b) })
}

/// Sequent version: `∀pS = ∀p I(S)` and `∃pS = ∃p(⋀S^a & ~⋁S^s)`.
pub fn classical_uniform_sequent(s: &Sequent, p: &str) -> Result<UniformInterpolant, UniformError> {
    propositional(s)?;
    let all = classical_uniform(&crate::multiset::interpret(s), p)?;
    let ex = classical_uniform(&exists_body(s, Mode::Multi), p)?;
    Ok(UniformInterpolant { target: Target::Sequent(s.clone()), atom: p.into(), forall_part: all.forall_part, exists_part: ex.exists_part })
}

/// The formula whose `∃p` the existential part stands for.
fn exists_body(s: &Sequent, mode: Mode) -> Formula {
    let ant = crate::formula::big_and(s.ant.iter().cloned());
    match mode {
        Mode::Single => ant,
        Mode::Multi => Formula::and(ant, Formula::not(crate::formula::big_or(s.suc.iter().cloned()))),
    }
}

/// The E/A mutual recursion over the G4ip decomposition of `Δ ; φ`, with
/// `E(Δ)` standing for `∃p⋀Δ` and `A(Δ; φ)` satisfying `Δ, A ⊢ φ` and
/// `Σ, Δ ⊢ φ ⇒ Σ, E(Δ) ⊢ A` for p-free `Σ`.
///
/// p-free formulas of `Δ` are moved out (`E = χ & E(Δ')`, `A = χ -> A(Δ')`),
/// a p-free goal is its own `A`, and when an invertible rule applies only
/// its clause is used. Otherwise the clauses of every applicable rule are
/// combined: conjunction for `E`, disjunction for `A`.
struct Recursion<'a> {
    p: &'a str,
    e_memo: FxHashMap<FMultiset, Formula>,
    a_memo: FxHashMap<(FMultiset, Formula), Formula>,
}

/// Result of one invertible left step.
enum Step {
    One(FMultiset),
    Two(FMultiset, FMultiset),
}

impl Recursion<'_> {
    fn split_free(&self, d: &FMultiset) -> (Vec<Formula>, FMultiset) {
        let (free, rest): (Vec<Formula>, Vec<Formula>) = d.iter().cloned().partition(|f| !f.contains_atom(self.p));
        (free, FMultiset::from_vec(rest))
    }

    /// First invertible decomposition of a formula of `d` (all contain p).
    fn invertible(&self, d: &FMultiset) -> Option<Step> {
        for f in d.distinct() {
            let rest = d.without(&f);
            let step = match f.kind() {
                Kind::And(a, b) => Step::One(rest.with(a.clone()).with(b.clone())),
                Kind::Or(a, b) => Step::Two(rest.clone().with(a.clone()), rest.with(b.clone())),
                Kind::Imp(a, b) => match a.kind() {
                    Kind::Top => Step::One(rest.with(b.clone())),
                    Kind::Bot => Step::One(rest),
                    Kind::Atom(_) if rest.contains(a) => Step::One(rest.with(b.clone())),
                    Kind::And(x, y) => Step::One(rest.with(Formula::imp(x.clone(), Formula::imp(y.clone(), b.clone())))),
                    Kind::Or(x, y) => Step::One(rest.with(Formula::imp(x.clone(), b.clone())).with(Formula::imp(y.clone(), b.clone()))),
                    _ => continue,
                },
                _ => continue,
            };
            return Some(step);
        }
        None
    }

    fn e(&mut self, d: &FMultiset) -> Formula {
        if let Some(f) = self.e_memo.get(d) {
            return f.clone();
        }
        let (free, rest) = self.split_free(d);
        let r = if !free.is_empty() {
            and(conj(free), self.e(&rest))
        } else {
            match self.invertible(d) {
                Some(Step::One(x)) => self.e(&x),
                Some(Step::Two(x, y)) => {
                    let l = self.e(&x);
                    or(l, self.e(&y))
                }
                None => {
                    let mut cl = Vec::new();
                    for f in d.distinct() {
                        let rest = d.without(&f);
                        if let Kind::Imp(a, b) = f.kind() {
                            match a.kind() {
                                Kind::Atom(_) if !self.is_p(a) => {
                                    let x = self.e(&rest.with(b.clone()));
                                    cl.push(imp(a.clone(), x));
                                }
                                Kind::Imp(x, y) => {
                                    let side = rest.clone().with(Formula::imp(y.clone(), b.clone()));
                                    let guard = imp(self.e(&side), self.a(&side, &Formula::imp(x.clone(), y.clone())));
                                    let tail = self.e(&rest.with(b.clone()));
                                    cl.push(imp(guard, tail));
                                }
                                _ => {}
                            }
                        }
                    }
                    conj(cl)
                }
            }
        };
        self.e_memo.insert(d.clone(), r.clone());
        r
    }

    fn a(&mut self, d: &FMultiset, goal: &Formula) -> Formula {
        if !goal.contains_atom(self.p) {
            return goal.clone();
        }
        if d.contains(goal) {
            return Formula::top();
        }
        let key = (d.clone(), goal.clone());
        if let Some(f) = self.a_memo.get(&key) {
            return f.clone();
        }
        let (free, rest) = self.split_free(d);
        let r = if !free.is_empty() {
            imp(conj(free), self.a(&rest, goal))
        } else if let Some(step) = self.invertible(d) {
            match step {
                Step::One(x) => self.a(&x, goal),
                Step::Two(x, y) => {
                    let l = imp(self.e(&x), self.a(&x, goal));
                    let r = imp(self.e(&y), self.a(&y, goal));
                    and(l, r)
                }
            }
        } else {
            match goal.kind() {
                Kind::And(x, y) => {
                    let l = self.a(d, x);
                    and(l, self.a(d, y))
                }
                Kind::Imp(x, y) => {
                    let d2 = d.clone().with(x.clone());
                    imp(self.e(&d2), self.a(&d2, y))
                }
                _ => {
                    let mut cl = Vec::new();
                    for f in d.distinct() {
                        let rest = d.without(&f);
                        if let Kind::Imp(a, b) = f.kind() {
                            match a.kind() {
                                Kind::Atom(_) if !self.is_p(a) => {
                                    let x = self.a(&rest.with(b.clone()), goal);
                                    cl.push(and(a.clone(), x));
                                }
                                Kind::Imp(x, y) => {
                                    let side = rest.clone().with(Formula::imp(y.clone(), b.clone()));
                                    let guard = imp(self.e(&side), self.a(&side, &Formula::imp(x.clone(), y.clone())));
                                    let tail = self.a(&rest.with(b.clone()), goal);
                                    cl.push(and(guard, tail));
                                }
                                _ => {}
                            }
                        }
                    }
                    if let Kind::Or(x, y) = goal.kind() {
                        let l = self.a(d, x);
                        cl.push(or(l, self.a(d, y)));
                    }
                    disj(cl)
                }
            }
        };
        self.a_memo.insert(key, r.clone());
        r
    }

    fn is_p(&self, f: &Formula) -> bool {
        f.atom_name() == Some(self.p)
    }
}

/// `∃pS = E(S^a)` and `∀pS = E(S^a) -> A(S^a; S^s)`, an empty succedent
/// read as `false`.
pub fn ipc_uniform(s: &Sequent, p: &str) -> Result<UniformInterpolant, UniformError> {
    propositional(s)?;
    if s.suc.len() > 1 {
        return Err(UniformError::NotSingleConclusion(s.to_string()));
    }
    let goal = s.suc.iter().next().cloned().unwrap_or_else(Formula::bot);
    let mut st = Recursion { p, e_memo: FxHashMap::default(), a_memo: FxHashMap::default() };
    let e = st.e(&s.ant);
    let a = st.a(&s.ant, &goal);
    Ok(UniformInterpolant { target: Target::Sequent(s.clone()), atom: p.into(), forall_part: imp(e.clone(), a), exists_part: e })
}

/// `∀p f` and `∃p f` in IPC, as `∀p(=> f)` and `∃p(f =>)`.
pub fn ipc_uniform_formula(f: &Formula, p: &str) -> Result<UniformInterpolant, UniformError> {
    let all = ipc_uniform(&Sequent::goal(f.clone()), p)?;
    let ex = ipc_uniform(&Sequent::from_vecs(vec![f.clone()], vec![]), p)?;
    Ok(UniformInterpolant { target: Target::Formula(f.clone()), atom: p.into(), forall_part: all.forall_part, exists_part: ex.exists_part })
}

/// `∀p1 ... pn f` in IPC, innermost atom last.
pub fn ipc_forall_many(f: &Formula, ps: &[String]) -> Result<Formula, UniformError> {
    let mut cur = f.clone();
    for p in ps.iter().rev() {
        cur = ipc_uniform(&Sequent::goal(cur), p)?.forall_part;
    }
    Ok(cur)
}

/// `∀q(∀p(f -> q) -> q)` with `q` the first name not in `f`.
pub fn ipc_exists_via_forall(f: &Formula, p: &str) -> Result<Formula, UniformError> {
    let mut used = f.atoms();
    used.insert(p.to_string());
    let q = Formula::atom(&fresh_atom(&used));
    let inner = ipc_uniform(&Sequent::goal(Formula::imp(f.clone(), q.clone())), p)?.forall_part;
    Ok(ipc_uniform(&Sequent::goal(Formula::imp(inner, q.clone())), q.atom_name().unwrap())?.forall_part)
}

/// All splits `(S^r, S^i)` of `s` with `p` absent from `S^r`.
pub fn p_partitions(s: &Sequent, p: &str) -> Vec<(Sequent, Sequent)> {
    fn choices(m: &FMultiset, p: &str) -> Vec<(FMultiset, FMultiset)> {
        let mut out = vec![(FMultiset::new(), m.clone())];
        for f in m.distinct() {
            if f.contains_atom(p) {
                continue;
            }
            let n = m.count(&f);
            let mut next = Vec::new();
            for (r, i) in &out {
                let (mut r, mut i) = (r.clone(), i.clone());
                next.push((r.clone(), i.clone()));
                for _ in 0..n {
                    r.insert(f.clone());
                    i.remove_one(&f);
                    next.push((r.clone(), i.clone()));
                }
            }
            out = next;
        }
        out
    }
    let mut out = Vec::new();
    for (ra, ia) in choices(&s.ant, p) {
        for (rs, is) in choices(&s.suc, p) {
            out.push((Sequent::new(ra.clone(), rs), Sequent::new(ia.clone(), is)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UniformReport {
    pub checked: usize,
    pub psi_classes: usize,
    pub violations: Vec<Violation>,
}

impl UniformReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

const BUDGET: SearchBudget = SearchBudget { max_depth: u32::MAX, max_nodes: 20_000_000 };

fn oracle(c: &Calculus) -> Prover<'_> {
    Prover::new(c).with_eager_rules(&prover::invertible_rules(c))
}

fn derivable(c: &mut Prover, s: &Sequent) -> bool {
    c.prove(s, BUDGET).is_provable()
}

fn entails(c: &mut Prover, a: &Formula, b: &Formula) -> bool {
    derivable(c, &Sequent::from_vecs(vec![a.clone()], vec![b.clone()]))
}

type PsiKey = (String, Vec<String>, u32);

/// One representative per provable-equivalence class of the formulas over
/// `atoms` and `false` up to `bound`, in canonical order.
pub fn psi_classes(c: &Calculus, atoms: &BTreeSet<String>, bound: u32) -> Vec<Formula> {
    static CACHE: OnceLock<Mutex<HashMap<PsiKey, Vec<Formula>>>> = OnceLock::new();
    let key = (c.name.clone(), atoms.iter().cloned().collect(), bound);
    if let Some(v) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
        return v.clone();
    }
    let mut space = Space::atoms(0).with_bottom();
    space.atoms = key.1.clone();
    let mut reps: Vec<Formula> = Vec::new();
    let mut o = oracle(c);
    for f in corpus::formulas(&space, bound) {
        if !reps.iter().any(|r| entails(&mut o, r, &f) && entails(&mut o, &f, r)) {
            reps.push(f);
        }
    }
    CACHE.get_or_init(Default::default).lock().unwrap().insert(key, reps.clone());
    reps
}

/// Quantifiers used for the partition clause: the built-in construction for
/// the calculus' logic, when there is one.
fn builtin_quantifiers(c: &Calculus) -> Option<fn(&Sequent, &str) -> Result<UniformInterpolant, UniformError>> {
    match c.name.as_str() {
        "G4ip" | "G3ip" | "G1ip" => Some(ipc_uniform),
        "G3cp" | "G1cp" => Some(classical_uniform_sequent),
        _ => None,
    }
}

/// Check (∀l), (∃r), the partition clause (single-conclusion variant in
/// single mode), and the two quantifier characterizations over every p-free
/// ψ up to `psi_bound` (atoms of the target and `false`).
pub fn verify_uniform(calc: &Calculus, u: &UniformInterpolant, psi_bound: u32) -> UniformReport {
    let mut rep = UniformReport::default();
    let c = &mut oracle(calc);
    let p = u.atom.as_str();
    let (all, ex) = (&u.forall_part, &u.exists_part);
    let bad = |rep: &mut UniformReport, clause: &str, w: String| rep.violations.push(Violation { clause: clause.into(), witness: w });

    let (target_atoms, all_body, ex_body) = match &u.target {
        Target::Formula(f) => {
            rep.checked += 2;
            if !entails(c, all, f) {
                bad(&mut rep, "(∀) ∀pφ -> φ", format!("{all} => {f}"));
            }
            if !entails(c, f, ex) {
                bad(&mut rep, "(∃) φ -> ∃pφ", format!("{f} => {ex}"));
            }
            (f.atoms(), f.clone(), f.clone())
        }
        Target::Sequent(s) => {
            let left = Sequent::new(s.ant.clone().with(all.clone()), s.suc.clone());
            let right = match calc.mode {
                Mode::Single => Sequent::new(s.ant.clone(), FMultiset::from_vec(vec![ex.clone()])),
                Mode::Multi => Sequent::new(s.ant.clone(), s.suc.clone().with(ex.clone())),
            };
            rep.checked += 2;
            if !derivable(c, &left) {
                bad(&mut rep, "(∀l)", left.to_string());
            }
            if !derivable(c, &right) {
                bad(&mut rep, "(∃r)", right.to_string());
            }
            if derivable(c, s) {
                let q = builtin_quantifiers(calc);
                for (r, i) in p_partitions(s, p) {
                    let (ei, ai) = if i == *s {
                        (ex.clone(), all.clone())
                    } else if let Some(Ok(ui)) = q.map(|q| q(&i, p)) {
                        (ui.exists_part, ui.forall_part)
                    } else {
                        continue;
                    };
                    let inner = match calc.mode {
                        Mode::Single if !s.suc.is_empty() && r.suc.is_empty() => Sequent::from_vecs(vec![ei], vec![ai]),
                        Mode::Single => Sequent::from_vecs(vec![ei], vec![]),
                        Mode::Multi => Sequent::from_vecs(vec![ei], vec![ai]),
                    };
                    let goal = r.mul(&inner);
                    rep.checked += 1;
                    if !derivable(c, &goal) {
                        bad(&mut rep, "(∀∃)", format!("partition ({r}) . ({i}): {goal}"));
                    }
                }
            }
            (s.atoms(), crate::multiset::interpret(s), exists_body(s, calc.mode))
        }
    };

    for (part, name) in [(all, "∀"), (ex, "∃")] {
        rep.checked += 1;
        let extra: Vec<String> = part.atoms().into_iter().filter(|a| a == p || !target_atoms.contains(a)).collect();
        if !extra.is_empty() {
            bad(&mut rep, "language", format!("{name}-part uses {}", extra.join(", ")));
        }
    }

    let mut atoms = target_atoms;
    atoms.remove(p);
    let psis = psi_classes(calc, &atoms, psi_bound);
    rep.psi_classes = psis.len();
    for psi in &psis {
        rep.checked += 2;
        if entails(c, psi, &all_body) != entails(c, psi, all) {
            bad(&mut rep, "(∀) characterization", format!("ψ = {psi}"));
        }
        if entails(c, &ex_body, psi) != entails(c, ex, psi) {
            bad(&mut rep, "(∃) characterization", format!("ψ = {psi}"));
        }
    }
    rep
}

/// Default calculus for checking: G4ip for IPC targets, G3cp for classical.
pub fn checker_for(classical: bool) -> &'static Calculus {
    builtin(if classical { "G3cp" } else { "G4ip" })
}
