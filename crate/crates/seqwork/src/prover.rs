//! Backward proof search over any calculus, derivation checking, decision
//! procedures and empirical admissibility probes.

use std::fmt;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{instances_of, match_full_instance, Assignment, Calculus, MatchOptions, Mode, RuleInstance};
use crate::formula::{Formula, Kind};
use crate::multiset::{FMultiset, Sequent};
use crate::syntax::render_sequent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StepKind {
    Axiom,
    Rule,
}

/// Derivation tree; each node carries the conclusion, the name of the axiom
/// or rule justifying it, and the matching assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: String,
    pub kind: StepKind,
    pub assignment: Assignment,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn rule_name(&self) -> &str {
        &self.rule
    }

    /// Longest branch, counting nodes: an axiom leaf has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Node from rule name, conclusion and children; the assignment is the
    /// first one (in matching order) that fits. Nodes that do not match keep
    /// an empty assignment and are reported by [`check_derivation`].
    pub fn reconstruct(c: &Calculus, rule: &str, conclusion: Sequent, children: Vec<Derivation>) -> Derivation {
        let (kind, assignment) = match c.schema(rule) {
            Some(r) => {
                let prem: Vec<Sequent> = children.iter().map(|d| d.conclusion.clone()).collect();
                let a = match_full_instance(r, &conclusion, &prem).map(|e| Assignment::from_env(&r.vars, &e)).unwrap_or_default();
                (if r.is_axiom() { StepKind::Axiom } else { StepKind::Rule }, a)
            }
            None => (if children.is_empty() { StepKind::Axiom } else { StepKind::Rule }, Assignment::default()),
        };
        Derivation { conclusion, rule: rule.to_string(), kind, assignment, children }
    }

    /// Rule names in pre-order.
    pub fn rules_used(&self) -> Vec<&str> {
        let mut v = vec![self.rule.as_str()];
        for c in &self.children {
            v.extend(c.rules_used());
        }
        v
    }

    pub fn uses_rule(&self, name: &str) -> bool {
        self.rule == name || self.children.iter().any(|c| c.uses_rule(name))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_derivation(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_depth: u32,
    pub max_nodes: u64,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget { max_depth: u32::MAX, max_nodes: u64::MAX };

    pub fn depth(n: u32) -> SearchBudget {
        SearchBudget { max_depth: n, max_nodes: u64::MAX }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::UNLIMITED
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: u32,
    pub memo_hits: u64,
    pub loop_prunes: u64,
    pub cap_prunes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProofSearchResult {
    Provable(Derivation),
    Unprovable { exhaustive: bool },
    BudgetExceeded(SearchStats),
}

impl ProofSearchResult {
    pub fn is_provable(&self) -> bool {
        matches!(self, ProofSearchResult::Provable(_))
    }
    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            ProofSearchResult::Provable(d) => Some(d),
            _ => None,
        }
    }
}

/// How a search avoids cycling in a calculus without a termination measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LoopCheck {
    /// Terminating calculus: nothing to check.
    None,
    /// Prune a sequent that already occurred on the branch, and cap the
    /// number of contraction steps per formula on a branch.
    Multiset { contraction_cap: u32 },
    /// Prune a sequent that contains an ancestor with the same support.
    Support,
}

/// Loop check the prover uses for `c` unless told otherwise.
pub fn default_loop_check(c: &Calculus) -> LoopCheck {
    if c.termination_measure.is_some() {
        LoopCheck::None
    } else if c.schema("LC").is_some() || c.schema("RC").is_some() {
        LoopCheck::Multiset { contraction_cap: 2 }
    } else {
        LoopCheck::Support
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Failure {
    /// Pruned by a depth bound somewhere below.
    depth_cut: bool,
    /// Pruned by the contraction cap (heuristic, not a refutation).
    cap_cut: bool,
    /// Pruned by a loop check (complete, but depends on the branch).
    loop_cut: bool,
}

impl Failure {
    fn merge(&mut self, o: Failure) {
        self.depth_cut |= o.depth_cut;
        self.cap_cut |= o.cap_cut;
        self.loop_cut |= o.loop_cut;
    }
}

struct Exceeded;

/// One proof-search context. Memo tables live as long as the prover, so
/// repeated queries against the same calculus share refutations.
pub struct Prover<'c> {
    calc: &'c Calculus,
    loop_check: LoopCheck,
    /// Refuted sequents with the depth budget they were refuted under.
    memo: FxHashMap<Sequent, u32>,
    stats: SearchStats,
    budget_nodes: u64,
    cut_pool: Vec<Formula>,
    max_cuts: u32,
    history: Vec<Sequent>,
    contractions: Vec<(Formula, bool)>,
    leaf_weakening: bool,
    /// Rules applied as soon as they match, without alternatives.
    eager: Vec<String>,
    /// Set after a contraction: the next step must decompose this formula.
    focus: Option<(Formula, bool)>,
    /// Build full derivation nodes; off for yes/no queries.
    certify: bool,
}

impl<'c> Prover<'c> {
    pub fn new(calc: &'c Calculus) -> Prover<'c> {
        Prover {
            calc,
            loop_check: default_loop_check(calc),
            memo: FxHashMap::default(),
            stats: SearchStats::default(),
            budget_nodes: u64::MAX,
            cut_pool: Vec::new(),
            max_cuts: 0,
            history: Vec::new(),
            contractions: Vec::new(),
            leaf_weakening: false,
            eager: Vec::new(),
            focus: None,
            certify: true,
        }
        .with_loop_check(default_loop_check(calc))
    }

    /// With the multiset loop check, weakening is only used to close a leaf
    /// (weakenings permute upwards, so no proofs are lost).
    pub fn with_loop_check(mut self, l: LoopCheck) -> Self {
        self.loop_check = l;
        self.leaf_weakening = matches!(l, LoopCheck::Multiset { .. }) && (self.calc.schema("LW").is_some() || self.calc.schema("RW").is_some());
        if self.leaf_weakening {
            self.eager = self.calc.rules.iter().filter(|r| is_invertible_g1(self.calc.mode, &r.name)).map(|r| r.name.clone()).collect();
        }
        self
    }

    /// Apply the named rules first and commit to them. Only sound for rules
    /// that are invertible in the calculus; see [`invertible_rules`].
    pub fn with_eager_rules(mut self, names: &[&str]) -> Self {
        self.eager = names.iter().map(|n| n.to_string()).collect();
        self
    }

    /// Allow Cut on formulas from `pool`, at most `max_cuts` per branch.
    pub fn with_cut(mut self, pool: Vec<Formula>, max_cuts: u32) -> Self {
        self.cut_pool = pool;
        self.max_cuts = max_cuts;
        if !self.cut_pool.is_empty() && self.loop_check == LoopCheck::None {
            self.loop_check = LoopCheck::Support;
        }
        self
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn prove(&mut self, s: &Sequent, b: SearchBudget) -> ProofSearchResult {
        if !self.calc.admits(s) {
            return ProofSearchResult::Unprovable { exhaustive: true };
        }
        self.budget_nodes = self.stats.nodes.saturating_add(b.max_nodes);
        self.prove_once(s, b.max_depth)
    }

    /// Same search as [`Prover::prove`] without building the derivation;
    /// `None` when the node budget runs out or the search was not exhaustive.
    pub fn decide(&mut self, s: &Sequent, b: SearchBudget) -> Option<bool> {
        self.certify = false;
        let r = self.prove(s, b);
        self.certify = true;
        match r {
            ProofSearchResult::Provable(_) => Some(true),
            ProofSearchResult::Unprovable { exhaustive: true } => Some(false),
            _ => None,
        }
    }

    fn prove_once(&mut self, s: &Sequent, depth: u32) -> ProofSearchResult {
        self.history.clear();
        self.contractions.clear();
        let cuts = self.max_cuts;
        match self.search(s, depth, cuts) {
            Err(Exceeded) => ProofSearchResult::BudgetExceeded(self.stats),
            Ok(Ok(d)) => ProofSearchResult::Provable(d),
            Ok(Err(f)) => ProofSearchResult::Unprovable { exhaustive: !f.depth_cut && !f.cap_cut },
        }
    }

    #[allow(clippy::type_complexity)]
    fn search(&mut self, s: &Sequent, depth: u32, cuts: u32) -> Result<Result<Derivation, Failure>, Exceeded> {
        let focus = self.focus.take();
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget_nodes {
            return Err(Exceeded);
        }
        let level = self.history.len() as u32 + 1;
        self.stats.max_depth = self.stats.max_depth.max(level);
        if depth == 0 {
            return Ok(Err(Failure { depth_cut: true, ..Failure::default() }));
        }
        if let Some(&d) = self.memo.get(s) {
            if d >= depth {
                self.stats.memo_hits += 1;
                return Ok(Err(Failure { depth_cut: d != u32::MAX, ..Failure::default() }));
            }
        }
        for r in &self.calc.axioms {
            if !instances_of(r, s, MatchOptions::SEARCH).is_empty() {
                return Ok(Ok(self.node(&r.name, s, Vec::new())));
            }
        }
        if self.leaf_weakening {
            if let Some(d) = weaken_to_axiom(self.calc, s) {
                return Ok(Ok(d));
            }
        }
        match self.loop_check {
            LoopCheck::Multiset { .. } if self.history.contains(s) => {
                self.stats.loop_prunes += 1;
                return Ok(Err(Failure { loop_cut: true, ..Failure::default() }));
            }
            LoopCheck::Support if self.history.iter().any(|a| a.ant.same_support(&s.ant) && a.suc.same_support(&s.suc) && s.ant.contains_all(&a.ant) && s.suc.contains_all(&a.suc)) => {
                self.stats.loop_prunes += 1;
                return Ok(Err(Failure { loop_cut: true, ..Failure::default() }));
            }
            _ => {}
        }

        self.history.push(s.clone());
        let mut fail = Failure::default();
        let result = self.expand(s, depth, cuts, focus.as_ref(), &mut fail);
        self.history.pop();
        match result {
            Err(e) => Err(e),
            Ok(Some(d)) => Ok(Ok(d)),
            Ok(None) => {
                if !fail.cap_cut && !fail.loop_cut && focus.is_none() {
                    let d = if fail.depth_cut { depth } else { u32::MAX };
                    let e = self.memo.entry(s.clone()).or_insert(0);
                    *e = (*e).max(d);
                }
                Ok(Err(fail))
            }
        }
    }

    fn expand(&mut self, s: &Sequent, depth: u32, cuts: u32, focus: Option<&(Formula, bool)>, fail: &mut Failure) -> Result<Option<Derivation>, Exceeded> {
        if cuts > 0 && focus.is_none() {
            let pool = self.cut_pool.clone();
            for a in pool {
                if s.ant.contains(&a) {
                    continue;
                }
                let (left, right) = match self.calc.mode {
                    Mode::Multi => (Sequent::new(s.ant.clone(), s.suc.clone().with(a.clone())), Sequent::new(s.ant.clone().with(a.clone()), s.suc.clone())),
                    Mode::Single => (Sequent::new(s.ant.clone(), FMultiset::from_vec(vec![a.clone()])), Sequent::new(s.ant.clone().with(a.clone()), s.suc.clone())),
                };
                if let Some(children) = self.premises(&[left, right], depth, cuts - 1, fail)? {
                    return Ok(Some(self.node("Cut", s, children)));
                }
            }
        }
        let eager = std::mem::take(&mut self.eager);
        let res = self.expand_rules(s, depth, cuts, focus, fail, &eager);
        self.eager = eager;
        res
    }

    fn expand_rules(&mut self, s: &Sequent, depth: u32, cuts: u32, focus: Option<&(Formula, bool)>, fail: &mut Failure, eager: &[String]) -> Result<Option<Derivation>, Exceeded> {
        let calc = self.calc;
        let is_eager = |name: &str| eager.iter().any(|e| e == name);
        let mut order: Vec<&crate::calculus::pattern::RuleSchema> = calc.rules.iter().filter(|r| !(self.leaf_weakening && matches!(r.name.as_str(), "LW" | "RW"))).collect();
        if !eager.is_empty() {
            // eager rules, then other logical rules, then contraction
            order.sort_by_key(|r| if is_eager(&r.name) { 0 } else if matches!(r.name.as_str(), "LC" | "RC") { 2 } else { 1 });
        }
        let invertible_first = !eager.is_empty() && focus.is_none();
        for r in order {
            let contraction = matches!(r.name.as_str(), "LC" | "RC");
            let invertible = invertible_first && is_eager(&r.name);
            if invertible_first && !invertible && self.has_invertible(s, eager) {
                break;
            }
            for inst in instances_of(r, s, MatchOptions::SEARCH) {
                if !inst.premises.iter().all(|p| calc.admits(p)) {
                    continue;
                }
                if let Some((f, left)) = focus {
                    let (pa, ps) = inst.principal(r);
                    if !(if *left { pa } else { ps }).contains(f) {
                        continue;
                    }
                }
                let mut pushed = false;
                if contraction {
                    if let LoopCheck::Multiset { contraction_cap } = self.loop_check {
                        let (f, left) = contracted_formula(&inst);
                        if self.leaf_weakening && calc.mode == Mode::Single && !matches!(f.kind(), Kind::Imp(..)) {
                            // only implications are used twice in single-conclusion proofs
                            continue;
                        }
                        let used = self.contractions.iter().filter(|(g, l)| *g == f && *l == left).count() as u32;
                        if used >= contraction_cap {
                            self.stats.cap_prunes += 1;
                            fail.cap_cut = true;
                            continue;
                        }
                        self.contractions.push((f.clone(), left));
                        pushed = true;
                        if self.leaf_weakening {
                            // contractions permute up to where the formula is principal
                            self.focus = Some((f, left));
                        }
                    }
                }
                let res = self.premises(&inst.premises, depth, cuts, fail);
                if pushed {
                    self.contractions.pop();
                }
                if let Some(children) = res? {
                    return Ok(Some(self.node(&r.name, s, children)));
                }
                if invertible {
                    return Ok(None);
                }
            }
        }
        Ok(None)
    }

    fn has_invertible(&self, s: &Sequent, eager: &[String]) -> bool {
        self.calc.rules.iter().any(|r| eager.contains(&r.name) && instances_of(r, s, MatchOptions::SEARCH).iter().any(|i| i.premises.iter().all(|p| self.calc.admits(p))))
    }

    fn premises(&mut self, ps: &[Sequent], depth: u32, cuts: u32, fail: &mut Failure) -> Result<Option<Vec<Derivation>>, Exceeded> {
        let mut children = Vec::with_capacity(ps.len());
        for p in ps {
            match self.search(p, depth - 1, cuts)? {
                Ok(d) => children.push(d),
                Err(f) => {
                    fail.merge(f);
                    return Ok(None);
                }
            }
        }
        Ok(Some(children))
    }

    fn node(&self, rule: &str, s: &Sequent, children: Vec<Derivation>) -> Derivation {
        if !self.certify {
            let kind = if children.is_empty() { StepKind::Axiom } else { StepKind::Rule };
            return Derivation { conclusion: Sequent::default(), rule: rule.to_string(), kind, assignment: Assignment::default(), children: Vec::new() };
        }
        if rule == "Cut" {
            let with_cut = self.calc.with_cut();
            return Derivation::reconstruct(&with_cut, rule, s.clone(), children);
        }
        Derivation::reconstruct(self.calc, rule, s.clone(), children)
    }
}

/// Rules of a builtin calculus whose premises follow from the conclusion,
/// so that search may commit to them. Empty for other calculi.
pub fn invertible_rules(c: &Calculus) -> Vec<&'static str> {
    match c.name.as_str() {
        "G3cp" => vec!["L&", "R&", "L|", "R|", "L->", "R->"],
        "G3ip" | "G1ip" => vec!["L&", "R&", "L|", "R->"],
        "G1cp" => vec!["L&", "R&", "L|", "R|", "L->", "R->"],
        "G4ip" | "G4LL" => vec!["L&", "R&", "L|", "R->", "Lp->", "L&->", "L|->", "Ltrue->"],
        _ => Vec::new(),
    }
}

/// Logical rules of the G1 systems whose premises follow from the
/// conclusion; search applies them without trying alternatives.
fn is_invertible_g1(mode: Mode, rule: &str) -> bool {
    match mode {
        Mode::Multi => matches!(rule, "L&" | "R&" | "L|" | "R|" | "L->" | "R->"),
        Mode::Single => matches!(rule, "L&" | "R&" | "L|" | "R->"),
    }
}

/// An axiom instance inside `s`, extended to `s` by LW steps, then RW steps.
fn weaken_to_axiom(c: &Calculus, s: &Sequent) -> Option<Derivation> {
    let picks = |m: &FMultiset| -> Vec<FMultiset> {
        let mut v = vec![FMultiset::new()];
        v.extend(m.distinct().into_iter().map(|f| FMultiset::from_vec(vec![f])));
        v
    };
    for r in &c.axioms {
        for ant in picks(&s.ant) {
            for suc in picks(&s.suc) {
                let t = Sequent::new(ant.clone(), suc.clone());
                if instances_of(r, &t, MatchOptions::SEARCH).is_empty() {
                    continue;
                }
                let mut d = Derivation::reconstruct(c, &r.name, t.clone(), Vec::new());
                let mut cur = t;
                for f in s.ant.difference(&ant).iter() {
                    cur = Sequent::new(cur.ant.clone().with(f.clone()), cur.suc.clone());
                    d = Derivation::reconstruct(c, "LW", cur.clone(), vec![d]);
                }
                for f in s.suc.difference(&suc).iter() {
                    cur = Sequent::new(cur.ant.clone(), cur.suc.clone().with(f.clone()));
                    d = Derivation::reconstruct(c, "RW", cur.clone(), vec![d]);
                }
                return Some(d);
            }
        }
    }
    None
}

fn contracted_formula(inst: &RuleInstance) -> (Formula, bool) {
    // LC/RC: the premise has one more copy of the contracted formula
    let p = &inst.premises[0];
    let c = &inst.conclusion;
    if p.ant.len() > c.ant.len() {
        (p.ant.difference(&c.ant).iter().next().cloned().unwrap(), true)
    } else {
        (p.suc.difference(&c.suc).iter().next().cloned().unwrap(), false)
    }
}

/// Backward proof search with the calculus' default loop check.
pub fn prove(c: &Calculus, s: &Sequent, b: SearchBudget) -> ProofSearchResult {
    Prover::new(c).prove(s, b)
}

/// Search in `c` + Cut with cut formulas from `pool` (at most two cuts per
/// branch). An empty pool gives plain [`prove`].
pub fn prove_with_cut(c: &Calculus, s: &Sequent, pool: &[Formula], b: SearchBudget) -> ProofSearchResult {
    if pool.is_empty() {
        return prove(c, s, b);
    }
    Prover::new(c).with_cut(pool.to_vec(), 2).prove(s, b)
}

/// Default cut pool: the subformulas of the sequent.
pub fn subformula_pool(s: &Sequent) -> Vec<Formula> {
    let mut set = std::collections::BTreeSet::new();
    for f in s.ant.iter().chain(s.suc.iter()) {
        set.extend(f.subformulas());
    }
    set.into_iter().collect()
}

/// Least depth of a derivation, by iterative deepening; `None` if unprovable.
pub fn min_depth(c: &Calculus, s: &Sequent) -> Option<usize> {
    let d = prove(c, s, SearchBudget::UNLIMITED).derivation()?.depth();
    let mut p = Prover::new(c);
    for n in 1..d as u32 {
        if p.prove(s, SearchBudget::depth(n)).is_provable() {
            return Some(n as usize);
        }
    }
    Some(d)
}

// ---------------------------------------------------------------- checking

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at /{}: {}", p.join("/"), self.message)
    }
}

/// Validate every node against `c`.
pub fn check_derivation(c: &Calculus, d: &Derivation) -> Result<(), Vec<Defect>> {
    let mut defects = Vec::new();
    let mut path = Vec::new();
    check_node(c, d, &mut path, &mut defects);
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

fn check_node(c: &Calculus, d: &Derivation, path: &mut Vec<usize>, out: &mut Vec<Defect>) {
    let defect = |m: String, path: &Vec<usize>, out: &mut Vec<Defect>| out.push(Defect { path: path.clone(), message: m });
    if !c.admits(&d.conclusion) {
        defect(format!("`{}` is not single-conclusion", render_sequent(&d.conclusion)), path, out);
    }
    match c.schema(&d.rule) {
        None => defect(format!("`{}` is not a rule of {}", d.rule, c.name), path, out),
        Some(r) => {
            let prem: Vec<Sequent> = d.children.iter().map(|x| x.conclusion.clone()).collect();
            if r.premises.len() != prem.len() {
                defect(format!("{} takes {} premises, found {}", r.name, r.premises.len(), prem.len()), path, out);
            } else if match_full_instance(r, &d.conclusion, &prem).is_none() {
                let what = if r.is_axiom() { "an instance of axiom" } else { "an instance of rule" };
                defect(format!("not {what} {}", r.name), path, out);
            }
        }
    }
    for (i, ch) in d.children.iter().enumerate() {
        path.push(i);
        check_node(c, ch, path, out);
        path.pop();
    }
}

// ---------------------------------------------------------------- logics

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Logic {
    Cpc,
    Ipc,
    IK,
    IKD,
    LL,
}

impl Logic {
    pub const ALL: [Logic; 5] = [Logic::Cpc, Logic::Ipc, Logic::IK, Logic::IKD, Logic::LL];

    pub fn calculus_name(self) -> &'static str {
        match self {
            Logic::Cpc => "G3cp",
            Logic::Ipc => "G4ip",
            Logic::IK => "G4iK[]",
            Logic::IKD => "G4iKD[]",
            Logic::LL => "G4LL",
        }
    }

    pub fn parse(s: &str) -> Option<Logic> {
        let n = s.to_lowercase().replace('□', "").replace("[]", "").replace("box", "");
        Some(match n.as_str() {
            "cpc" => Logic::Cpc,
            "ipc" => Logic::Ipc,
            "ik" => Logic::IK,
            "ikd" => Logic::IKD,
            "ll" | "lax" => Logic::LL,
            _ => return None,
        })
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Cpc => "CPC",
            Logic::Ipc => "IPC",
            Logic::IK => "iK[]",
            Logic::IKD => "iKD[]",
            Logic::LL => "LL",
        })
    }
}

/// Shared instance of a builtin calculus.
pub fn builtin(name: &str) -> &'static Calculus {
    static CACHE: OnceLock<Vec<Calculus>> = OnceLock::new();
    let all = CACHE.get_or_init(|| crate::calculus::BUILTIN_NAMES.iter().map(|n| Calculus::builtin(n).expect("builtin calculus")).collect());
    let canon = crate::calculus::canonical_name(name).unwrap_or_else(|| panic!("unknown builtin calculus {name}"));
    all.iter().find(|c| c.name == canon).unwrap()
}

pub fn calculus_for(logic: Logic) -> &'static Calculus {
    builtin(logic.calculus_name())
}

/// `⊢_L f`, via the logic's terminating calculus.
pub fn decide(logic: Logic, f: &Formula) -> bool {
    decide_sequent(logic, &Sequent::goal(f.clone()))
}

pub fn decide_sequent(logic: Logic, s: &Sequent) -> bool {
    Prover::new(calculus_for(logic)).decide(s, SearchBudget::UNLIMITED) == Some(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Disjunct {
    Left,
    Right,
    Neither,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("not a disjunction: {0}")]
pub struct NotADisjunction(pub String);

/// Which disjunct of a disjunction is provable, left first.
pub fn split_disjunction(logic: Logic, f: &Formula) -> Result<Disjunct, NotADisjunction> {
    match f.kind() {
        Kind::Or(a, b) => Ok(if decide(logic, a) {
            Disjunct::Left
        } else if decide(logic, b) {
            Disjunct::Right
        } else {
            Disjunct::Neither
        }),
        _ => Err(NotADisjunction(f.to_string())),
    }
}

// ---------------------------------------------------------------- inversion

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InversionClause {
    LAnd,
    RAnd,
    LOr,
    ROr,
    LImp,
    RImp,
}

impl InversionClause {
    pub const ALL: [InversionClause; 6] = [InversionClause::LAnd, InversionClause::RAnd, InversionClause::LOr, InversionClause::ROr, InversionClause::LImp, InversionClause::RImp];
    fn left(self) -> bool {
        matches!(self, InversionClause::LAnd | InversionClause::LOr | InversionClause::LImp)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InversionError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Premises guaranteed provable (at no greater depth) by the inversion
/// lemma, for the principal occurrence `principal`. In a single-conclusion
/// calculus the R| clause does not hold and L-> only yields its right premise.
pub fn invert(c: &Calculus, s: &Sequent, clause: InversionClause, principal: &Formula) -> Result<Vec<Sequent>, InversionError> {
    use InversionClause::*;
    let side = if clause.left() { &s.ant } else { &s.suc };
    if !side.contains(principal) {
        return Err(InversionError::ShapeMismatch(format!("{principal} is not on the {} side", if clause.left() { "left" } else { "right" })));
    }
    let single = c.mode == Mode::Single;
    let gamma = || s.ant.without(principal);
    let delta = || s.suc.without(principal);
    let mismatch = || InversionError::ShapeMismatch(format!("{principal} does not have the shape of clause {clause:?}"));
    let seq = |a: FMultiset, b: FMultiset| Sequent::new(a, b);
    Ok(match (clause, principal.kind()) {
        (LAnd, Kind::And(a, b)) => vec![seq(gamma().with(a.clone()).with(b.clone()), s.suc.clone())],
        (RAnd, Kind::And(a, b)) => vec![seq(s.ant.clone(), delta().with(a.clone())), seq(s.ant.clone(), delta().with(b.clone()))],
        (LOr, Kind::Or(a, b)) => vec![seq(gamma().with(a.clone()), s.suc.clone()), seq(gamma().with(b.clone()), s.suc.clone())],
        (ROr, Kind::Or(_, _)) if single => return Err(InversionError::ShapeMismatch("R| is not invertible in a single-conclusion calculus".into())),
        (ROr, Kind::Or(a, b)) => vec![seq(s.ant.clone(), delta().with(a.clone()).with(b.clone()))],
        (LImp, Kind::Imp(_, b)) if single => vec![seq(gamma().with(b.clone()), s.suc.clone())],
        (LImp, Kind::Imp(a, b)) => vec![seq(gamma(), s.suc.clone().with(a.clone())), seq(gamma().with(b.clone()), s.suc.clone())],
        (RImp, Kind::Imp(a, b)) => vec![seq(s.ant.clone().with(a.clone()), delta().with(b.clone()))],
        _ => return Err(mismatch()),
    })
}

// ---------------------------------------------------------------- probes

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StructuralRule {
    LW,
    RW,
    LC,
    RC,
    Cut,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl ProbeReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Empirical admissibility. For weakening and contraction: every provable
/// corpus sequent of derivation depth n yields variants provable within
/// depth n (weakening by each formula of `extra`; contraction of each
/// duplicated formula). For Cut: every sequent provable with Cut on its
/// subformulas is provable without.
pub fn admissibility_probe(c: &Calculus, rule: StructuralRule, corpus: &[Sequent], extra: &[Formula]) -> ProbeReport {
    let mut report = ProbeReport::default();
    let mut plain = Prover::new(c);
    for s in corpus {
        if rule == StructuralRule::Cut {
            let with = prove_with_cut(c, s, &subformula_pool(s), SearchBudget::UNLIMITED);
            if with.is_provable() {
                report.checked += 1;
                if !plain.prove(s, SearchBudget::UNLIMITED).is_provable() {
                    report.counterexamples.push(render_sequent(s));
                }
            }
            continue;
        }
        let n = match plain.prove(s, SearchBudget::UNLIMITED) {
            ProofSearchResult::Provable(d) => d.depth() as u32,
            _ => continue,
        };
        for v in structural_variants(c, s, rule, extra) {
            report.checked += 1;
            if !plain.prove(&v, SearchBudget::depth(n)).is_provable() {
                report.counterexamples.push(format!("{} (depth {n}) -> {}", render_sequent(s), render_sequent(&v)));
            }
        }
    }
    report
}

/// The sequents that `rule` (read downwards for weakening, upwards for
/// contraction) turns `s` into.
pub fn structural_variants(c: &Calculus, s: &Sequent, rule: StructuralRule, extra: &[Formula]) -> Vec<Sequent> {
    let mut out = Vec::new();
    match rule {
        StructuralRule::LW => out.extend(extra.iter().map(|f| Sequent::new(s.ant.clone().with(f.clone()), s.suc.clone()))),
        StructuralRule::RW => {
            if c.mode == Mode::Multi || s.suc.is_empty() {
                out.extend(extra.iter().map(|f| Sequent::new(s.ant.clone(), s.suc.clone().with(f.clone()))));
            }
        }
        StructuralRule::LC => {
            for f in s.ant.distinct() {
                if s.ant.count(&f) >= 2 {
                    out.push(Sequent::new(s.ant.without(&f), s.suc.clone()));
                }
            }
        }
        StructuralRule::RC => {
            for f in s.suc.distinct() {
                if s.suc.count(&f) >= 2 {
                    out.push(Sequent::new(s.ant.clone(), s.suc.without(&f)));
                }
            }
        }
        StructuralRule::Cut => {}
    }
    out
}
