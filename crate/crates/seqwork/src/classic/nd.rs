//! Propositional natural deduction (ND, and NDi without classical absurdity):
//! checking, detours, normalization and normal-proof search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Kind};
use crate::syntax::parse_formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NdSystem {
    /// Classical: all rules.
    ND,
    /// Intuitionistic: no classical absurdity.
    NDi,
}

impl NdSystem {
    pub fn parse(s: &str) -> Option<NdSystem> {
        match s.to_ascii_lowercase().as_str() {
            "nd" => Some(NdSystem::ND),
            "ndi" => Some(NdSystem::NDi),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NdRule {
    AndI,
    /// Projection onto the left (0) or right (1) conjunct.
    AndE(u8),
    /// Injection of the left (0) or right (1) disjunct.
    OrI(u8),
    OrE,
    ImpI,
    ImpE,
    /// Intuitionistic absurdity.
    BotI,
    /// Classical absurdity, discharging `~φ`.
    BotC,
}

impl NdRule {
    pub fn name(self) -> &'static str {
        match self {
            NdRule::AndI => "&I",
            NdRule::AndE(0) => "&E0",
            NdRule::AndE(_) => "&E1",
            NdRule::OrI(0) => "|I0",
            NdRule::OrI(_) => "|I1",
            NdRule::OrE => "|E",
            NdRule::ImpI => "->I",
            NdRule::ImpE => "->E",
            NdRule::BotI => "Ei_bot",
            NdRule::BotC => "Ec_bot",
        }
    }

    pub fn parse(s: &str) -> Option<NdRule> {
        Some(match s {
            "&I" => NdRule::AndI,
            "&E0" => NdRule::AndE(0),
            "&E1" => NdRule::AndE(1),
            "|I0" => NdRule::OrI(0),
            "|I1" => NdRule::OrI(1),
            "|E" => NdRule::OrE,
            "->I" => NdRule::ImpI,
            "->E" => NdRule::ImpE,
            "Ei_bot" => NdRule::BotI,
            "Ec_bot" => NdRule::BotC,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            NdRule::AndI | NdRule::ImpE => 2,
            NdRule::OrE => 3,
            _ => 1,
        }
    }

    fn discharges(self) -> std::ops::RangeInclusive<usize> {
        match self {
            NdRule::ImpI | NdRule::BotC => 0..=1,
            NdRule::OrE => 2..=2,
            _ => 0..=0,
        }
    }
}

impl fmt::Display for NdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Nd {
    /// A leaf. `closed` is the claim made by the text; the checker compares it
    /// with the discharges below.
    Assumption { formula: Formula, label: Option<String>, closed: bool },
    /// For `|E` the two labels are for the left and the right case.
    Inference { rule: NdRule, conclusion: Formula, children: Vec<Nd>, discharged: Vec<String> },
}

pub type NdPath = Vec<usize>;

pub fn render_path(p: &[usize]) -> String {
    if p.is_empty() {
        "root".to_string()
    } else {
        p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl Nd {
    pub fn open(f: Formula) -> Nd {
        Nd::Assumption { formula: f, label: None, closed: false }
    }
    pub fn hyp(f: Formula, label: &str) -> Nd {
        Nd::Assumption { formula: f, label: Some(label.to_string()), closed: true }
    }
    pub fn infer(rule: NdRule, conclusion: Formula, children: Vec<Nd>, discharged: &[&str]) -> Nd {
        Nd::Inference { rule, conclusion, children, discharged: discharged.iter().map(|s| s.to_string()).collect() }
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            Nd::Assumption { formula, .. } => formula,
            Nd::Inference { conclusion, .. } => conclusion,
        }
    }
    pub fn rule(&self) -> Option<NdRule> {
        match self {
            Nd::Inference { rule, .. } => Some(*rule),
            Nd::Assumption { .. } => None,
        }
    }
    pub fn children(&self) -> &[Nd] {
        match self {
            Nd::Inference { children, .. } => children,
            Nd::Assumption { .. } => &[],
        }
    }
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Nd::size).sum::<usize>()
    }
    pub fn height(&self) -> usize {
        1 + self.children().iter().map(Nd::height).max().unwrap_or(0)
    }
    pub fn at(&self, path: &[usize]) -> Option<&Nd> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i)?.at(rest),
        }
    }
    fn at_mut(&mut self, path: &[usize]) -> Option<&mut Nd> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => match self {
                Nd::Inference { children, .. } => children.get_mut(*i)?.at_mut(rest),
                Nd::Assumption { .. } => None,
            },
        }
    }

    /// Formulas of the leaves not closed by a discharge inside the tree.
    pub fn open_assumptions(&self) -> Vec<Formula> {
        fn go(d: &Nd, scope: &mut Vec<String>, out: &mut Vec<Formula>) {
            match d {
                Nd::Assumption { formula, label, .. } => {
                    if !label.as_ref().is_some_and(|l| scope.contains(l)) {
                        out.push(formula.clone());
                    }
                }
                Nd::Inference { rule, children, discharged, .. } => {
                    for (i, c) in children.iter().enumerate() {
                        let n = scope.len();
                        scope.extend(scoped(*rule, discharged, i).cloned());
                        go(c, scope, out);
                        scope.truncate(n);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_proof(&self) -> bool {
        self.open_assumptions().is_empty()
    }
}

/// Labels discharged by a node that are in scope for child `i`.
fn scoped<'a>(rule: NdRule, discharged: &'a [String], i: usize) -> impl Iterator<Item = &'a String> {
    let sel: &[String] = match (rule, i) {
        (NdRule::ImpI | NdRule::BotC, 0) => discharged,
        (NdRule::OrE, 1) => &discharged[..discharged.len().min(1)],
        (NdRule::OrE, 2) => discharged.get(1..).unwrap_or(&[]),
        _ => &[],
    };
    sel.iter()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NdDefect {
    pub path: String,
    pub reason: String,
}

impl fmt::Display for NdDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.path, self.reason)
    }
}

/// Rule shapes and the discharge discipline. Every defect found is returned.
pub fn check_nd(sys: NdSystem, d: &Nd) -> Result<(), Vec<NdDefect>> {
    let mut defects = Vec::new();
    let mut seen = BTreeSet::new();
    // scope: label -> formula the discharging rule expects
    let mut scope: Vec<(String, Formula)> = Vec::new();
    check_node(sys, d, &mut Vec::new(), &mut scope, &mut seen, &mut defects);
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

fn check_node(sys: NdSystem, d: &Nd, path: &mut NdPath, scope: &mut Vec<(String, Formula)>, seen: &mut BTreeSet<String>, out: &mut Vec<NdDefect>) {
    let mut bad = |path: &NdPath, reason: String| out.push(NdDefect { path: render_path(path), reason });
    match d {
        Nd::Assumption { formula, label, closed } => {
            let binder = label.as_ref().and_then(|l| scope.iter().rev().find(|(m, _)| m == l));
            match (binder, closed) {
                (Some((l, want)), true) => {
                    if want != formula {
                        bad(path, format!("assumption [{formula}]^{l} is discharged as {want}"));
                    }
                }
                (Some((l, _)), false) => bad(path, format!("assumption {formula} labelled {l} is discharged but marked open")),
                (None, true) => bad(path, format!("assumption {formula} is marked closed but nothing below discharges it")),
                (None, false) => {}
            }
        }
        Nd::Inference { rule, conclusion, children, discharged } => {
            if *rule == NdRule::BotC && sys == NdSystem::NDi {
                bad(path, "classical absurdity (Ec_bot) is not a rule of NDi".into());
            }
            if children.len() != rule.arity() {
                bad(path, format!("{rule} takes {} premises, found {}", rule.arity(), children.len()));
                return;
            }
            if !rule.discharges().contains(&discharged.len()) {
                bad(path, format!("{rule} cannot discharge {} labels", discharged.len()));
                return;
            }
            for l in discharged {
                if !seen.insert(l.clone()) {
                    bad(path, format!("label {l} is discharged more than once"));
                }
            }
            let prem: Vec<&Formula> = children.iter().map(Nd::conclusion).collect();
            // formulas expected at the discharged leaves, per child
            let mut expect: Vec<Vec<(String, Formula)>> = vec![Vec::new(); children.len()];
            let shape: Result<(), String> = match rule {
                NdRule::AndI => {
                    if *conclusion == Formula::and(prem[0].clone(), prem[1].clone()) {
                        Ok(())
                    } else {
                        Err(format!("&I from {} and {} cannot give {conclusion}", prem[0], prem[1]))
                    }
                }
                NdRule::AndE(i) => match prem[0].kind() {
                    Kind::And(a, b) if (if *i == 0 { a } else { b }) == conclusion => Ok(()),
                    _ => Err(format!("{rule} from {} cannot give {conclusion}", prem[0])),
                },
                NdRule::OrI(i) => match conclusion.kind() {
                    Kind::Or(a, b) if (if *i == 0 { a } else { b }) == prem[0] => Ok(()),
                    _ => Err(format!("{rule} from {} cannot give {conclusion}", prem[0])),
                },
                NdRule::OrE => match prem[0].kind() {
                    Kind::Or(a, b) => {
                        expect[1].push((discharged[0].clone(), a.clone()));
                        expect[2].push((discharged[1].clone(), b.clone()));
                        if prem[1] == conclusion && prem[2] == conclusion {
                            Ok(())
                        } else {
                            Err(format!("|E cases conclude {} and {}, not {conclusion}", prem[1], prem[2]))
                        }
                    }
                    _ => Err(format!("|E major premise {} is not a disjunction", prem[0])),
                },
                NdRule::ImpI => match conclusion.kind() {
                    Kind::Imp(a, b) if b == prem[0] => {
                        expect[0].extend(discharged.iter().map(|l| (l.clone(), a.clone())));
                        Ok(())
                    }
                    _ => Err(format!("->I from {} cannot give {conclusion}", prem[0])),
                },
                NdRule::ImpE => match prem[0].kind() {
                    Kind::Imp(a, b) if a == prem[1] && b == conclusion => Ok(()),
                    _ => Err(format!("->E from {} and {} cannot give {conclusion}", prem[0], prem[1])),
                },
                NdRule::BotI | NdRule::BotC => {
                    expect[0].extend(discharged.iter().map(|l| (l.clone(), Formula::not(conclusion.clone()))));
                    if prem[0].is_bot() {
                        Ok(())
                    } else {
                        Err(format!("{rule} needs premise false, found {}", prem[0]))
                    }
                }
            };
            if let Err(r) = shape {
                bad(path, r);
            }
            for (i, c) in children.iter().enumerate() {
                let n = scope.len();
                scope.extend(expect[i].iter().cloned());
                path.push(i);
                check_node(sys, c, path, scope, seen, out);
                path.pop();
                scope.truncate(n);
            }
        }
    }
}

// ---------------------------------------------------------------- detours

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DetourKind {
    /// `&I` immediately followed by `&E`.
    Conjunction,
    /// `|I` as the major premise of `|E`.
    Disjunction,
    /// `->I` as the major premise of `->E`.
    Implication,
    /// `|E` whose cases only re-inject the case assumption into the major
    /// formula, so the conclusion equals the major premise.
    RedundantCases,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detour {
    pub path: NdPath,
    pub kind: DetourKind,
    /// Degree of the formula introduced and eliminated.
    pub degree: u32,
}

fn detour_at(d: &Nd) -> Option<DetourKind> {
    let Nd::Inference { rule, children, discharged, conclusion } = d else { return None };
    let major = children.first()?.rule();
    match (rule, major) {
        (NdRule::AndE(_), Some(NdRule::AndI)) => Some(DetourKind::Conjunction),
        (NdRule::OrE, Some(NdRule::OrI(_))) => Some(DetourKind::Disjunction),
        (NdRule::ImpE, Some(NdRule::ImpI)) => Some(DetourKind::Implication),
        (NdRule::OrE, _) if children.len() == 3 && discharged.len() == 2 && children[0].conclusion() == conclusion => {
            let reinjects = |k: usize| match &children[k] {
                Nd::Inference { rule: NdRule::OrI(i), children: c, .. } => {
                    *i as usize == k - 1 && matches!(&c[0], Nd::Assumption { label: Some(l), closed: true, .. } if *l == discharged[k - 1])
                }
                _ => false,
            };
            (reinjects(1) && reinjects(2)).then_some(DetourKind::RedundantCases)
        }
        _ => None,
    }
}

/// Every detour, in pre-order.
pub fn find_detours(d: &Nd) -> Vec<Detour> {
    fn go(d: &Nd, path: &mut NdPath, out: &mut Vec<Detour>) {
        if let Some(kind) = detour_at(d) {
            out.push(Detour { path: path.clone(), kind, degree: d.children()[0].conclusion().degree() });
        }
        for (i, c) in d.children().iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(d, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NdError {
    #[error("no detour at {0}")]
    NotADetour(String),
    #[error("normalization did not finish within {0} reductions")]
    CapExceeded(usize),
    #[error("invalid deduction: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Every label in `d`, on leaves and discharges.
pub(crate) fn collect_labels(d: &Nd, out: &mut BTreeSet<String>) {
    match d {
        Nd::Assumption { label, .. } => out.extend(label.iter().cloned()),
        Nd::Inference { discharged, children, .. } => {
            out.extend(discharged.iter().cloned());
            for c in children {
                collect_labels(c, out);
            }
        }
    }
}

pub(crate) fn new_label(used: &mut BTreeSet<String>) -> String {
    fresh_label(used, "h")
}

fn fresh_label(used: &mut BTreeSet<String>, base: &str) -> String {
    let name = (1..).map(|i| format!("{base}{i}")).find(|n| !used.contains(n)).unwrap();
    used.insert(name.clone());
    name
}

/// Renames every label discharged inside `d` to a label not in `used`.
pub(crate) fn freshen_all(d: &Nd, used: &mut BTreeSet<String>) -> Nd {
    fn go(d: &Nd, map: &mut Vec<(String, String)>, used: &mut BTreeSet<String>) -> Nd {
        match d {
            Nd::Assumption { formula, label, closed } => {
                let label = label.as_ref().map(|l| map.iter().rev().find(|(o, _)| o == l).map(|(_, n)| n.clone()).unwrap_or_else(|| l.clone()));
                Nd::Assumption { formula: formula.clone(), label, closed: *closed }
            }
            Nd::Inference { rule, conclusion, children, discharged } => {
                let renamed: Vec<String> = discharged.iter().map(|l| fresh_label(used, l.trim_end_matches(|c: char| c.is_ascii_digit()))).collect();
                let children = children
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let n = map.len();
                        for (k, l) in discharged.iter().enumerate() {
                            if scoped(*rule, discharged, i).any(|s| s == l) {
                                map.push((l.clone(), renamed[k].clone()));
                            }
                        }
                        let out = go(c, map, used);
                        map.truncate(n);
                        out
                    })
                    .collect();
                Nd::Inference { rule: *rule, conclusion: conclusion.clone(), children, discharged: renamed }
            }
        }
    }
    go(d, &mut Vec::new(), used)
}

/// Replaces the closed leaves labelled `label` by copies of `by`. Copies after
/// the first get fresh labels for their own discharges.
fn substitute(d: &Nd, label: &str, by: &Nd, used: &mut BTreeSet<String>, first: &mut bool) -> Nd {
    match d {
        Nd::Assumption { label: Some(l), closed: true, .. } if l == label => {
            if std::mem::take(first) {
                by.clone()
            } else {
                freshen_all(by, used)
            }
        }
        Nd::Assumption { .. } => d.clone(),
        Nd::Inference { rule, conclusion, children, discharged } => Nd::Inference {
            rule: *rule,
            conclusion: conclusion.clone(),
            children: children.iter().map(|c| substitute(c, label, by, used, first)).collect(),
            discharged: discharged.clone(),
        },
    }
}

/// Contracts the detour at `path`.
pub fn reduce_detour(d: &Nd, path: &[usize]) -> Result<Nd, NdError> {
    let node = d.at(path).ok_or_else(|| NdError::NotADetour(render_path(path)))?;
    let kind = detour_at(node).ok_or_else(|| NdError::NotADetour(render_path(path)))?;
    let mut used = BTreeSet::new();
    collect_labels(d, &mut used);
    let Nd::Inference { rule, children, discharged, .. } = node else { unreachable!() };
    let major = &children[0];
    let replacement = match kind {
        DetourKind::Conjunction => {
            let NdRule::AndE(i) = rule else { unreachable!() };
            major.children()[*i as usize].clone()
        }
        DetourKind::Disjunction => {
            let Some(NdRule::OrI(i)) = major.rule() else { unreachable!() };
            let i = i as usize;
            substitute(&children[1 + i], &discharged[i], &major.children()[0], &mut used, &mut true)
        }
        DetourKind::Implication => {
            let Nd::Inference { children: body, discharged: ds, .. } = major else { unreachable!() };
            match ds.first() {
                Some(l) => substitute(&body[0], l, &children[1], &mut used, &mut true),
                None => body[0].clone(),
            }
        }
        DetourKind::RedundantCases => major.clone(),
    };
    let mut out = d.clone();
    *out.at_mut(path).unwrap() = replacement;
    Ok(out)
}

/// Dershowitz–Manna: `a` below `b` when they differ and every element of
/// `a \ b` is dominated by some element of `b \ a`.
fn multiset_less(a: &[u32], b: &[u32]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) if p == q => {
                i += 1;
                j += 1;
            }
            (Some(p), Some(q)) if p < q => {
                x.push(*p);
                i += 1;
            }
            (Some(p), None) => {
                x.push(*p);
                i += 1;
            }
            (_, Some(q)) => {
                y.push(*q);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (!x.is_empty() || !y.is_empty()) && x.iter().all(|p| y.iter().any(|q| q > p))
}

/// The normalization termination measure: multiset of detour degrees, then
/// tree size.
pub fn nd_measure(d: &Nd) -> (Vec<u32>, usize) {
    (find_detours(d).iter().map(|t| t.degree).collect(), d.size())
}

/// Order on [`nd_measure`] values: multiset order on degrees, then size.
pub fn measure_less(a: &(Vec<u32>, usize), b: &(Vec<u32>, usize)) -> bool {
    let (mut x, mut y) = (a.0.clone(), b.0.clone());
    x.sort_unstable();
    y.sort_unstable();
    if x == y {
        a.1 < b.1
    } else {
        multiset_less(&x, &y)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Normalized {
    pub deduction: Nd,
    pub reductions: usize,
    /// Reductions that did not decrease the termination measure.
    pub flags: Vec<String>,
}

pub const DEFAULT_NORMALIZE_CAP: usize = 10_000;

/// Picks a maximal-degree detour whose substituted part contains no detour of
/// that degree, so copies never multiply the worst detours.
fn choose(d: &Nd, ds: &[Detour]) -> usize {
    let top = ds.iter().map(|t| t.degree).max().unwrap();
    let clean = |t: &Detour| {
        let node = d.at(&t.path).unwrap();
        let sub = match t.kind {
            DetourKind::Implication => Some(&node.children()[1]),
            DetourKind::Disjunction => Some(&node.children()[0].children()[0]),
            _ => None,
        };
        sub.is_none_or(|s| find_detours(s).iter().all(|u| u.degree < top))
    };
    ds.iter().position(|t| t.degree == top && clean(t)).or_else(|| ds.iter().position(|t| t.degree == top)).unwrap()
}

pub fn normalize(d: &Nd) -> Result<Normalized, NdError> {
    normalize_capped(d, DEFAULT_NORMALIZE_CAP)
}

pub fn normalize_capped(d: &Nd, cap: usize) -> Result<Normalized, NdError> {
    if let Err(e) = check_nd(NdSystem::ND, d) {
        return Err(NdError::Invalid(e[0].to_string()));
    }
    let mut cur = d.clone();
    let mut flags = Vec::new();
    let mut n = 0;
    loop {
        let ds = find_detours(&cur);
        if ds.is_empty() {
            return Ok(Normalized { deduction: cur, reductions: n, flags });
        }
        if n == cap {
            return Err(NdError::CapExceeded(cap));
        }
        let t = &ds[choose(&cur, &ds)];
        let before = nd_measure(&cur);
        let next = reduce_detour(&cur, &t.path)?;
        if !measure_less(&nd_measure(&next), &before) {
            flags.push(format!("{:?} at {} did not decrease the measure", t.kind, render_path(&t.path)));
        }
        cur = next;
        n += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LastRule {
    Introduction,
    Elimination,
    Assumption,
}

pub fn last_rule_kind(d: &Nd) -> LastRule {
    match d.rule() {
        None => LastRule::Assumption,
        Some(NdRule::AndI | NdRule::OrI(_) | NdRule::ImpI) => LastRule::Introduction,
        Some(_) => LastRule::Elimination,
    }
}

// ---------------------------------------------------------------- search

/// Intercalation search for normal NDi deductions: introductions on the goal,
/// elimination spines from hypotheses. Heights count nodes on the longest
/// branch. `|E` and absurdity close a spine, so the result is normal.
pub struct NormalSearch {
    max_height: usize,
    failed: BTreeMap<(Vec<Formula>, Formula), usize>,
    labels: usize,
}

type Ctx = Vec<(Formula, String)>;

impl NormalSearch {
    pub fn new(max_height: usize) -> NormalSearch {
        NormalSearch { max_height, failed: BTreeMap::new(), labels: 0 }
    }

    /// A closed normal proof of `goal`, of least height, if one exists within
    /// the bound.
    pub fn prove(&mut self, goal: &Formula) -> Option<Nd> {
        self.derive(&[], goal)
    }

    /// A normal deduction of `goal` from the labelled hypotheses.
    pub fn derive(&mut self, hyps: &[(Formula, String)], goal: &Formula) -> Option<Nd> {
        let ctx: Ctx = hyps.to_vec();
        (1..=self.max_height).find_map(|h| self.intro(&ctx, goal, h))
    }

    fn key(ctx: &Ctx, goal: &Formula) -> (Vec<Formula>, Formula) {
        let mut fs: Vec<Formula> = ctx.iter().map(|(f, _)| f.clone()).collect();
        fs.sort();
        fs.dedup();
        (fs, goal.clone())
    }

    fn label(&mut self) -> String {
        self.labels += 1;
        format!("h{}", self.labels)
    }

    fn extend(ctx: &Ctx, f: &Formula, l: &str) -> Ctx {
        let mut c = ctx.clone();
        if !c.iter().any(|(g, _)| g == f) {
            c.push((f.clone(), l.to_string()));
        }
        c
    }

    fn intro(&mut self, ctx: &Ctx, goal: &Formula, h: usize) -> Option<Nd> {
        if h == 0 {
            return None;
        }
        let key = Self::key(ctx, goal);
        if self.failed.get(&key).is_some_and(|&f| f >= h) {
            return None;
        }
        let r = self.intro_uncached(ctx, goal, h);
        if r.is_none() {
            let e = self.failed.entry(key).or_insert(0);
            *e = (*e).max(h);
        }
        r
    }

    fn intro_uncached(&mut self, ctx: &Ctx, goal: &Formula, h: usize) -> Option<Nd> {
        if let Some((f, l)) = ctx.iter().find(|(f, _)| f == goal) {
            return Some(Nd::hyp(f.clone(), l));
        }
        match goal.kind() {
            Kind::And(a, b) => {
                if let Some(x) = self.intro(ctx, a, h - 1) {
                    if let Some(y) = self.intro(ctx, b, h - 1) {
                        return Some(Nd::infer(NdRule::AndI, goal.clone(), vec![x, y], &[]));
                    }
                }
            }
            Kind::Imp(a, b) => {
                let l = self.label();
                let inner = Self::extend(ctx, a, &l);
                if let Some(x) = self.intro(&inner, b, h - 1) {
                    // the hypothesis may already have been in the context
                    let used = if inner.len() > ctx.len() { vec![l.as_str()] } else { vec![] };
                    return Some(Nd::infer(NdRule::ImpI, goal.clone(), vec![x], &used));
                }
            }
            Kind::Or(a, b) => {
                for (i, side) in [a, b].into_iter().enumerate() {
                    if let Some(x) = self.intro(ctx, side, h - 1) {
                        return Some(Nd::infer(NdRule::OrI(i as u8), goal.clone(), vec![x], &[]));
                    }
                }
            }
            _ => {}
        }
        for k in 0..ctx.len() {
            let (f, l) = ctx[k].clone();
            if let Some(d) = self.spine(ctx, Nd::hyp(f, &l), goal, h) {
                return Some(d);
            }
        }
        None
    }

    /// Continues an elimination spine whose current conclusion is `major`.
    /// `h` bounds the height of the finished spine.
    fn spine(&mut self, ctx: &Ctx, major: Nd, goal: &Formula, h: usize) -> Option<Nd> {
        let m = major.conclusion().clone();
        if m == *goal && major.rule().is_some() {
            return Some(major);
        }
        let mh = major.height();
        if mh >= h {
            return None;
        }
        let room = h - mh;
        match m.kind() {
            Kind::Bot if !goal.is_bot() => return Some(Nd::infer(NdRule::BotI, goal.clone(), vec![major], &[])),
            Kind::And(a, b) => {
                for (i, part) in [a, b].into_iter().enumerate() {
                    if ctx.iter().any(|(f, _)| f == part) {
                        continue;
                    }
                    let next = Nd::infer(NdRule::AndE(i as u8), part.clone(), vec![major.clone()], &[]);
                    if let Some(d) = self.spine(ctx, next, goal, h) {
                        return Some(d);
                    }
                }
            }
            Kind::Imp(a, b) => {
                if !ctx.iter().any(|(f, _)| f == b) {
                    if let Some(minor) = self.intro(ctx, a, room) {
                        let height = mh.max(minor.height()) + 1;
                        if height <= h {
                            let next = Nd::infer(NdRule::ImpE, b.clone(), vec![major, minor], &[]);
                            if let Some(d) = self.spine(ctx, next, goal, h) {
                                return Some(d);
                            }
                        }
                    }
                }
            }
            Kind::Or(a, b) => {
                let (la, lb) = (self.label(), self.label());
                let ca = Self::extend(ctx, a, &la);
                let cb = Self::extend(ctx, b, &lb);
                if ca.len() > ctx.len() && cb.len() > ctx.len() {
                    if let Some(x) = self.intro(&ca, goal, room) {
                        if let Some(y) = self.intro(&cb, goal, room) {
                            return Some(Nd::infer(NdRule::OrE, goal.clone(), vec![major, x, y], &[&la, &lb]));
                        }
                    }
                }
            }
            _ => {}
        }
        None
    }
}

// ---------------------------------------------------------------- text format

/// `.ndp` text: one node per line, conclusion first, premises indented two
/// spaces below their conclusion. Leaves are `assume [a]` (closed, label a),
/// `assume a` (open, labelled) or `assume` (open); inferences are
/// `by RULE` with discharged labels in brackets.
///
/// ```text
/// p -> p   by ->I [a]
///   p   assume [a]
/// ```
pub fn render_nd(d: &Nd) -> String {
    fn go(d: &Nd, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        match d {
            Nd::Assumption { formula, label, closed } => {
                out.push_str(&format!("{formula}   assume"));
                match (label, closed) {
                    (Some(l), true) => out.push_str(&format!(" [{l}]")),
                    (Some(l), false) => out.push_str(&format!(" {l}")),
                    (None, _) => {}
                }
            }
            Nd::Inference { rule, conclusion, discharged, .. } => {
                out.push_str(&format!("{conclusion}   by {rule}"));
                if !discharged.is_empty() {
                    out.push_str(&format!(" [{}]", discharged.join(", ")));
                }
            }
        }
        out.push('\n');
        for c in d.children() {
            go(c, depth + 1, out);
        }
    }
    let mut s = String::new();
    go(d, 0, &mut s);
    s
}

pub fn parse_nd(text: &str) -> Result<Nd, NdError> {
    struct Line {
        no: usize,
        depth: usize,
        node: Nd,
    }
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let bad = |m: String| NdError::Format { line: no, message: m };
        let body = raw.split('#').next().unwrap();
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        if indent % 2 != 0 {
            return Err(bad("indentation must be a multiple of two spaces".into()));
        }
        let body = body.trim();
        let (f, tail, leaf) = if let Some((f, t)) = body.rsplit_once(" by ") {
            (f, t.trim(), false)
        } else if let Some((f, t)) = body.rsplit_once(" assume") {
            (f, t.trim(), true)
        } else {
            return Err(bad("expected `formula by RULE` or `formula assume`".into()));
        };
        let formula = parse_formula(f.trim()).map_err(|e| bad(e.to_string()))?;
        let brackets = |t: &str| -> Option<Vec<String>> { t.strip_prefix('[')?.strip_suffix(']').map(|x| x.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()) };
        let node = if leaf {
            match tail {
                "" => Nd::open(formula),
                t if t.starts_with('[') => {
                    let ls = brackets(t).filter(|v| v.len() == 1).ok_or_else(|| bad(format!("bad label `{t}`")))?;
                    Nd::Assumption { formula, label: Some(ls[0].clone()), closed: true }
                }
                t => Nd::Assumption { formula, label: Some(t.to_string()), closed: false },
            }
        } else {
            let (r, rest) = tail.split_once(' ').unwrap_or((tail, ""));
            let rule = NdRule::parse(r).ok_or_else(|| bad(format!("unknown rule `{r}`")))?;
            let discharged = if rest.trim().is_empty() { vec![] } else { brackets(rest.trim()).ok_or_else(|| bad(format!("bad discharge list `{}`", rest.trim())))? };
            Nd::Inference { rule, conclusion: formula, children: vec![], discharged }
        };
        lines.push(Line { no, depth: indent / 2, node });
    }
    if lines.is_empty() {
        return Err(NdError::Format { line: 0, message: "empty deduction".into() });
    }
    // fold lines into a tree with an explicit stack
    let mut stack: Vec<(usize, Nd)> = Vec::new();
    let attach = |stack: &mut Vec<(usize, Nd)>| {
        let (_, child) = stack.pop().unwrap();
        if let Some((_, Nd::Inference { children, .. })) = stack.last_mut() {
            children.push(child);
        }
    };
    for l in lines {
        let expected = stack.last().map(|(d, _)| d + 1).unwrap_or(0);
        if l.depth > expected || (stack.is_empty() && l.depth != 0) {
            return Err(NdError::Format { line: l.no, message: "unexpected indentation".into() });
        }
        while stack.last().is_some_and(|(d, _)| *d >= l.depth) {
            if stack.len() == 1 {
                return Err(NdError::Format { line: l.no, message: "more than one root".into() });
            }
            attach(&mut stack);
        }
        if let Some((_, Nd::Assumption { .. })) = stack.last() {
            return Err(NdError::Format { line: l.no, message: "an assumption has no premises".into() });
        }
        stack.push((l.depth, l.node));
    }
    while stack.len() > 1 {
        attach(&mut stack);
    }
    Ok(stack.pop().unwrap().1)
}

// ---------------------------------------------------------------- examples

fn atom(n: &str) -> Formula {
    Formula::atom(n)
}

/// Excluded middle for `φ`, via classical absurdity.
pub fn excluded_middle(phi: &Formula) -> Nd {
    let lem = Formula::or(phi.clone(), Formula::not(phi.clone()));
    let neg = Formula::not(lem.clone());
    let bot = Formula::bot();
    let inner = Nd::infer(
        NdRule::ImpE,
        bot.clone(),
        vec![Nd::hyp(neg.clone(), "a"), Nd::infer(NdRule::OrI(0), lem.clone(), vec![Nd::hyp(phi.clone(), "b")], &[])],
        &[],
    );
    let not_phi = Nd::infer(NdRule::ImpI, Formula::not(phi.clone()), vec![inner], &["b"]);
    let outer = Nd::infer(NdRule::ImpE, bot, vec![Nd::hyp(neg, "a"), Nd::infer(NdRule::OrI(1), lem.clone(), vec![not_phi], &[])], &[]);
    Nd::infer(NdRule::BotC, lem, vec![outer], &["a"])
}

/// `φ → φ` through `φ ∧ φ` (a conjunction detour) and directly.
pub fn identity_proofs(phi: &Formula) -> (Nd, Nd) {
    let conj = Nd::infer(NdRule::AndI, Formula::and(phi.clone(), phi.clone()), vec![Nd::hyp(phi.clone(), "a"), Nd::hyp(phi.clone(), "a")], &[]);
    let long = Nd::infer(NdRule::ImpI, Formula::imp(phi.clone(), phi.clone()), vec![Nd::infer(NdRule::AndE(0), phi.clone(), vec![conj], &[])], &["a"]);
    let short = Nd::infer(NdRule::ImpI, Formula::imp(phi.clone(), phi.clone()), vec![Nd::hyp(phi.clone(), "a")], &["a"]);
    (long, short)
}

/// `φ ∨ ψ → φ ∨ ψ`, with a redundant case analysis and directly.
pub fn disjunction_identity_proofs(phi: &Formula, psi: &Formula) -> (Nd, Nd) {
    let d = Formula::or(phi.clone(), psi.clone());
    let goal = Formula::imp(d.clone(), d.clone());
    let cases = Nd::infer(
        NdRule::OrE,
        d.clone(),
        vec![
            Nd::hyp(d.clone(), "a"),
            Nd::infer(NdRule::OrI(0), d.clone(), vec![Nd::hyp(phi.clone(), "b")], &[]),
            Nd::infer(NdRule::OrI(1), d.clone(), vec![Nd::hyp(psi.clone(), "c")], &[]),
        ],
        &["b", "c"],
    );
    let long = Nd::infer(NdRule::ImpI, goal.clone(), vec![cases], &["a"]);
    let short = Nd::infer(NdRule::ImpI, goal, vec![Nd::hyp(d, "a")], &["a"]);
    (long, short)
}

/// The three detour shapes over atoms, as closed deductions: `p & q -> p`
/// through `&I`/`&E`, `p -> p | q -> ...` style through `|I`/`|E`, and
/// `p -> q -> p` applied through `->I`/`->E`.
pub fn detour_examples() -> Vec<(DetourKind, Nd)> {
    let (p, q) = (atom("p"), atom("q"));
    let pq = Formula::and(p.clone(), q.clone());
    // conjunction: from [p & q] rebuild p & q, project p
    let conj = Nd::infer(
        NdRule::ImpI,
        Formula::imp(pq.clone(), p.clone()),
        vec![Nd::infer(
            NdRule::AndE(0),
            p.clone(),
            vec![Nd::infer(
                NdRule::AndI,
                pq.clone(),
                vec![Nd::infer(NdRule::AndE(0), p.clone(), vec![Nd::hyp(pq.clone(), "a")], &[]), Nd::infer(NdRule::AndE(1), q.clone(), vec![Nd::hyp(pq.clone(), "a")], &[])],
                &[],
            )],
            &[],
        )],
        &["a"],
    );
    // disjunction: p -> q | p, via |I0 then case analysis
    let pq_or = Formula::or(p.clone(), q.clone());
    let qp_or = Formula::or(q.clone(), p.clone());
    let disj = Nd::infer(
        NdRule::ImpI,
        Formula::imp(p.clone(), qp_or.clone()),
        vec![Nd::infer(
            NdRule::OrE,
            qp_or.clone(),
            vec![
                Nd::infer(NdRule::OrI(0), pq_or, vec![Nd::hyp(p.clone(), "a")], &[]),
                Nd::infer(NdRule::OrI(1), qp_or.clone(), vec![Nd::hyp(p.clone(), "b")], &[]),
                Nd::infer(NdRule::OrI(0), qp_or.clone(), vec![Nd::hyp(q.clone(), "c")], &[]),
            ],
            &["b", "c"],
        )],
        &["a"],
    );
    // implication: p -> (q -> p) applied to [p] inside p -> q -> p
    let qp = Formula::imp(q.clone(), p.clone());
    let k = Nd::infer(NdRule::ImpI, Formula::imp(p.clone(), qp.clone()), vec![Nd::infer(NdRule::ImpI, qp.clone(), vec![Nd::hyp(p.clone(), "b")], &["c"])], &["b"]);
    let imp = Nd::infer(NdRule::ImpI, Formula::imp(p.clone(), qp.clone()), vec![Nd::infer(NdRule::ImpE, qp, vec![k, Nd::hyp(p, "a")], &[])], &["a"]);
    vec![(DetourKind::Conjunction, conj), (DetourKind::Disjunction, disj), (DetourKind::Implication, imp)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn excluded_middle_is_classical() {
        let d = excluded_middle(&atom("p"));
        assert_eq!(check_nd(NdSystem::ND, &d), Ok(()));
        assert!(d.is_proof());
        let e = check_nd(NdSystem::NDi, &d).unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].path, "root");
    }

    #[test]
    fn identity_proofs_check() {
        let (long, short) = identity_proofs(&atom("p"));
        assert_eq!(check_nd(NdSystem::NDi, &long), Ok(()));
        assert_eq!(check_nd(NdSystem::NDi, &short), Ok(()));
        assert_eq!(find_detours(&long).len(), 1);
        assert_eq!(normalize(&long).unwrap().deduction, short);
    }

    #[test]
    fn dangling_closed_assumption() {
        let d = Nd::infer(NdRule::AndE(0), atom("p"), vec![Nd::hyp(f("p & q"), "a")], &[]);
        let e = check_nd(NdSystem::ND, &d).unwrap_err();
        assert_eq!(e[0].path, "0");
    }

    #[test]
    fn double_discharge_is_rejected() {
        let (_, short) = identity_proofs(&atom("p"));
        let d = Nd::infer(NdRule::ImpI, f("q -> p -> p"), vec![short], &["a"]);
        assert!(check_nd(NdSystem::ND, &d).is_err());
    }

    #[test]
    fn disjunction_identity() {
        let (long, short) = disjunction_identity_proofs(&atom("p"), &atom("q"));
        assert_eq!(check_nd(NdSystem::NDi, &long), Ok(()));
        let ds = find_detours(&long);
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].path, vec![0]);
        assert_eq!(ds[0].kind, DetourKind::RedundantCases);
        assert!(find_detours(&short).is_empty());
        let n = normalize(&long).unwrap();
        assert_eq!(n.deduction, short);
        assert!(n.flags.is_empty());
        assert_eq!(normalize(&short).unwrap().deduction, short);
    }

    #[test]
    fn the_three_contractions() {
        for (kind, d) in detour_examples() {
            assert_eq!(check_nd(NdSystem::NDi, &d), Ok(()), "{kind:?}\n{}", render_nd(&d));
            let ds = find_detours(&d);
            assert_eq!(ds.len(), 1, "{kind:?}");
            assert_eq!(ds[0].kind, kind);
            let r = reduce_detour(&d, &ds[0].path).unwrap();
            assert_eq!(r.conclusion(), d.conclusion());
            assert_eq!(check_nd(NdSystem::NDi, &r), Ok(()), "{kind:?}\n{}", render_nd(&r));
            assert!(find_detours(&r).is_empty(), "{kind:?}\n{}", render_nd(&r));
        }
        let (_, d) = &detour_examples()[0];
        assert!(matches!(reduce_detour(d, &[]), Err(NdError::NotADetour(_))));
    }

    #[test]
    fn last_rule() {
        let (_, short) = identity_proofs(&atom("p"));
        assert_eq!(last_rule_kind(&short), LastRule::Introduction);
        assert_eq!(last_rule_kind(&Nd::open(atom("p"))), LastRule::Assumption);
        let e = Nd::infer(NdRule::ImpE, atom("q"), vec![Nd::open(f("p -> q")), Nd::open(atom("p"))], &[]);
        assert_eq!(last_rule_kind(&e), LastRule::Elimination);
    }

    #[test]
    fn search_finds_normal_proofs() {
        let mut s = NormalSearch::new(12);
        for t in ["p -> p", "p & q -> q & p", "p | q -> q | p", "(p -> q) -> (q -> false) -> p -> false", "false -> p", "~~(p | ~p)"] {
            let d = s.prove(&f(t)).unwrap_or_else(|| panic!("{t}"));
            assert_eq!(check_nd(NdSystem::NDi, &d), Ok(()), "{t}\n{}", render_nd(&d));
            assert!(d.is_proof());
            assert!(find_detours(&d).is_empty());
            assert_eq!(d.conclusion(), &f(t));
        }
        for t in ["p | ~p", "((p -> q) -> p) -> p", "false", "p"] {
            assert!(s.prove(&f(t)).is_none(), "{t}");
        }
    }

    #[test]
    fn text_round_trip() {
        for d in [excluded_middle(&atom("p")), disjunction_identity_proofs(&atom("p"), &atom("q")).0] {
            let t = render_nd(&d);
            assert_eq!(parse_nd(&t).unwrap(), d, "{t}");
        }
        assert!(parse_nd("p   assume\n  q   assume\n").is_err());
    }

    #[test]
    fn multiset_order() {
        assert!(multiset_less(&[2, 2, 1], &[3]));
        assert!(!multiset_less(&[3], &[2, 2]));
        assert!(!multiset_less(&[1], &[1]));
        assert!(multiset_less(&[], &[1]));
    }
}
