//! Termination check: finite, instance-finite, and well-ordered under the
//! Dershowitz–Manna extension of a formula measure.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::corpus::{self, Space};
use crate::formula::{Formula, Measure};
use crate::multiset::{sequent_less, FMultiset, Sequent};
use crate::syntax::render_sequent;

use super::matching::{instantiate, Binding, Env};
use super::pattern::{Item, MetaSequent, Pat, RuleSchema, VarKind};
use super::{is_instance_finite, Calculus};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WellOrdered {
    Pass,
    Fail { rule: String, instance: String, clause: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TerminationReport {
    pub calculus: String,
    pub measure: Measure,
    pub finite: bool,
    pub instance_finite: bool,
    pub non_finite_rules: Vec<String>,
    pub well_ordered: WellOrdered,
    /// Rules settled symbolically; the rest were checked on instances.
    pub symbolic: Vec<String>,
    pub instances_checked: usize,
}

impl TerminationReport {
    pub fn passes(&self) -> bool {
        self.finite && self.instance_finite && self.well_ordered == WellOrdered::Pass
    }
}

/// Linear form of a pattern's measure: constant part plus coefficient per
/// formula metavariable. Atom metavariables count as atoms.
fn linear(p: &Pat, m: Measure, out: &mut BTreeMap<usize, u32>) -> u32 {
    let atom = 1;
    let leaf = match m {
        Measure::Weight => 1,
        Measure::Degree => 0,
    };
    match p {
        Pat::Atom(_) | Pat::AtomMeta(_) => atom,
        Pat::Top | Pat::Bot => leaf,
        Pat::Meta(v) => {
            *out.entry(*v).or_insert(0) += 1;
            0
        }
        Pat::And(a, b) => linear(a, m, out) + linear(b, m, out) + if m == Measure::Weight { 2 } else { 1 },
        Pat::Or(a, b) | Pat::Imp(a, b) => linear(a, m, out) + linear(b, m, out) + 1,
        Pat::Box(a) | Pat::Circle(a) => linear(a, m, out) + 1,
    }
}

/// `p` is below `q` under every instantiation.
fn pat_below(p: &Pat, q: &Pat, m: Measure) -> bool {
    let (mut cp, mut cq) = (BTreeMap::new(), BTreeMap::new());
    let kp = linear(p, m, &mut cp);
    let kq = linear(q, m, &mut cq);
    if cp.iter().any(|(v, n)| cq.get(v).copied().unwrap_or(0) < *n) {
        return false;
    }
    // least value of a formula metavariable under the measure
    let lo = match m {
        Measure::Weight => 1,
        Measure::Degree => 0,
    };
    let sp: u32 = cp.values().sum();
    let sq: u32 = cq.values().sum();
    kp + lo * sp < kq + lo * sq
}

/// Symbolic multiset comparison of a premise against the conclusion: after
/// cancelling identical items, every premise item must sit below some
/// remaining conclusion item.
fn symbolic_less(prem: &MetaSequent, concl: &MetaSequent, m: Measure) -> bool {
    let mut big: Vec<&Item> = concl.items().collect();
    let mut small = Vec::new();
    for it in prem.items() {
        if let Some(i) = big.iter().position(|b| *b == it) {
            big.remove(i);
        } else {
            small.push(it);
        }
    }
    if big.is_empty() {
        return false;
    }
    small.iter().all(|s| {
        big.iter().any(|b| match (s, b) {
            (Item::F(p), Item::F(q)) => pat_below(p, q, m),
            (Item::Ctx(x), Item::BoxCtx(y)) => x == y,
            _ => false,
        })
    })
}

fn formula_vars(r: &RuleSchema) -> Vec<(usize, VarKind)> {
    (0..r.vars.len()).map(|i| (i, r.vars.kinds[i])).collect()
}

fn instance_space(c: &Calculus) -> Space {
    fn ops(p: &Pat, b: &mut bool, o: &mut bool) {
        match p {
            Pat::Box(a) => {
                *b = true;
                ops(a, b, o)
            }
            Pat::Circle(a) => {
                *o = true;
                ops(a, b, o)
            }
            Pat::And(x, y) | Pat::Or(x, y) | Pat::Imp(x, y) => {
                ops(x, b, o);
                ops(y, b, o)
            }
            _ => {}
        }
    }
    let (mut b, mut o) = (false, false);
    for r in c.schemas() {
        for m in r.premises.iter().chain(std::iter::once(&r.conclusion)) {
            for it in m.items() {
                match it {
                    Item::F(p) => ops(p, &mut b, &mut o),
                    Item::BoxCtx(_) => b = true,
                    Item::Ctx(_) => {}
                }
            }
        }
    }
    let mut s = Space::atoms(2).with_constants();
    if b {
        s = s.with_box();
    }
    if o {
        s = s.with_circle();
    }
    s
}

/// Check the three conditions. Rules that cannot be settled symbolically are
/// tested on instances: every formula of weight ≤ 3 for each metavariable
/// (contexts empty or a single such formula), plus `samples` seeded random
/// instances with formulas up to weight 12.
pub fn check_terminating(c: &Calculus, m: Measure) -> TerminationReport {
    check_terminating_with(c, m, 2000, 0x5eed)
}

pub fn check_terminating_with(c: &Calculus, m: Measure, samples: usize, seed: u64) -> TerminationReport {
    let (instance_finite, bad) = is_instance_finite(c);
    let mut report = TerminationReport {
        calculus: c.name.clone(),
        measure: m,
        finite: true,
        instance_finite,
        non_finite_rules: bad,
        well_ordered: WellOrdered::Pass,
        symbolic: Vec::new(),
        instances_checked: 0,
    };
    let space = instance_space(c);
    let small = corpus::formulas(&space, 3);
    let mut rng = corpus::rng(seed);

    for r in &c.rules {
        if r.premises.iter().all(|p| symbolic_less(p, &r.conclusion, m)) {
            report.symbolic.push(r.name.clone());
            continue;
        }
        let vars = formula_vars(r);
        let mut fail = None;
        // exhaustive small instances
        let mut env: Env = vec![None; r.vars.len()];
        enumerate(r, &vars, 0, &small, &mut env, &mut |e| {
            report.instances_checked += 1;
            if let Some(w) = violation(r, e, m) {
                fail = Some(w);
                return true;
            }
            false
        });
        // random larger instances
        if fail.is_none() {
            for _ in 0..samples {
                let e: Env = vars
                    .iter()
                    .map(|(_, k)| {
                        Some(match k {
                            VarKind::Atom => Binding::Formula(Formula::atom(&space.atoms[rng.gen_range(0..space.atoms.len())])),
                            VarKind::Formula => Binding::Formula(corpus::random_formula(&space, &mut rng, 12)),
                            VarKind::Multiset => {
                                let n = rng.gen_range(0..3);
                                Binding::Multiset(FMultiset::from_vec((0..n).map(|_| corpus::random_formula(&space, &mut rng, 6)).collect()))
                            }
                        })
                    })
                    .collect();
                report.instances_checked += 1;
                if let Some(w) = violation(r, &e, m) {
                    fail = Some(w);
                    break;
                }
            }
        }
        if let Some((instance, clause)) = fail {
            report.well_ordered = WellOrdered::Fail { rule: r.name.clone(), instance, clause };
            return report;
        }
    }

    // The structural clauses, on sequents from the same space.
    let mut sample: Vec<Sequent> = corpus::sequents(&space, 5, false);
    sample.extend(corpus::random_sequents(&space, seed, samples, 12, false));
    for s in &sample {
        for (i, f) in s.ant.iter().enumerate() {
            let sub = Sequent::new(FMultiset::from_vec(s.ant.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect()), s.suc.clone());
            if !sequent_less(&sub, s, m) {
                report.well_ordered = WellOrdered::Fail { rule: "-".into(), instance: render_sequent(s), clause: format!("proper subsequent without {f}") };
                return report;
            }
            if let crate::formula::Kind::Box(inner) = f.kind() {
                let unboxed = Sequent::new(s.ant.without(f).with(inner.clone()), s.suc.clone());
                if !sequent_less(&unboxed, s, m) {
                    report.well_ordered = WellOrdered::Fail { rule: "-".into(), instance: render_sequent(s), clause: "boxed clause".into() };
                    return report;
                }
            }
        }
        for f in s.suc.iter() {
            if let crate::formula::Kind::Box(inner) = f.kind() {
                let unboxed = Sequent::new(s.ant.clone(), s.suc.without(f).with(inner.clone()));
                if !sequent_less(&unboxed, s, m) {
                    report.well_ordered = WellOrdered::Fail { rule: "-".into(), instance: render_sequent(s), clause: "boxed clause".into() };
                    return report;
                }
            }
        }
    }
    report
}

fn violation(r: &RuleSchema, e: &Env, m: Measure) -> Option<(String, String)> {
    let concl = instantiate(&r.conclusion, e)?;
    for (i, p) in r.premises.iter().enumerate() {
        let ps = instantiate(p, e)?;
        if !sequent_less(&ps, &concl, m) {
            return Some((format!("{}  /  {}", render_sequent(&ps), render_sequent(&concl)), format!("premise {} not below the conclusion", i + 1)));
        }
    }
    None
}

fn enumerate(r: &RuleSchema, vars: &[(usize, VarKind)], k: usize, pool: &[Formula], env: &mut Env, out: &mut dyn FnMut(&Env) -> bool) -> bool {
    if k == vars.len() {
        return out(env);
    }
    let (v, kind) = vars[k];
    let choices: Vec<Binding> = match kind {
        VarKind::Atom => pool.iter().filter(|f| f.is_atom()).cloned().map(Binding::Formula).collect(),
        VarKind::Formula => pool.iter().cloned().map(Binding::Formula).collect(),
        VarKind::Multiset => {
            let mut c = vec![Binding::Multiset(FMultiset::new())];
            c.extend(pool.iter().take(8).map(|f| Binding::Multiset(FMultiset::from_vec(vec![f.clone()]))));
            c
        }
    };
    for b in choices {
        env[v] = Some(b);
        if enumerate(r, vars, k + 1, pool, env, out) {
            env[v] = None;
            return true;
        }
    }
    env[v] = None;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(c: &str, m: Measure) -> TerminationReport {
        check_terminating_with(&Calculus::builtin(c).unwrap(), m, 200, 1)
    }

    #[test]
    fn g4ip_weight_passes() {
        let r = run("G4ip", Measure::Weight);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn g3ip_fails_with_l_imp_witness() {
        for m in [Measure::Degree, Measure::Weight] {
            match run("G3ip", m).well_ordered {
                WellOrdered::Fail { rule, .. } => assert_eq!(rule, "L->"),
                WellOrdered::Pass => panic!("G3ip should fail under {m:?}"),
            }
        }
    }

    #[test]
    fn g3cp_degree_passes() {
        assert!(run("G3cp", Measure::Degree).passes());
    }
}
