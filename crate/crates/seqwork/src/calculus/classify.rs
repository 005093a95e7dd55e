//! Pattern-level classification of rules (semi-analytic shapes) and axioms
//! (focused shapes).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::pattern::{Item, MetaSequent, Pat, RuleSchema};
use super::Mode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    RightSemiAnalytic,
    LeftSemiAnalytic,
    LeftSemiAnalyticContextSharing,
    ModalSemiAnalyticK,
    ModalSemiAnalyticD,
    NotSemiAnalytic(String),
}

impl Classification {
    pub fn is_semi_analytic(&self) -> bool {
        !matches!(self, Classification::NotSemiAnalytic(_))
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::RightSemiAnalytic => f.write_str("right semi-analytic"),
            Classification::LeftSemiAnalytic => f.write_str("left semi-analytic"),
            Classification::LeftSemiAnalyticContextSharing => f.write_str("left semi-analytic, context-sharing"),
            Classification::ModalSemiAnalyticK => f.write_str("modal semi-analytic (K)"),
            Classification::ModalSemiAnalyticD => f.write_str("modal semi-analytic (D)"),
            Classification::NotSemiAnalytic(r) => write!(f, "not semi-analytic: {r}"),
        }
    }
}

/// Metavariables plus concrete atoms: the symbolic stand-in for V(.).
fn sym_atoms(p: &Pat, vars: &mut BTreeSet<usize>, atoms: &mut BTreeSet<String>) {
    p.vars(vars);
    p.concrete_atoms(atoms);
}

struct Sym {
    vars: BTreeSet<usize>,
    atoms: BTreeSet<String>,
}

impl Sym {
    fn of(p: &Pat) -> Sym {
        let mut s = Sym { vars: BTreeSet::new(), atoms: BTreeSet::new() };
        sym_atoms(p, &mut s.vars, &mut s.atoms);
        s
    }
    fn covers(&self, p: &Pat) -> bool {
        let o = Sym::of(p);
        o.vars.is_subset(&self.vars) && o.atoms.is_subset(&self.atoms)
    }
    fn same(&self, p: &Pat) -> bool {
        let o = Sym::of(p);
        o.vars == self.vars && o.atoms == self.atoms
    }
}

fn not_sa(reason: impl Into<String>) -> Classification {
    Classification::NotSemiAnalytic(reason.into())
}

fn pats(side: &[Item]) -> Vec<&Pat> {
    MetaSequent::formula_pats(side)
}

fn compound(p: &Pat) -> bool {
    !p.is_var() && !matches!(p, Pat::Atom(_) | Pat::Top | Pat::Bot)
}

/// Classify a rule by the shapes of its premises and conclusion.
pub fn classify_rule(r: &RuleSchema, mode: Mode) -> Classification {
    if r.is_axiom() {
        return not_sa("an axiom, not a rule");
    }
    let c = &r.conclusion;
    let cant_box = MetaSequent::box_ctx_vars(&c.ant);
    if !cant_box.is_empty() {
        return classify_modal(r, mode);
    }
    let ant_pats = pats(&c.ant);
    let suc_pats = pats(&c.suc);
    let ant_ctx: BTreeSet<usize> = MetaSequent::ctx_vars(&c.ant).into_iter().collect();
    let suc_ctx = MetaSequent::ctx_vars(&c.suc);
    if !MetaSequent::box_ctx_vars(&c.suc).is_empty() {
        return not_sa("boxed context in the succedent");
    }

    match (ant_pats.len(), suc_pats.len()) {
        (0, 1) => {
            if mode == Mode::Single && !suc_ctx.is_empty() {
                return not_sa("succedent context next to the principal formula");
            }
            right_sa(r, ant_pats, suc_pats[0], &ant_ctx, mode)
        }
        (1, 0) => left_sa(r, ant_pats[0], &ant_ctx, &suc_ctx, mode),
        (0, 0) => not_sa("no principal formula"),
        _ => not_sa("more than one principal formula in the conclusion"),
    }
}

fn premise_ctx(p: &MetaSequent, allowed: &BTreeSet<usize>) -> Result<usize, Classification> {
    if !MetaSequent::box_ctx_vars(&p.ant).is_empty() || !MetaSequent::box_ctx_vars(&p.suc).is_empty() {
        return Err(not_sa("boxed context in a premise"));
    }
    let cs = MetaSequent::ctx_vars(&p.ant);
    match cs.as_slice() {
        [g] if allowed.contains(g) => Ok(*g),
        [_] => Err(not_sa("premise context does not occur in the conclusion antecedent")),
        [] => Err(not_sa("premise without an antecedent context")),
        _ => Err(not_sa("premise with several contexts")),
    }
}

fn right_sa(r: &RuleSchema, _ant: Vec<&Pat>, phi: &Pat, ctx: &BTreeSet<usize>, mode: Mode) -> Classification {
    if !compound(phi) {
        return not_sa("principal formula is not compound");
    }
    let v = Sym::of(phi);
    let suc_ctx: Vec<usize> = MetaSequent::ctx_vars(&r.conclusion.suc);
    for p in &r.premises {
        if let Err(e) = premise_ctx(p, ctx) {
            return e;
        }
        let sp = pats(&p.suc);
        let pc = MetaSequent::ctx_vars(&p.suc);
        match mode {
            Mode::Single if sp.len() != 1 || !pc.is_empty() => return not_sa("premise succedent is not a single formula"),
            Mode::Multi if sp.is_empty() || pc != suc_ctx => return not_sa("premise succedent does not have the right shape"),
            _ => {}
        }
        for q in pats(&p.ant).into_iter().chain(sp) {
            if !v.covers(q) {
                return not_sa("variable condition fails");
            }
        }
    }
    Classification::RightSemiAnalytic
}

fn left_sa(r: &RuleSchema, phi: &Pat, ctx: &BTreeSet<usize>, suc_ctx: &[usize], mode: Mode) -> Classification {
    if !compound(phi) {
        return not_sa("principal formula is not compound");
    }
    if suc_ctx.len() > 1 {
        return not_sa("several succedent contexts");
    }
    let v = Sym::of(phi);
    let mut delta_ctx = BTreeSet::new();
    let mut chi_ctx = BTreeSet::new();
    for p in &r.premises {
        let g = match premise_ctx(p, ctx) {
            Ok(g) => g,
            Err(e) => return e,
        };
        let sp = pats(&p.suc);
        let pc = MetaSequent::ctx_vars(&p.suc);
        let delta_type = if !pc.is_empty() {
            if pc != suc_ctx {
                return not_sa("premise succedent context differs from the conclusion's");
            }
            if mode == Mode::Single && !sp.is_empty() {
                return not_sa("premise succedent has a formula next to the context");
            }
            true
        } else if sp.is_empty() {
            // the empty-succedent premises of the groups i >= 2
            true
        } else if sp.len() == 1 || mode == Mode::Multi {
            false
        } else {
            return not_sa("premise succedent with several formulas");
        };
        if delta_type {
            delta_ctx.insert(g);
        } else {
            chi_ctx.insert(g);
        }
        for q in pats(&p.ant).into_iter().chain(sp) {
            if !v.covers(q) {
                return not_sa("variable condition fails");
            }
        }
    }
    if delta_ctx.intersection(&chi_ctx).next().is_some() {
        Classification::LeftSemiAnalyticContextSharing
    } else {
        Classification::LeftSemiAnalytic
    }
}

fn classify_modal(r: &RuleSchema, mode: Mode) -> Classification {
    let c = &r.conclusion;
    let boxes = MetaSequent::box_ctx_vars(&c.ant);
    if boxes.len() != 1 || r.premises.len() != 1 {
        return not_sa("boxed context in a rule that is not a single-premise modal rule");
    }
    let g = boxes[0];
    let p = &r.premises[0];
    let plain_ctx = MetaSequent::ctx_vars(&c.ant);
    let suc_ctx = MetaSequent::ctx_vars(&c.suc);
    if plain_ctx.len() > 1 || MetaSequent::ctx_vars(&p.ant) != vec![g] || !MetaSequent::box_ctx_vars(&p.ant).is_empty() {
        return not_sa("boxed context in a non-modal position");
    }
    let cpats = pats(&c.ant);
    let mut unboxed = Vec::new();
    for q in &cpats {
        match q {
            Pat::Box(inner) => unboxed.push(inner.as_ref()),
            _ => return not_sa("unboxed principal formula next to a boxed context"),
        }
    }
    let mut pants = pats(&p.ant);
    pants.sort_by_key(|q| format!("{q:?}"));
    unboxed.sort_by_key(|q| format!("{q:?}"));
    if pants != unboxed {
        return not_sa("premise antecedent is not the unboxed conclusion antecedent");
    }
    let csuc = pats(&c.suc);
    let psuc = pats(&p.suc);
    if !MetaSequent::ctx_vars(&p.suc).is_empty() {
        return not_sa("premise with a succedent context");
    }
    match (csuc.as_slice(), psuc.as_slice()) {
        ([Pat::Box(a)], [b]) if a.as_ref() == *b => {
            if mode == Mode::Single && !suc_ctx.is_empty() {
                return not_sa("succedent context next to the boxed formula");
            }
            Classification::ModalSemiAnalyticK
        }
        ([], []) => {
            if suc_ctx.len() > 1 {
                return not_sa("several succedent contexts");
            }
            Classification::ModalSemiAnalyticD
        }
        _ => not_sa("succedent does not match the K or D shape"),
    }
}

/// Focused-axiom shapes. Single mode requires |Δ| ≤ 1; multi mode allows an
/// additional succedent context in every form.
pub fn is_focused_axiom(a: &MetaSequent, mode: Mode) -> bool {
    if !MetaSequent::box_ctx_vars(&a.ant).is_empty() || !MetaSequent::box_ctx_vars(&a.suc).is_empty() {
        return false;
    }
    let ant = pats(&a.ant);
    let suc = pats(&a.suc);
    let actx = MetaSequent::ctx_vars(&a.ant);
    let sctx = MetaSequent::ctx_vars(&a.suc);
    if actx.len() > 1 || sctx.len() > 1 {
        return false;
    }
    let extra_suc = !sctx.is_empty();
    let same_vars = |fs: &[&Pat]| fs.windows(2).all(|w| Sym::of(w[0]).same(w[1]));
    let identity = ant.len() == 1 && suc.len() == 1 && ant[0] == suc[0];
    let multi = mode == Mode::Multi;
    match (actx.len(), ant.len(), suc.len()) {
        // φ ⇒ φ, and its context-closed variant Γ, φ ⇒ φ
        (_, 1, 1) if identity => !extra_suc || multi,
        // ⇒ φ
        (0, 0, 1) => !extra_suc || multi,
        // φ1..φn ⇒
        (0, n, 0) if n >= 1 && !extra_suc => same_vars(&ant),
        // Γ, φ1..φn ⇒ Δ
        (1, n, 0) if n >= 1 => same_vars(&ant),
        // Γ ⇒ φ
        (1, 0, 1) => !extra_suc || multi,
        // the multi-mode version of φ1..φn ⇒ with a succedent context
        (0, n, 0) if n >= 1 && multi => same_vars(&ant),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Calculus;
    use crate::syntax::parse_meta_sequent;

    fn class(calc: &str, rule: &str) -> Classification {
        let c = Calculus::builtin(calc).unwrap();
        classify_rule(c.schema(rule).unwrap(), c.mode)
    }

    #[test]
    fn g4ip_table() {
        use Classification::*;
        assert_eq!(class("G3ip", "R&"), RightSemiAnalytic);
        assert_eq!(class("G3ip", "L->"), LeftSemiAnalyticContextSharing);
        assert_eq!(class("G4ip", "L->->"), LeftSemiAnalyticContextSharing);
        assert!(!class("G4ip", "Lp->").is_semi_analytic());
        assert_eq!(class("G4ip", "L&->"), LeftSemiAnalytic);
        assert_eq!(class("G4ip", "L|->"), LeftSemiAnalytic);
        assert_eq!(class("G4iK[]", "R[]"), ModalSemiAnalyticK);
        assert_eq!(class("G4iKD[]", "D[]"), ModalSemiAnalyticD);
        assert!(!class("G4iK[]", "L[]->").is_semi_analytic());
        assert!(!class("G1ip", "LW").is_semi_analytic());
    }

    fn focused(s: &str, mode: Mode) -> bool {
        let mut v = Default::default();
        is_focused_axiom(&parse_meta_sequent(s, &mut v).unwrap(), mode)
    }

    #[test]
    fn focused_forms() {
        assert!(focused("A => A", Mode::Single));
        assert!(focused("G, false => D", Mode::Single));
        assert!(!focused("G => A, B, D", Mode::Single));
        assert!(!focused("G => A, B, D", Mode::Multi));
        assert!(focused("G, p? => p?, D", Mode::Multi));
        assert!(!focused("G, p? => p?, D", Mode::Single));
        assert!(!focused("A, B =>", Mode::Single));
        assert!(focused("A, A & A =>", Mode::Single));
    }
}
