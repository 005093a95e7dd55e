//! Calculi as data: rule schemas, the builtin calculi, matching, the
//! semi-analytic classifier and the termination checker.

pub mod classify;
pub mod matching;
pub mod pattern;
pub mod terminate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Measure;
use crate::multiset::Sequent;
use crate::syntax::{self, parse_meta_sequent, CalculusDoc, SyntaxError};

pub use classify::{classify_rule, is_focused_axiom, Classification};
pub use matching::{instantiate, match_all, Binding, Env, MatchOptions};
pub use pattern::{Item, MetaSequent, Pat, RuleSchema, VarKind, Vars};
pub use terminate::{check_terminating, TerminationReport, WellOrdered};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Single,
    Multi,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CalculusError {
    #[error("unknown calculus `{0}`")]
    UnknownCalculus(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("rule {rule}: {message}")]
    BadRule { rule: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calculus {
    pub name: String,
    pub mode: Mode,
    pub axioms: Vec<RuleSchema>,
    pub rules: Vec<RuleSchema>,
    pub termination_measure: Option<Measure>,
}

const G1CP: &str = "
calculus G1cp
mode multi
axiom At: p? => p?
axiom Lfalse: false =>
axiom Rtrue: => true
rule LW: G => D / G, A => D
rule RW: G => D / G => A, D
rule LC: G, A, A => D / G, A => D
rule RC: G => A, A, D / G => A, D
rule L&: G, A, B => D / G, A & B => D
rule R&: G => A, D ; G => B, D / G => A & B, D
rule L|: G, A => D ; G, B => D / G, A | B => D
rule R|: G => A, B, D / G => A | B, D
rule L->: G => A, D ; G, B => D / G, A -> B => D
rule R->: G, A => B, D / G => A -> B, D
";

const G1IP: &str = "
calculus G1ip
mode single
axiom At: p? => p?
axiom Lfalse: false =>
axiom Rtrue: => true
rule LW: G => D / G, A => D
rule RW: G => / G => A
rule LC: G, A, A => D / G, A => D
rule L&: G, A, B => D / G, A & B => D
rule R&: G => A ; G => B / G => A & B
rule L|: G, A => D ; G, B => D / G, A | B => D
rule R|0: G => A / G => A | B
rule R|1: G => B / G => A | B
rule L->: G => A ; G, B => D / G, A -> B => D
rule R->: G, A => B / G => A -> B
";

const G3CP: &str = "
calculus G3cp
mode multi
measure degree
axiom At: G, p? => p?, D
axiom Lfalse: G, false => D
axiom Rtrue: G => true, D
rule L&: G, A, B => D / G, A & B => D
rule R&: G => A, D ; G => B, D / G => A & B, D
rule L|: G, A => D ; G, B => D / G, A | B => D
rule R|: G => A, B, D / G => A | B, D
rule L->: G => A, D ; G, B => D / G, A -> B => D
rule R->: G, A => B, D / G => A -> B, D
";

const G3IP: &str = "
calculus G3ip
mode single
axiom At: G, p? => p?
axiom Lfalse: G, false => D
axiom Rtrue: G => true
rule L&: G, A, B => D / G, A & B => D
rule R&: G => A ; G => B / G => A & B
rule L|: G, A => D ; G, B => D / G, A | B => D
rule R|0: G => A / G => A | B
rule R|1: G => B / G => A | B
rule L->: G, A -> B => A ; G, B => D / G, A -> B => D
rule R->: G, A => B / G => A -> B
";

const G4IP_RULES: &str = "
axiom At: G, p? => p?
axiom Lfalse: G, false => D
axiom Rtrue: G => true
rule L&: G, A, B => D / G, A & B => D
rule R&: G => A ; G => B / G => A & B
rule L|: G, A => D ; G, B => D / G, A | B => D
rule R|0: G => A / G => A | B
rule R|1: G => B / G => A | B
rule Lp->: G, p?, B => D / G, p?, p? -> B => D
rule R->: G, A => B / G => A -> B
rule L&->: G, A -> (B -> C) => D / G, A & B -> C => D
rule L|->: G, A -> C, B -> C => D / G, A | B -> C => D
rule L->->: G, B -> C => A -> B ; C, G => D / G, (A -> B) -> C => D
rule Ltrue->: G, B => D / G, true -> B => D
";

const K_RULES: &str = "
rule R[]: G => A / P, []G => []A
rule L[]->: G => A ; P, []G, B => D / P, []G, []A -> B => D
";

const D_RULE: &str = "
rule D[]: G, A => / P, []G, []A => D
";

const LAX_RULES: &str = "
rule RO: G => A / G => OA
rule LO: G, B => OA / G, OB => OA
rule RO->: G => A ; G, B => D / G, OA -> B => D
rule LO->: G, C => OA ; G, OC, B => D / G, OC, OA -> B => D
";

/// Names of the builtin calculi, in a fixed order.
pub const BUILTIN_NAMES: [&str; 8] = ["G1cp", "G1ip", "G3cp", "G3ip", "G4ip", "G4iK[]", "G4iKD[]", "G4LL"];

/// DSL source of a builtin calculus.
pub fn builtin_source(name: &str) -> Option<String> {
    let g4 = |head: &str, extra: &[&str]| {
        let mut s = format!("calculus {head}\nmode single\nmeasure weight\n{G4IP_RULES}");
        for e in extra {
            s.push_str(e);
        }
        s
    };
    Some(match canonical_name(name)? {
        "G1cp" => G1CP.to_string(),
        "G1ip" => G1IP.to_string(),
        "G3cp" => G3CP.to_string(),
        "G3ip" => G3IP.to_string(),
        "G4ip" => g4("G4ip", &[]),
        "G4iK[]" => g4("G4iK[]", &[K_RULES]),
        "G4iKD[]" => g4("G4iKD[]", &[K_RULES, D_RULE]),
        "G4LL" => g4("G4LL", &[LAX_RULES]),
        _ => unreachable!(),
    })
}

/// Case-insensitive lookup accepting `[]`, `□` or `box` for the box.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    let n = name.to_lowercase().replace('□', "[]").replace("box", "[]");
    BUILTIN_NAMES.iter().copied().find(|b| b.to_lowercase() == n)
}

impl Calculus {
    pub fn builtin(name: &str) -> Result<Calculus, CalculusError> {
        let src = builtin_source(name).ok_or_else(|| CalculusError::UnknownCalculus(name.to_string()))?;
        let c = Calculus::from_doc(&syntax::parse_calculus(&src)?)?;
        for r in &c.rules {
            if !r.fresh_premise_vars().is_empty() {
                return Err(CalculusError::BadRule { rule: r.name.clone(), message: "premise metavariable absent from the conclusion".into() });
            }
        }
        Ok(c)
    }

    /// Compile a parsed document. Each side of a meta-sequent may carry at
    /// most one plain and one boxed multiset variable (additive contexts).
    pub fn from_doc(doc: &CalculusDoc) -> Result<Calculus, CalculusError> {
        let mut axioms = Vec::new();
        let mut rules = Vec::new();
        for (name, text) in &doc.axioms {
            let mut vars = Vars::default();
            let conclusion = parse_meta_sequent(text, &mut vars).map_err(SyntaxError::from)?;
            let r = RuleSchema { name: name.clone(), premises: Vec::new(), conclusion, vars };
            validate(&r, doc.sequent_mode)?;
            axioms.push(r);
        }
        for rd in &doc.rules {
            let mut vars = Vars::default();
            let mut premises = Vec::new();
            for p in &rd.premises {
                premises.push(parse_meta_sequent(p, &mut vars).map_err(SyntaxError::from)?);
            }
            let conclusion = parse_meta_sequent(&rd.conclusion, &mut vars).map_err(SyntaxError::from)?;
            let r = RuleSchema { name: rd.name.clone(), premises, conclusion, vars };
            validate(&r, doc.sequent_mode)?;
            rules.push(r);
        }
        Ok(Calculus { name: doc.name.clone(), mode: doc.sequent_mode, axioms, rules, termination_measure: doc.measure })
    }

    pub fn from_text(text: &str) -> Result<Calculus, CalculusError> {
        Calculus::from_doc(&syntax::parse_calculus(text)?)
    }

    /// Axioms first, then rules, each in figure order.
    pub fn schemas(&self) -> impl Iterator<Item = &RuleSchema> {
        self.axioms.iter().chain(self.rules.iter())
    }

    pub fn schema(&self, name: &str) -> Option<&RuleSchema> {
        self.schemas().find(|r| r.name == name)
    }

    pub fn is_axiom(&self, name: &str) -> bool {
        self.axioms.iter().any(|r| r.name == name)
    }

    /// True if the sequent respects the calculus' succedent bound.
    pub fn admits(&self, s: &Sequent) -> bool {
        self.mode == Mode::Multi || s.suc.len() <= 1
    }

    /// Copy with a rule set restricted or extended, keeping name and mode.
    pub fn with_rules(&self, name: &str, rules: Vec<RuleSchema>) -> Calculus {
        Calculus { name: name.to_string(), rules, ..self.clone() }
    }

    /// The calculus plus the Cut rule; its premises carry a cut formula `A`
    /// that does not occur in the conclusion.
    pub fn with_cut(&self) -> Calculus {
        let text = match self.mode {
            Mode::Multi => "calculus X\nrule Cut: G => A, D ; G, A => D / G => D",
            Mode::Single => "calculus X\nrule Cut: G => A ; G, A => D / G => D",
        };
        let cut = Calculus::from_text(text).expect("cut rule parses").rules.remove(0);
        let mut rules = self.rules.clone();
        rules.push(cut);
        Calculus { name: format!("{}+Cut", self.name), rules, ..self.clone() }
    }

    pub fn to_source(&self) -> String {
        let mut s = format!(
            "calculus {}\nmode {}\n",
            self.name,
            match self.mode {
                Mode::Single => "single",
                Mode::Multi => "multi",
            }
        );
        if let Some(m) = self.termination_measure {
            s.push_str(&format!("measure {}\n", if m == Measure::Weight { "weight" } else { "degree" }));
        }
        for r in self.schemas() {
            s.push_str(&syntax::render_rule(r));
            s.push('\n');
        }
        s
    }
}

fn validate(r: &RuleSchema, mode: Mode) -> Result<(), CalculusError> {
    let bad = |m: &str| Err(CalculusError::BadRule { rule: r.name.clone(), message: m.to_string() });
    for m in r.premises.iter().chain(std::iter::once(&r.conclusion)) {
        for side in [&m.ant, &m.suc] {
            if MetaSequent::ctx_vars(side).len() > 1 || MetaSequent::box_ctx_vars(side).len() > 1 {
                return bad("more than one multiset variable of the same sort on one side (context splitting is not supported)");
            }
        }
        if mode == Mode::Single {
            let n = MetaSequent::formula_pats(&m.suc).len() + MetaSequent::ctx_vars(&m.suc).len() + MetaSequent::box_ctx_vars(&m.suc).len();
            if n > 1 {
                return bad("single-conclusion calculus with more than one succedent item");
            }
        }
    }
    Ok(())
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}

/// Named assignment of metavariables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Assignment(pub BTreeMap<String, String>);

impl Assignment {
    pub fn from_env(vars: &Vars, env: &Env) -> Assignment {
        let mut m = BTreeMap::new();
        for (i, b) in env.iter().enumerate() {
            if let Some(b) = b {
                let v = match b {
                    Binding::Formula(f) => syntax::render_formula(f),
                    Binding::Multiset(ms) => format!("{{{}}}", syntax::render_list(ms)),
                };
                m.insert(vars.names[i].clone(), v);
            }
        }
        Assignment(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub schema: String,
    pub env: Env,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

impl RuleInstance {
    /// Principal formulas (antecedent, succedent): the instantiated formula
    /// patterns of the conclusion.
    pub fn principal(&self, r: &RuleSchema) -> (Vec<crate::formula::Formula>, Vec<crate::formula::Formula>) {
        let side = |items: &[Item]| items.iter().filter_map(|it| if let Item::F(p) = it { matching::instantiate_pat(p, &self.env) } else { None }).collect();
        (side(&r.conclusion.ant), side(&r.conclusion.suc))
    }

    pub fn assignment(&self, c: &Calculus) -> Assignment {
        match c.schema(&self.schema) {
            Some(r) => Assignment::from_env(&r.vars, &self.env),
            None => Assignment::default(),
        }
    }
}

/// Instances of `r` with conclusion `s`. Instances whose premises are not
/// determined by the conclusion are skipped.
pub fn instances_of(r: &RuleSchema, s: &Sequent, opts: MatchOptions) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    let mut env: Env = vec![None; r.vars.len()];
    matching::match_meta(&r.conclusion, &r.vars, s, opts, &mut env, &mut |e| {
        if let Some(premises) = r.premises.iter().map(|p| instantiate(p, e)).collect::<Option<Vec<_>>>() {
            out.push(RuleInstance { schema: r.name.clone(), env: e.clone(), premises, conclusion: s.clone() });
        }
        false
    });
    out
}

/// Every axiom and rule instance with conclusion `s`, by schema order and
/// then principal occurrence.
pub fn match_conclusion(c: &Calculus, s: &Sequent) -> Vec<RuleInstance> {
    if !c.admits(s) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for r in c.schemas() {
        for inst in instances_of(r, s, MatchOptions::ALL) {
            if inst.premises.iter().all(|p| c.admits(p)) {
                out.push(inst);
            }
        }
    }
    out
}

/// Whether every rule's premises are determined by its conclusion, with the
/// offending rule names otherwise.
pub fn is_instance_finite(c: &Calculus) -> (bool, Vec<String>) {
    let bad: Vec<String> = c.rules.iter().filter(|r| !r.fresh_premise_vars().is_empty()).map(|r| r.name.clone()).collect();
    (bad.is_empty(), bad)
}

/// Match a complete instance: conclusion and premises given. Used when
/// reading or checking derivations, where premise-only variables (the cut
/// formula) are bound from the premises.
pub fn match_full_instance(r: &RuleSchema, conclusion: &Sequent, premises: &[Sequent]) -> Option<Env> {
    if r.premises.len() != premises.len() {
        return None;
    }
    let mut env: Env = vec![None; r.vars.len()];
    let mut found = None;
    matching::match_meta(&r.conclusion, &r.vars, conclusion, MatchOptions::ALL, &mut env, &mut |e| {
        let mut e2 = e.clone();
        if extend_premises(r, premises, 0, &mut e2) {
            found = Some(e2);
            return true;
        }
        false
    });
    found
}

fn extend_premises(r: &RuleSchema, premises: &[Sequent], k: usize, env: &mut Env) -> bool {
    if k == premises.len() {
        return true;
    }
    let mut result = None;
    matching::match_meta(&r.premises[k], &r.vars, &premises[k], MatchOptions::ALL, env, &mut |e| {
        let mut e2 = e.clone();
        if extend_premises(r, premises, k + 1, &mut e2) {
            result = Some(e2);
            return true;
        }
        false
    });
    match result {
        Some(e) => {
            *env = e;
            true
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    #[test]
    fn builtins_load() {
        for n in BUILTIN_NAMES {
            let c = Calculus::builtin(n).unwrap();
            assert_eq!(c.name, n);
            let again = Calculus::from_text(&c.to_source()).unwrap();
            assert_eq!(again, c);
        }
        assert!(Calculus::builtin("g4ikbox").is_ok());
        assert!(matches!(Calculus::builtin("LK"), Err(CalculusError::UnknownCalculus(_))));
    }

    #[test]
    fn rule_sets() {
        let g4 = Calculus::builtin("G4ip").unwrap();
        for r in ["Lp->", "L&->", "L|->", "L->->"] {
            assert!(g4.schema(r).is_some(), "{r}");
        }
        assert_eq!(Calculus::builtin("G3ip").unwrap().mode, Mode::Single);
        let ll = Calculus::builtin("G4LL").unwrap();
        for r in ["RO", "LO", "RO->", "LO->"] {
            assert!(ll.schema(r).is_some());
        }
    }

    #[test]
    fn conclusion_matching() {
        let g3cp = Calculus::builtin("G3cp").unwrap();
        let m = match_conclusion(&g3cp, &parse_sequent("=> p | q").unwrap());
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].schema, "R|");

        let g3ip = Calculus::builtin("G3ip").unwrap();
        let m: Vec<_> = match_conclusion(&g3ip, &parse_sequent("p -> q, p -> q => r").unwrap()).into_iter().filter(|i| i.schema == "L->").collect();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].premises, m[1].premises);

        let g4 = Calculus::builtin("G4ip").unwrap();
        let m = match_conclusion(&g4, &parse_sequent("p, p -> q => q").unwrap());
        assert!(m.iter().any(|i| i.schema == "Lp->" && i.premises == vec![parse_sequent("p, q => q").unwrap()]));
    }

    #[test]
    fn instance_finiteness() {
        assert!(is_instance_finite(&Calculus::builtin("G4ip").unwrap()).0);
        assert!(is_instance_finite(&Calculus::builtin("G1cp").unwrap()).0);
        let c = Calculus::from_text("calculus X\nrule W: G => B / G => A\n").unwrap();
        assert_eq!(is_instance_finite(&c), (false, vec!["W".to_string()]));
    }

    #[test]
    fn full_instance_binds_cut_formula() {
        let c = Calculus::builtin("G3ip").unwrap().with_cut();
        let cut = c.schema("Cut").unwrap();
        let concl = parse_sequent("p => q").unwrap();
        let prem = [parse_sequent("p => r").unwrap(), parse_sequent("p, r => q").unwrap()];
        assert!(match_full_instance(cut, &concl, &prem).is_some());
        let wrong = [parse_sequent("p => r").unwrap(), parse_sequent("p, s => q").unwrap()];
        assert!(match_full_instance(cut, &concl, &wrong).is_none());
    }
}
