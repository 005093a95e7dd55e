//! Formula patterns, meta-sequents and rule schemas.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::formula::{Formula, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Any formula.
    Formula,
    /// Atoms only (`p?`).
    Atom,
    /// A multiset of formulas (`G`, `P`, `D`, `S`, optionally boxed as `[]G`).
    Multiset,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vars {
    pub names: Vec<String>,
    pub kinds: Vec<VarKind>,
}

impl Vars {
    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
    /// Index of `name`, registering it with `kind` if new. Errors on a kind clash.
    pub fn intern(&mut self, name: &str, kind: VarKind) -> Result<usize, String> {
        match self.index(name) {
            Some(i) if self.kinds[i] == kind => Ok(i),
            Some(_) => Err(format!("metavariable {name} used with two different kinds")),
            None => {
                self.names.push(name.to_string());
                self.kinds.push(kind);
                Ok(self.names.len() - 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pat {
    Atom(Arc<str>),
    Top,
    Bot,
    And(Box<Pat>, Box<Pat>),
    Or(Box<Pat>, Box<Pat>),
    Imp(Box<Pat>, Box<Pat>),
    Box(Box<Pat>),
    Circle(Box<Pat>),
    Meta(usize),
    AtomMeta(usize),
}

impl Pat {
    pub fn is_var(&self) -> bool {
        matches!(self, Pat::Meta(_) | Pat::AtomMeta(_))
    }

    /// Metavariables occurring in the pattern.
    pub fn vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Pat::Atom(_) | Pat::Top | Pat::Bot => {}
            Pat::And(a, b) | Pat::Or(a, b) | Pat::Imp(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Pat::Box(a) | Pat::Circle(a) => a.vars(out),
            Pat::Meta(i) | Pat::AtomMeta(i) => {
                out.insert(*i);
            }
        }
    }

    pub fn concrete_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Pat::Atom(n) => {
                out.insert(n.to_string());
            }
            Pat::Top | Pat::Bot | Pat::Meta(_) | Pat::AtomMeta(_) => {}
            Pat::And(a, b) | Pat::Or(a, b) | Pat::Imp(a, b) => {
                a.concrete_atoms(out);
                b.concrete_atoms(out);
            }
            Pat::Box(a) | Pat::Circle(a) => a.concrete_atoms(out),
        }
    }

    /// Top constructor tag used to pre-filter candidate formulas.
    pub(crate) fn head(&self) -> Option<u8> {
        Some(match self {
            Pat::Atom(_) => 2,
            Pat::Top => 1,
            Pat::Bot => 0,
            Pat::Box(_) => 3,
            Pat::Circle(_) => 4,
            Pat::And(..) => 5,
            Pat::Or(..) => 6,
            Pat::Imp(..) => 7,
            Pat::Meta(_) | Pat::AtomMeta(_) => return None,
        })
    }

    pub fn size(&self) -> usize {
        match self {
            Pat::And(a, b) | Pat::Or(a, b) | Pat::Imp(a, b) => 1 + a.size() + b.size(),
            Pat::Box(a) | Pat::Circle(a) => 1 + a.size(),
            _ => 1,
        }
    }
}

pub(crate) fn formula_head(f: &Formula) -> u8 {
    match f.kind() {
        Kind::Bot => 0,
        Kind::Top => 1,
        Kind::Atom(_) => 2,
        Kind::Box(_) => 3,
        Kind::Circle(_) => 4,
        Kind::And(..) => 5,
        Kind::Or(..) => 6,
        Kind::Imp(..) => 7,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    F(Pat),
    Ctx(usize),
    BoxCtx(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MetaSequent {
    pub ant: Vec<Item>,
    pub suc: Vec<Item>,
}

impl MetaSequent {
    pub fn items(&self) -> impl Iterator<Item = &Item> {
        self.ant.iter().chain(self.suc.iter())
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for it in self.items() {
            match it {
                Item::F(p) => p.vars(&mut out),
                Item::Ctx(i) | Item::BoxCtx(i) => {
                    out.insert(*i);
                }
            }
        }
        out
    }

    pub fn formula_pats(side: &[Item]) -> Vec<&Pat> {
        side.iter()
            .filter_map(|i| match i {
                Item::F(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    pub fn ctx_vars(side: &[Item]) -> Vec<usize> {
        side.iter()
            .filter_map(|i| match i {
                Item::Ctx(v) => Some(*v),
                _ => None,
            })
            .collect()
    }

    pub fn box_ctx_vars(side: &[Item]) -> Vec<usize> {
        side.iter()
            .filter_map(|i| match i {
                Item::BoxCtx(v) => Some(*v),
                _ => None,
            })
            .collect()
    }
}

/// An axiom (no premises) or a rule of a calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: String,
    pub premises: Vec<MetaSequent>,
    pub conclusion: MetaSequent,
    pub vars: Vars,
}

impl RuleSchema {
    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// Premise metavariables that do not occur in the conclusion.
    pub fn fresh_premise_vars(&self) -> Vec<usize> {
        let concl = self.conclusion.vars();
        let mut out = BTreeSet::new();
        for p in &self.premises {
            for v in p.vars() {
                if !concl.contains(&v) {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }
}
