//! Propositional formulas with optional `[]` and `O` modalities.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Complexity measure used by the multiset orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Atom(Arc<str>),
    Top,
    Bot,
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Box(Formula),
    Circle(Formula),
}

struct Node {
    kind: Kind,
    weight: u32,
    degree: u32,
    hash: u64,
}

/// Immutable, cheaply clonable formula tree.
///
/// Equality is structural. The total order is by weight first, then by a
/// fixed structural comparison; sorted multisets and interpretations rely on it.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

fn mix(a: u64, b: u64) -> u64 {
    // splitmix-style combiner, deterministic across runs
    let mut z = a ^ b.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(a << 6).wrapping_add(a >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn str_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

impl Formula {
    fn make(kind: Kind) -> Formula {
        let (weight, degree, hash) = match &kind {
            Kind::Atom(n) => (1, 1, mix(1, str_hash(n))),
            Kind::Top => (1, 0, 2),
            Kind::Bot => (1, 0, 3),
            Kind::And(a, b) => (a.weight() + b.weight() + 2, a.degree() + b.degree() + 1, mix(mix(4, a.0.hash), b.0.hash)),
            Kind::Or(a, b) => (a.weight() + b.weight() + 1, a.degree() + b.degree() + 1, mix(mix(5, a.0.hash), b.0.hash)),
            Kind::Imp(a, b) => (a.weight() + b.weight() + 1, a.degree() + b.degree() + 1, mix(mix(6, a.0.hash), b.0.hash)),
            Kind::Box(a) => (a.weight() + 1, a.degree() + 1, mix(7, a.0.hash)),
            Kind::Circle(a) => (a.weight() + 1, a.degree() + 1, mix(8, a.0.hash)),
        };
        Formula(Arc::new(Node { kind, weight, degree, hash }))
    }

    pub fn atom(name: &str) -> Formula {
        Formula::make(Kind::Atom(Arc::from(name)))
    }
    pub fn top() -> Formula {
        thread_local!(static TOP: Formula = Formula::make(Kind::Top));
        TOP.with(|t| t.clone())
    }
    pub fn bot() -> Formula {
        thread_local!(static BOT: Formula = Formula::make(Kind::Bot));
        BOT.with(|t| t.clone())
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::And(a, b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Or(a, b))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::make(Kind::Imp(a, b))
    }
    pub fn boxed(a: Formula) -> Formula {
        Formula::make(Kind::Box(a))
    }
    pub fn circle(a: Formula) -> Formula {
        Formula::make(Kind::Circle(a))
    }
    /// `~a`, i.e. `a -> false`.
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::bot())
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }
    pub fn weight(&self) -> u32 {
        self.0.weight
    }
    pub fn degree(&self) -> u32 {
        self.0.degree
    }
    pub fn measure(&self, m: Measure) -> u32 {
        match m {
            Measure::Degree => self.degree(),
            Measure::Weight => self.weight(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.kind(), Kind::Atom(_))
    }
    pub fn atom_name(&self) -> Option<&str> {
        match self.kind() {
            Kind::Atom(n) => Some(n),
            _ => None,
        }
    }
    pub fn is_bot(&self) -> bool {
        matches!(self.kind(), Kind::Bot)
    }
    pub fn is_top(&self) -> bool {
        matches!(self.kind(), Kind::Top)
    }
    /// Neither an atom nor a constant.
    pub fn is_compound(&self) -> bool {
        !matches!(self.kind(), Kind::Atom(_) | Kind::Top | Kind::Bot)
    }
    pub fn is_modal_free(&self) -> bool {
        match self.kind() {
            Kind::Atom(_) | Kind::Top | Kind::Bot => true,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => a.is_modal_free() && b.is_modal_free(),
            Kind::Box(_) | Kind::Circle(_) => false,
        }
    }

    fn rank(&self) -> u8 {
        match self.kind() {
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

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self.kind() {
            Kind::Atom(n) => {
                if !out.contains(&**n) {
                    out.insert(n.to_string());
                }
            }
            Kind::Top | Kind::Bot => {}
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Kind::Box(a) | Kind::Circle(a) => a.collect_atoms(out),
        }
    }

    pub fn contains_atom(&self, p: &str) -> bool {
        match self.kind() {
            Kind::Atom(n) => &**n == p,
            Kind::Top | Kind::Bot => false,
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => a.contains_atom(p) || b.contains_atom(p),
            Kind::Box(a) | Kind::Circle(a) => a.contains_atom(p),
        }
    }

    /// Positive and negative atom occurrences; the antecedent of `->` flips.
    pub fn polarity_atoms(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut pos = BTreeSet::new();
        let mut neg = BTreeSet::new();
        self.polarity_walk(true, &mut pos, &mut neg);
        (pos, neg)
    }

    fn polarity_walk(&self, positive: bool, pos: &mut BTreeSet<String>, neg: &mut BTreeSet<String>) {
        match self.kind() {
            Kind::Atom(n) => {
                if positive {
                    pos.insert(n.to_string());
                } else {
                    neg.insert(n.to_string());
                }
            }
            Kind::Top | Kind::Bot => {}
            Kind::And(a, b) | Kind::Or(a, b) => {
                a.polarity_walk(positive, pos, neg);
                b.polarity_walk(positive, pos, neg);
            }
            Kind::Imp(a, b) => {
                a.polarity_walk(!positive, pos, neg);
                b.polarity_walk(positive, pos, neg);
            }
            Kind::Box(a) | Kind::Circle(a) => a.polarity_walk(positive, pos, neg),
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        out.insert(self.clone());
        match self.kind() {
            Kind::Atom(_) | Kind::Top | Kind::Bot => {}
            Kind::And(a, b) | Kind::Or(a, b) | Kind::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            Kind::Box(a) | Kind::Circle(a) => a.collect_subformulas(out),
        }
    }

    /// Replace every occurrence of atom `p` by `by`.
    pub fn replace_atom(&self, p: &str, by: &Formula) -> Formula {
        if !self.contains_atom(p) {
            return self.clone();
        }
        match self.kind() {
            Kind::Atom(_) => by.clone(),
            Kind::Top | Kind::Bot => self.clone(),
            Kind::And(a, b) => Formula::and(a.replace_atom(p, by), b.replace_atom(p, by)),
            Kind::Or(a, b) => Formula::or(a.replace_atom(p, by), b.replace_atom(p, by)),
            Kind::Imp(a, b) => Formula::imp(a.replace_atom(p, by), b.replace_atom(p, by)),
            Kind::Box(a) => Formula::boxed(a.replace_atom(p, by)),
            Kind::Circle(a) => Formula::circle(a.replace_atom(p, by)),
        }
    }

    /// Classical truth value; `[]` and `O` are read as the identity.
    pub fn eval(&self, val: &dyn Fn(&str) -> bool) -> bool {
        match self.kind() {
            Kind::Atom(n) => val(n),
            Kind::Top => true,
            Kind::Bot => false,
            Kind::And(a, b) => a.eval(val) && b.eval(val),
            Kind::Or(a, b) => a.eval(val) || b.eval(val),
            Kind::Imp(a, b) => !a.eval(val) || b.eval(val),
            Kind::Box(a) | Kind::Circle(a) => a.eval(val),
        }
    }
}

/// Left fold of `&` over the formulas in canonical order; empty gives `true`.
pub fn big_and<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
    let mut v: Vec<Formula> = fs.into_iter().collect();
    v.sort();
    let mut it = v.into_iter();
    match it.next() {
        None => Formula::top(),
        Some(first) => it.fold(first, Formula::and),
    }
}

/// Left fold of `|` over the formulas in canonical order; empty gives `false`.
pub fn big_or<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
    let mut v: Vec<Formula> = fs.into_iter().collect();
    v.sort();
    let mut it = v.into_iter();
    match it.next() {
        None => Formula::bot(),
        Some(first) => it.fold(first, Formula::or),
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.weight == other.0.weight && self.0.kind == other.0.kind)
    }
}
impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Formula) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| match (self.kind(), other.kind()) {
                (Kind::Atom(a), Kind::Atom(b)) => a.cmp(b),
                (Kind::And(a1, b1), Kind::And(a2, b2))
                | (Kind::Or(a1, b1), Kind::Or(a2, b2))
                | (Kind::Imp(a1, b1), Kind::Imp(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
                (Kind::Box(a), Kind::Box(b)) | (Kind::Circle(a), Kind::Circle(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}
impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Formula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::render_formula(self))
    }
}
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::render_formula(self))
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::syntax::render_formula(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Formula, D::Error> {
        let s = String::deserialize(d)?;
        crate::syntax::parse_formula(&s).map_err(serde::de::Error::custom)
    }
}

/// Map from atom names to formulas; atoms outside the domain are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(pub BTreeMap<String, Formula>);

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }
    pub fn with(mut self, p: &str, f: Formula) -> Substitution {
        self.0.insert(p.to_string(), f);
        self
    }
    pub fn get(&self, p: &str) -> Option<&Formula> {
        self.0.get(p)
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        if self.0.is_empty() {
            return f.clone();
        }
        match f.kind() {
            Kind::Atom(n) => self.0.get(&**n).cloned().unwrap_or_else(|| f.clone()),
            Kind::Top | Kind::Bot => f.clone(),
            Kind::And(a, b) => Formula::and(self.apply(a), self.apply(b)),
            Kind::Or(a, b) => Formula::or(self.apply(a), self.apply(b)),
            Kind::Imp(a, b) => Formula::imp(self.apply(a), self.apply(b)),
            Kind::Box(a) => Formula::boxed(self.apply(a)),
            Kind::Circle(a) => Formula::circle(self.apply(a)),
        }
    }
}

pub fn apply_subst(s: &Substitution, f: &Formula) -> Formula {
    s.apply(f)
}

/// First identifier in shortlex order (`a`, ..., `z`, `aa`, `ab`, ...) not in `used`.
pub fn fresh_atom(used: &BTreeSet<String>) -> String {
    (0u64..)
        .map(|mut n| {
            let mut s = Vec::new();
            loop {
                s.push(b'a' + (n % 26) as u8);
                if n < 26 {
                    break;
                }
                n = n / 26 - 1;
            }
            s.reverse();
            String::from_utf8(s).unwrap()
        })
        .find(|name| !used.contains(name))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn measures() {
        assert_eq!(Formula::bot().degree(), 0);
        assert_eq!(Formula::and(p(), q()).degree(), 3);
        assert_eq!(Formula::boxed(Formula::not(p())).degree(), 3);
        assert_eq!(Formula::or(p(), q()).weight(), 3);
        assert_eq!(Formula::and(p(), q()).weight(), 4);
        assert_eq!(Formula::circle(p()).weight(), 2);
    }

    #[test]
    fn polarity() {
        let (pos, neg) = Formula::imp(Formula::imp(p(), q()), Formula::atom("r")).polarity_atoms();
        assert_eq!(pos, ["p", "r"].iter().map(|s| s.to_string()).collect());
        assert_eq!(neg, ["q"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn fresh() {
        let used: BTreeSet<String> = ["a", "b", "p"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_atom(&used), "c");
        let all: BTreeSet<String> = (b'a'..=b'z').map(|c| (c as char).to_string()).collect();
        assert_eq!(fresh_atom(&all), "aa");
    }

    #[test]
    fn substitution() {
        let s = Substitution::new().with("p", Formula::and(q(), Formula::atom("r")));
        let f = Formula::imp(p(), p());
        let qr = Formula::and(q(), Formula::atom("r"));
        assert_eq!(s.apply(&f), Formula::imp(qr.clone(), qr));
        let s = Substitution::new().with("p", Formula::bot());
        assert_eq!(s.apply(&Formula::not(p())), Formula::imp(Formula::bot(), Formula::bot()));
    }
}
