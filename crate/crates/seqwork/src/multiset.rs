//! Multisets of formulas, sequents, partitions and the multiset orders.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{big_and, big_or, Formula, Measure};

/// Bag of formulas, kept sorted in canonical order so that equality and
/// hashing ignore insertion order but respect multiplicity.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FMultiset {
    items: Vec<Formula>,
}

impl FMultiset {
    pub fn new() -> FMultiset {
        FMultiset::default()
    }

    pub fn from_vec(mut items: Vec<Formula>) -> FMultiset {
        items.sort();
        FMultiset { items }
    }

    pub(crate) fn from_sorted(items: Vec<Formula>) -> FMultiset {
        debug_assert!(items.windows(2).all(|w| w[0] <= w[1]));
        FMultiset { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.items.iter()
    }
    pub fn as_slice(&self) -> &[Formula] {
        &self.items
    }
    pub fn into_vec(self) -> Vec<Formula> {
        self.items
    }

    pub fn insert(&mut self, f: Formula) {
        let pos = self.items.partition_point(|x| *x < f);
        self.items.insert(pos, f);
    }

    pub fn with(mut self, f: Formula) -> FMultiset {
        self.insert(f);
        self
    }

    /// Remove one occurrence; false if absent.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.items.binary_search(f) {
            Ok(i) => {
                self.items.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn without(&self, f: &Formula) -> FMultiset {
        let mut m = self.clone();
        m.remove_one(f);
        m
    }

    pub fn count(&self, f: &Formula) -> usize {
        let lo = self.items.partition_point(|x| x < f);
        let hi = self.items.partition_point(|x| x <= f);
        hi - lo
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.items.binary_search(f).is_ok()
    }

    pub fn union(&self, other: &FMultiset) -> FMultiset {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            if self.items[i] <= other.items[j] {
                out.push(self.items[i].clone());
                i += 1;
            } else {
                out.push(other.items[j].clone());
                j += 1;
            }
        }
        out.extend_from_slice(&self.items[i..]);
        out.extend_from_slice(&other.items[j..]);
        FMultiset { items: out }
    }

    /// Multiset difference `self - other`.
    pub fn difference(&self, other: &FMultiset) -> FMultiset {
        let mut out = Vec::new();
        let mut j = 0;
        for f in &self.items {
            while j < other.items.len() && other.items[j] < *f {
                j += 1;
            }
            if j < other.items.len() && other.items[j] == *f {
                j += 1;
            } else {
                out.push(f.clone());
            }
        }
        FMultiset { items: out }
    }

    /// `other` is contained in `self`, multiplicities included.
    pub fn contains_all(&self, other: &FMultiset) -> bool {
        other.difference(self).is_empty()
    }

    /// Distinct elements in canonical order.
    pub fn distinct(&self) -> Vec<Formula> {
        let mut v = self.items.clone();
        v.dedup();
        v
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in &self.items {
            f.collect_atoms(&mut out);
        }
        out
    }

    pub fn weight(&self) -> u32 {
        self.items.iter().map(Formula::weight).sum()
    }

    /// Same underlying set, multiplicities ignored.
    pub fn same_support(&self, other: &FMultiset) -> bool {
        let mut a = self.items.iter().peekable();
        let mut b = other.items.iter().peekable();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return true,
                (Some(x), Some(y)) => {
                    if x != y {
                        return false;
                    }
                    while a.peek() == Some(&x) {
                        a.next();
                    }
                    while b.peek() == Some(&y) {
                        b.next();
                    }
                }
                _ => return false,
            }
        }
    }
}

impl FromIterator<Formula> for FMultiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(it: I) -> FMultiset {
        FMultiset::from_vec(it.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FMultiset {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl fmt::Debug for FMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ant: FMultiset,
    pub suc: FMultiset,
}

impl Sequent {
    pub fn new(ant: FMultiset, suc: FMultiset) -> Sequent {
        Sequent { ant, suc }
    }

    pub fn from_vecs(ant: Vec<Formula>, suc: Vec<Formula>) -> Sequent {
        Sequent::new(FMultiset::from_vec(ant), FMultiset::from_vec(suc))
    }

    /// `=> f`
    pub fn goal(f: Formula) -> Sequent {
        Sequent::from_vecs(vec![], vec![f])
    }

    pub fn is_single(&self) -> bool {
        self.suc.len() <= 1
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut a = self.ant.atoms();
        a.extend(self.suc.atoms());
        a
    }

    /// Sum of the weights of all formula occurrences.
    pub fn weight(&self) -> u32 {
        self.ant.weight() + self.suc.weight()
    }

    pub fn len(&self) -> usize {
        self.ant.len() + self.suc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ant.is_empty() && self.suc.is_empty()
    }

    /// Componentwise union, written `S1 . S2`.
    pub fn mul(&self, other: &Sequent) -> Sequent {
        Sequent::new(self.ant.union(&other.ant), self.suc.union(&other.suc))
    }

    pub fn contains_atom(&self, p: &str) -> bool {
        self.ant.iter().chain(self.suc.iter()).any(|f| f.contains_atom(p))
    }

    pub fn all_formulas(&self) -> FMultiset {
        self.ant.union(&self.suc)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::render_sequent(self))
    }
}
impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::render_sequent(self))
    }
}

impl Serialize for Sequent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::syntax::render_sequent(self))
    }
}

impl<'de> Deserialize<'de> for Sequent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Sequent, D::Error> {
        let s = String::deserialize(d)?;
        crate::syntax::parse_sequent(&s).map_err(serde::de::Error::custom)
    }
}

/// A sequent with its parts split for interpolation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PartitionedSequent {
    /// `g ; pi => delta`
    SplitAnt { g: FMultiset, pi: FMultiset, delta: FMultiset },
    /// `(rest, interp)` with `rest . interp` the whole sequent.
    RestInterp { rest: Sequent, interp: Sequent },
}

impl PartitionedSequent {
    pub fn split(g: FMultiset, pi: FMultiset, delta: FMultiset) -> PartitionedSequent {
        PartitionedSequent::SplitAnt { g, pi, delta }
    }

    pub fn underlying(&self) -> Sequent {
        match self {
            PartitionedSequent::SplitAnt { g, pi, delta } => Sequent::new(g.union(pi), delta.clone()),
            PartitionedSequent::RestInterp { rest, interp } => rest.mul(interp),
        }
    }
}

impl Serialize for PartitionedSequent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for PartitionedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::syntax::render_list;
        match self {
            PartitionedSequent::SplitAnt { g, pi, delta } => {
                write!(f, "{} ; {} => {}", render_list(g), render_list(pi), render_list(delta))
            }
            PartitionedSequent::RestInterp { rest, interp } => write!(f, "({rest}) . ({interp})"),
        }
    }
}

/// Dershowitz-Manna order on bags induced by the measure: `a` comes from `b`
/// by replacing one or more formulas with formulas of strictly smaller measure.
pub fn multiset_less(a: &FMultiset, b: &FMultiset, m: Measure) -> bool {
    let x = b.difference(a);
    if x.is_empty() {
        return false;
    }
    let y = a.difference(b);
    let top = x.iter().map(|f| f.measure(m)).max().unwrap_or(0);
    y.iter().all(|f| f.measure(m) < top)
}

pub fn sequent_less(s1: &Sequent, s2: &Sequent, m: Measure) -> bool {
    multiset_less(&s1.all_formulas(), &s2.all_formulas(), m)
}

/// `/\ant -> \/suc`, folds in canonical order, empty conjunction `true`,
/// empty disjunction `false`.
pub fn interpret(s: &Sequent) -> Formula {
    Formula::imp(big_and(s.ant.iter().cloned()), big_or(s.suc.iter().cloned()))
}
