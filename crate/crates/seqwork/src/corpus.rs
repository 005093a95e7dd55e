//! Exhaustive and seeded-random generation of formulas and sequents.
//!
//! Exhaustive output is in canonical order: by weight, then by the formula
//! order (multisets are sorted; sequents by antecedent weight, then bags).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formula::Formula;
use crate::multiset::{FMultiset, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub atoms: Vec<String>,
    /// ⊤ and ⊥ as leaves.
    pub constants: bool,
    /// Only ⊥ as an extra leaf (gives negations without ⊤).
    pub bottom: bool,
    pub boxes: bool,
    pub circles: bool,
}

pub const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

impl Space {
    /// The first `n` of `p, q, r, s, t, u`.
    pub fn atoms(n: usize) -> Space {
        assert!(n <= ATOM_NAMES.len());
        Space { atoms: ATOM_NAMES[..n].iter().map(|s| s.to_string()).collect(), constants: false, bottom: false, boxes: false, circles: false }
    }
    pub fn with_constants(mut self) -> Space {
        self.constants = true;
        self
    }
    pub fn with_bottom(mut self) -> Space {
        self.bottom = true;
        self
    }
    pub fn with_box(mut self) -> Space {
        self.boxes = true;
        self
    }
    pub fn with_circle(mut self) -> Space {
        self.circles = true;
        self
    }

    fn leaves(&self) -> Vec<Formula> {
        let mut v: Vec<Formula> = self.atoms.iter().map(|a| Formula::atom(a)).collect();
        if self.constants {
            v.push(Formula::top());
        }
        if self.constants || self.bottom {
            v.push(Formula::bot());
        }
        v.sort();
        v
    }
}

/// `out[w]` = all formulas of weight exactly `w`, sorted.
pub fn formulas_by_weight(space: &Space, max_w: u32) -> Vec<Vec<Formula>> {
    let max_w = max_w as usize;
    let mut out: Vec<Vec<Formula>> = vec![Vec::new(); max_w + 1];
    if max_w == 0 {
        return out;
    }
    out[1] = space.leaves();
    for w in 2..=max_w {
        let mut cur = Vec::new();
        if space.boxes {
            cur.extend(out[w - 1].iter().map(|f| Formula::boxed(f.clone())));
        }
        if space.circles {
            cur.extend(out[w - 1].iter().map(|f| Formula::circle(f.clone())));
        }
        for a in 1..w {
            if w - 1 > a {
                let b = w - 1 - a;
                for x in &out[a] {
                    for y in &out[b] {
                        cur.push(Formula::or(x.clone(), y.clone()));
                        cur.push(Formula::imp(x.clone(), y.clone()));
                    }
                }
            }
            if w >= a + 3 {
                let b = w - 2 - a;
                for x in &out[a] {
                    for y in &out[b] {
                        cur.push(Formula::and(x.clone(), y.clone()));
                    }
                }
            }
        }
        cur.sort();
        out[w] = cur;
    }
    out
}

/// All formulas of weight `1..=max_w` in canonical order.
pub fn formulas(space: &Space, max_w: u32) -> Vec<Formula> {
    formulas_by_weight(space, max_w).into_iter().flatten().collect()
}

/// `out[w]` = all multisets of total weight exactly `w` (the empty bag at 0).
pub fn bags_by_weight(by_weight: &[Vec<Formula>], max_w: u32) -> Vec<Vec<FMultiset>> {
    let flat: Vec<&Formula> = by_weight.iter().flatten().collect();
    let max_w = max_w as usize;
    let mut out: Vec<Vec<FMultiset>> = vec![Vec::new(); max_w + 1];
    let mut cur = Vec::new();
    fn go(flat: &[&Formula], start: usize, left: usize, total: usize, cur: &mut Vec<Formula>, out: &mut Vec<Vec<FMultiset>>) {
        out[total].push(FMultiset::from_vec(cur.clone()));
        for i in start..flat.len() {
            let w = flat[i].weight() as usize;
            if w > left {
                break;
            }
            cur.push(flat[i].clone());
            go(flat, i, left - w, total + w, cur, out);
            cur.pop();
        }
    }
    go(&flat, 0, max_w, 0, &mut cur, &mut out);
    for v in &mut out {
        v.sort();
    }
    out
}

/// Every sequent of combined weight `0..=max_w` (so `=>` comes first), calling `f` on each; with
/// `single` only sequents with at most one succedent formula.
pub fn for_each_sequent(space: &Space, max_w: u32, single: bool, mut f: impl FnMut(Sequent)) {
    let by_w = formulas_by_weight(space, max_w);
    let bags = bags_by_weight(&by_w, max_w);
    for total in 0..=max_w as usize {
        for a in 0..=total {
            let s = total - a;
            if single {
                let mut sucs: Vec<FMultiset> = vec![];
                if s == 0 {
                    sucs.push(FMultiset::new());
                } else if s < by_w.len() {
                    sucs.extend(by_w[s].iter().map(|x| FMultiset::from_vec(vec![x.clone()])));
                }
                for ant in &bags[a] {
                    for suc in &sucs {
                        f(Sequent::new(ant.clone(), suc.clone()));
                    }
                }
            } else {
                for ant in &bags[a] {
                    for suc in &bags[s] {
                        f(Sequent::new(ant.clone(), suc.clone()));
                    }
                }
            }
        }
    }
}

pub fn sequents(space: &Space, max_w: u32, single: bool) -> Vec<Sequent> {
    let mut v = Vec::new();
    for_each_sequent(space, max_w, single, |s| v.push(s));
    v
}

/// Seeded random formula of weight at most `max_w` (at least 1).
pub fn random_formula(space: &Space, rng: &mut impl Rng, max_w: u32) -> Formula {
    let leaves = space.leaves();
    fn go(space: &Space, leaves: &[Formula], rng: &mut impl Rng, budget: u32) -> Formula {
        if budget <= 2 || rng.gen_bool(0.25) {
            if budget >= 2 && (space.boxes || space.circles) && rng.gen_bool(0.2) {
                let inner = go(space, leaves, rng, budget - 1);
                return if space.boxes && (!space.circles || rng.gen_bool(0.5)) { Formula::boxed(inner) } else { Formula::circle(inner) };
            }
            return leaves[rng.gen_range(0..leaves.len())].clone();
        }
        let op = rng.gen_range(0..3);
        let cost = if op == 0 { 2 } else { 1 };
        if budget < cost + 2 {
            return leaves[rng.gen_range(0..leaves.len())].clone();
        }
        let left_budget = rng.gen_range(1..=budget - cost - 1);
        let a = go(space, leaves, rng, left_budget);
        let b = go(space, leaves, rng, budget - cost - a.weight());
        match op {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            _ => Formula::imp(a, b),
        }
    }
    go(space, &leaves, rng, max_w.max(1))
}

/// `count` seeded random sequents of combined weight at most `max_w`.
pub fn random_sequents(space: &Space, seed: u64, count: usize, max_w: u32, single: bool) -> Vec<Sequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut budget = rng.gen_range(1..=max_w.max(1));
        let mut ant = Vec::new();
        let mut suc = Vec::new();
        while budget > 0 {
            let f = random_formula(space, &mut rng, budget);
            budget -= f.weight().min(budget);
            let to_suc = rng.gen_bool(0.4) && (!single || suc.is_empty());
            if to_suc {
                suc.push(f);
            } else {
                ant.push(f);
            }
        }
        out.push(Sequent::from_vecs(ant, suc));
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
