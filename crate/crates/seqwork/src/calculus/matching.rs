//! Matching meta-sequents against concrete sequents.

use crate::formula::{Formula, Kind};
use crate::multiset::{FMultiset, Sequent};

use super::pattern::{formula_head, Item, MetaSequent, Pat, VarKind, Vars};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Formula(Formula),
    Multiset(FMultiset),
}

/// Partial assignment indexed like the rule's [`Vars`].
pub type Env = Vec<Option<Binding>>;

#[derive(Clone, Copy, Debug, Default)]
pub struct MatchOptions {
    /// Choose principal formulas by value instead of by occurrence.
    pub distinct: bool,
    /// Boxed multiset variables take every boxed formula of the remainder.
    pub maximal_box: bool,
}

impl MatchOptions {
    pub const ALL: MatchOptions = MatchOptions { distinct: false, maximal_box: false };
    pub const SEARCH: MatchOptions = MatchOptions { distinct: true, maximal_box: true };
}

fn bind_formula(env: &mut Env, trail: &mut Vec<usize>, v: usize, f: &Formula) -> bool {
    match &env[v] {
        Some(Binding::Formula(g)) => g == f,
        Some(Binding::Multiset(_)) => false,
        None => {
            env[v] = Some(Binding::Formula(f.clone()));
            trail.push(v);
            true
        }
    }
}

/// Structural match of `p` against `f`, extending `env`. New bindings are
/// pushed on `trail`; on failure the caller undoes them.
pub(crate) fn match_pat(p: &Pat, f: &Formula, vars: &Vars, env: &mut Env, trail: &mut Vec<usize>) -> bool {
    match (p, f.kind()) {
        (Pat::Meta(v), _) => bind_formula(env, trail, *v, f),
        (Pat::AtomMeta(v), Kind::Atom(_)) => {
            debug_assert_eq!(vars.kinds[*v], VarKind::Atom);
            bind_formula(env, trail, *v, f)
        }
        (Pat::AtomMeta(_), _) => false,
        (Pat::Atom(a), Kind::Atom(b)) => a == b,
        (Pat::Top, Kind::Top) | (Pat::Bot, Kind::Bot) => true,
        (Pat::And(a, b), Kind::And(x, y)) | (Pat::Or(a, b), Kind::Or(x, y)) | (Pat::Imp(a, b), Kind::Imp(x, y)) => {
            match_pat(a, x, vars, env, trail) && match_pat(b, y, vars, env, trail)
        }
        (Pat::Box(a), Kind::Box(x)) | (Pat::Circle(a), Kind::Circle(x)) => match_pat(a, x, vars, env, trail),
        _ => false,
    }
}

fn undo(env: &mut Env, trail: &mut Vec<usize>, mark: usize) {
    while trail.len() > mark {
        let v = trail.pop().unwrap();
        env[v] = None;
    }
}

pub(crate) fn instantiate_pat(p: &Pat, env: &Env) -> Option<Formula> {
    Some(match p {
        Pat::Atom(a) => Formula::atom(a),
        Pat::Top => Formula::top(),
        Pat::Bot => Formula::bot(),
        Pat::And(a, b) => Formula::and(instantiate_pat(a, env)?, instantiate_pat(b, env)?),
        Pat::Or(a, b) => Formula::or(instantiate_pat(a, env)?, instantiate_pat(b, env)?),
        Pat::Imp(a, b) => Formula::imp(instantiate_pat(a, env)?, instantiate_pat(b, env)?),
        Pat::Box(a) => Formula::boxed(instantiate_pat(a, env)?),
        Pat::Circle(a) => Formula::circle(instantiate_pat(a, env)?),
        Pat::Meta(v) | Pat::AtomMeta(v) => match env[*v].as_ref()? {
            Binding::Formula(f) => f.clone(),
            Binding::Multiset(_) => return None,
        },
    })
}

fn instantiate_side(items: &[Item], env: &Env) -> Option<FMultiset> {
    let mut out = Vec::new();
    for it in items {
        match it {
            Item::F(p) => out.push(instantiate_pat(p, env)?),
            Item::Ctx(v) => match env[*v].as_ref()? {
                Binding::Multiset(m) => out.extend(m.iter().cloned()),
                Binding::Formula(_) => return None,
            },
            Item::BoxCtx(v) => match env[*v].as_ref()? {
                Binding::Multiset(m) => out.extend(m.iter().map(|f| Formula::boxed(f.clone()))),
                Binding::Formula(_) => return None,
            },
        }
    }
    Some(FMultiset::from_vec(out))
}

/// Sequent denoted by `m` under `env`; `None` if a variable is unbound.
pub fn instantiate(m: &MetaSequent, env: &Env) -> Option<Sequent> {
    Some(Sequent::new(instantiate_side(&m.ant, env)?, instantiate_side(&m.suc, env)?))
}

struct Side<'a> {
    pats: Vec<&'a Pat>,
    ctx: Option<usize>,
    box_ctx: Option<usize>,
}

fn side_of(items: &[Item]) -> Side<'_> {
    let mut s = Side { pats: Vec::new(), ctx: None, box_ctx: None };
    for it in items {
        match it {
            Item::F(p) => s.pats.push(p),
            Item::Ctx(v) => s.ctx = Some(*v),
            Item::BoxCtx(v) => s.box_ctx = Some(*v),
        }
    }
    // Patterns with a fixed head first: they prune fastest.
    s.pats.sort_by_key(|p| p.is_var());
    s
}

struct Matcher<'a> {
    vars: &'a Vars,
    opts: MatchOptions,
    sides: [Side<'a>; 2],
    formulas: [&'a [Formula]; 2],
}

impl Matcher<'_> {
    fn run(&self, side: usize, k: usize, used: &mut [Vec<bool>; 2], env: &mut Env, trail: &mut Vec<usize>, out: &mut dyn FnMut(&Env) -> bool) -> bool {
        if side == 2 {
            return self.contexts(0, used, env, trail, out);
        }
        let s = &self.sides[side];
        if k == s.pats.len() {
            return self.run(side + 1, 0, used, env, trail, out);
        }
        let p = s.pats[k];
        let head = p.head();
        let fs = self.formulas[side];
        for i in 0..fs.len() {
            if used[side][i] {
                continue;
            }
            if self.opts.distinct && i > 0 && !used[side][i - 1] && fs[i - 1] == fs[i] {
                continue;
            }
            if let Some(h) = head {
                if formula_head(&fs[i]) != h {
                    continue;
                }
            }
            let mark = trail.len();
            if match_pat(p, &fs[i], self.vars, env, trail) {
                used[side][i] = true;
                let stop = self.run(side, k + 1, used, env, trail, out);
                used[side][i] = false;
                if stop {
                    undo(env, trail, mark);
                    return true;
                }
            }
            undo(env, trail, mark);
        }
        false
    }

    fn bind_ms(env: &mut Env, trail: &mut Vec<usize>, v: usize, m: FMultiset) -> bool {
        match &env[v] {
            Some(Binding::Multiset(x)) => *x == m,
            Some(Binding::Formula(_)) => false,
            None => {
                env[v] = Some(Binding::Multiset(m));
                trail.push(v);
                true
            }
        }
    }

    fn contexts(&self, side: usize, used: &mut [Vec<bool>; 2], env: &mut Env, trail: &mut Vec<usize>, out: &mut dyn FnMut(&Env) -> bool) -> bool {
        if side == 2 {
            return out(env);
        }
        let s = &self.sides[side];
        let rest: Vec<Formula> = self.formulas[side].iter().zip(&used[side]).filter(|(_, u)| !**u).map(|(f, _)| f.clone()).collect();
        let mark = trail.len();
        match (s.ctx, s.box_ctx) {
            (None, None) => {
                if rest.is_empty() {
                    let stop = self.contexts(side + 1, used, env, trail, out);
                    undo(env, trail, mark);
                    return stop;
                }
                false
            }
            (Some(c), None) => {
                let stop = Self::bind_ms(env, trail, c, FMultiset::from_sorted(rest)) && self.contexts(side + 1, used, env, trail, out);
                undo(env, trail, mark);
                stop
            }
            (c, Some(b)) => {
                let (boxed, plain): (Vec<Formula>, Vec<Formula>) = rest.into_iter().partition(|f| matches!(f.kind(), Kind::Box(_)));
                if c.is_none() && !plain.is_empty() {
                    return false;
                }
                let choices: Vec<(Vec<Formula>, Vec<Formula>)> = if self.opts.maximal_box || c.is_none() {
                    vec![(boxed, Vec::new())]
                } else {
                    sub_bags(&boxed)
                };
                for (taken, left) in choices {
                    let inner = FMultiset::from_vec(
                        taken
                            .iter()
                            .map(|f| match f.kind() {
                                Kind::Box(x) => x.clone(),
                                _ => unreachable!(),
                            })
                            .collect(),
                    );
                    let mut ok = Self::bind_ms(env, trail, b, inner);
                    if ok {
                        if let Some(c) = c {
                            let mut r = plain.clone();
                            r.extend(left);
                            ok = Self::bind_ms(env, trail, c, FMultiset::from_vec(r));
                        }
                    }
                    if ok && self.contexts(side + 1, used, env, trail, out) {
                        undo(env, trail, mark);
                        return true;
                    }
                    undo(env, trail, mark);
                }
                false
            }
        }
    }
}

/// All ways to split a sorted bag into (taken, left), distinct as bags.
fn sub_bags(fs: &[Formula]) -> Vec<(Vec<Formula>, Vec<Formula>)> {
    let mut groups: Vec<(Formula, usize)> = Vec::new();
    for f in fs {
        match groups.last_mut() {
            Some((g, n)) if g == f => *n += 1,
            _ => groups.push((f.clone(), 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for (f, n) in groups {
        let mut next = Vec::new();
        for (t, l) in &out {
            for k in 0..=n {
                let mut t2: Vec<Formula> = t.clone();
                let mut l2: Vec<Formula> = l.clone();
                t2.extend(std::iter::repeat(f.clone()).take(k));
                l2.extend(std::iter::repeat(f.clone()).take(n - k));
                next.push((t2, l2));
            }
        }
        out = next;
    }
    out
}

/// Enumerate every assignment under which `m` denotes `s`, extending `env`.
/// `out` returns true to stop the enumeration early.
pub fn match_meta(m: &MetaSequent, vars: &Vars, s: &Sequent, opts: MatchOptions, env: &mut Env, out: &mut dyn FnMut(&Env) -> bool) -> bool {
    // cheap rejection before any allocation: every fixed head must occur
    for (items, fs) in [(&m.ant, s.ant.as_slice()), (&m.suc, s.suc.as_slice())] {
        for it in items {
            let ok = match it {
                Item::F(Pat::AtomMeta(_)) => fs.iter().any(|f| f.is_atom()),
                Item::F(p) => p.head().is_none_or(|h| fs.iter().any(|f| formula_head(f) == h)),
                _ => true,
            };
            if !ok {
                return false;
            }
        }
    }
    let sides = [side_of(&m.ant), side_of(&m.suc)];
    for (i, side) in sides.iter().enumerate() {
        let n = if i == 0 { s.ant.len() } else { s.suc.len() };
        if side.pats.len() > n {
            return false;
        }
        if side.ctx.is_none() && side.box_ctx.is_none() && side.pats.len() != n {
            return false;
        }
    }
    let matcher = Matcher { vars, opts, sides, formulas: [s.ant.as_slice(), s.suc.as_slice()] };
    let mut used = [vec![false; s.ant.len()], vec![false; s.suc.len()]];
    let mut trail = Vec::new();
    matcher.run(0, 0, &mut used, env, &mut trail, out)
}

/// Match `m` against `s` and collect every resulting environment.
pub fn match_all(m: &MetaSequent, vars: &Vars, s: &Sequent, opts: MatchOptions) -> Vec<Env> {
    let mut env: Env = vec![None; vars.len()];
    let mut out = Vec::new();
    match_meta(m, vars, s, opts, &mut env, &mut |e| {
        out.push(e.clone());
        false
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_meta_sequent, parse_sequent};

    fn count(meta: &str, seq: &str, opts: MatchOptions) -> usize {
        let mut vars = Vars::default();
        let m = parse_meta_sequent(meta, &mut vars).unwrap();
        match_all(&m, &vars, &parse_sequent(seq).unwrap(), opts).len()
    }

    #[test]
    fn occurrences_versus_values() {
        assert_eq!(count("G, A -> B => D", "p -> q, p -> q => r", MatchOptions::ALL), 2);
        assert_eq!(count("G, A -> B => D", "p -> q, p -> q => r", MatchOptions::SEARCH), 1);
    }

    #[test]
    fn atom_metavariables() {
        assert_eq!(count("G, p? => p?", "q, p & q => q", MatchOptions::ALL), 1);
        assert_eq!(count("G, p? => p?", "p & q => p & q", MatchOptions::ALL), 0);
        assert_eq!(count("G, p?, p? -> B => D", "p, q, p -> r, q -> r => r", MatchOptions::ALL), 2);
    }

    #[test]
    fn boxed_contexts() {
        assert_eq!(count("P, []G => []A", "[]p, []q, r => []s", MatchOptions::ALL), 4);
        assert_eq!(count("P, []G => []A", "[]p, []q, r => []s", MatchOptions::SEARCH), 1);
        assert_eq!(count("[]G => []A", "[]p, r => []s", MatchOptions::ALL), 0);
    }

    #[test]
    fn instantiation_round_trip() {
        let mut vars = Vars::default();
        let m = parse_meta_sequent("P, []G, []A -> B => D", &mut vars).unwrap();
        let s = parse_sequent("r, []p, []q -> r => s").unwrap();
        for e in match_all(&m, &vars, &s, MatchOptions::ALL) {
            assert_eq!(instantiate(&m, &e).unwrap(), s);
        }
    }
}
