//! Hilbert-style proofs for HJ (intuitionistic) and HK (HJ plus double
//! negation elimination).

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{self, Space};
use crate::formula::{Formula, Kind, Substitution};
use crate::syntax::parse_formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HilbertSystem {
    HJ,
    HK,
}

impl HilbertSystem {
    pub fn parse(s: &str) -> Option<HilbertSystem> {
        match s.to_ascii_uppercase().as_str() {
            "HJ" => Some(HilbertSystem::HJ),
            "HK" => Some(HilbertSystem::HK),
            _ => None,
        }
    }
}

impl fmt::Display for HilbertSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HilbertSystem::HJ => "HJ",
            HilbertSystem::HK => "HK",
        })
    }
}

/// Axiom 1..=9 of HJ, or double negation elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    Ax(u8),
    Dne,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Ax(n) => write!(f, "ax{n}"),
            Axiom::Dne => f.write_str("dne"),
        }
    }
}

// Schema metavariables are uppercase atoms, which object formulas never use.
fn mv(n: &str) -> Formula {
    Formula::atom(n)
}

/// The schema of an axiom over metavariables `A`, `B`, `C`.
pub fn axiom_schema(a: Axiom) -> Formula {
    let (x, y, z) = (mv("A"), mv("B"), mv("C"));
    let imp = Formula::imp;
    match a {
        Axiom::Ax(1) => imp(x.clone(), imp(y, x)),
        Axiom::Ax(2) => imp(imp(x.clone(), imp(y.clone(), z.clone())), imp(imp(x.clone(), y), imp(x, z))),
        Axiom::Ax(3) => imp(x.clone(), Formula::or(x, y)),
        Axiom::Ax(4) => imp(y.clone(), Formula::or(x, y)),
        Axiom::Ax(5) => imp(imp(x.clone(), z.clone()), imp(imp(y.clone(), z.clone()), imp(Formula::or(x, y), z))),
        Axiom::Ax(6) => imp(Formula::and(x.clone(), y), x),
        Axiom::Ax(7) => imp(Formula::and(x, y.clone()), y),
        Axiom::Ax(8) => imp(x.clone(), imp(y.clone(), Formula::and(x, y))),
        Axiom::Ax(9) => imp(Formula::bot(), x),
        Axiom::Dne => imp(Formula::not(Formula::not(x.clone())), x),
        Axiom::Ax(n) => panic!("no axiom {n}"),
    }
}

pub fn axioms(sys: HilbertSystem) -> Vec<Axiom> {
    let mut v: Vec<Axiom> = (1..=9).map(Axiom::Ax).collect();
    if sys == HilbertSystem::HK {
        v.push(Axiom::Dne);
    }
    v
}

fn is_meta(f: &Formula) -> bool {
    f.atom_name().is_some_and(|n| n.chars().all(|c| c.is_ascii_uppercase()))
}

fn match_schema(schema: &Formula, f: &Formula, s: &mut BTreeMap<String, Formula>) -> bool {
    if is_meta(schema) {
        let n = schema.atom_name().unwrap();
        return match s.get(n) {
            Some(g) => g == f,
            None => {
                s.insert(n.to_string(), f.clone());
                true
            }
        };
    }
    match (schema.kind(), f.kind()) {
        (Kind::And(a, b), Kind::And(c, d)) | (Kind::Or(a, b), Kind::Or(c, d)) | (Kind::Imp(a, b), Kind::Imp(c, d)) => {
            match_schema(a, c, s) && match_schema(b, d, s)
        }
        _ => schema == f,
    }
}

/// The substitution making `f` an instance of axiom `a`, if any.
pub fn axiom_match(a: Axiom, f: &Formula) -> Option<Substitution> {
    let mut s = BTreeMap::new();
    match_schema(&axiom_schema(a), f, &mut s).then_some(Substitution(s))
}

/// Instance of axiom `a`; metavariables missing from `s` stay as they are.
pub fn axiom_instance(a: Axiom, s: &Substitution) -> Formula {
    s.apply(&axiom_schema(a))
}

/// Step numbers are 1-based, as printed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Justification {
    Assumption(usize),
    Axiom(Axiom, #[serde(skip)] Substitution),
    /// `MP(j, k)`: step k is `step_j -> current`.
    Mp(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertProof {
    pub system: HilbertSystem,
    pub assumptions: Vec<Formula>,
    pub steps: Vec<(Formula, Justification)>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
#[error("step {step}: {reason}")]
pub struct HilbertDefect {
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HilbertError {
    #[error("invalid input proof: {0}")]
    InvalidInput(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

impl HilbertProof {
    pub fn new(system: HilbertSystem, assumptions: Vec<Formula>) -> HilbertProof {
        HilbertProof { system, assumptions, steps: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|(f, _)| f)
    }

    fn push(&mut self, f: Formula, j: Justification) -> usize {
        self.steps.push((f, j));
        self.steps.len()
    }

    /// Adds an axiom step; panics if `f` is not an instance.
    pub fn axiom(&mut self, a: Axiom, f: Formula) -> usize {
        let s = axiom_match(a, &f).unwrap_or_else(|| panic!("{f} is not an instance of {a}"));
        self.push(f, Justification::Axiom(a, s))
    }

    pub fn assume(&mut self, i: usize) -> usize {
        let f = self.assumptions[i - 1].clone();
        self.push(f, Justification::Assumption(i))
    }

    /// Modus ponens from steps `j` (minor) and `k` (major); panics if `k` is
    /// not an implication.
    pub fn mp(&mut self, j: usize, k: usize) -> usize {
        let f = match self.steps[k - 1].0.kind() {
            Kind::Imp(_, b) => b.clone(),
            _ => panic!("step {k} is not an implication"),
        };
        self.push(f, Justification::Mp(j, k))
    }
}

pub fn check_hilbert(sys: HilbertSystem, p: &HilbertProof) -> Result<(), HilbertDefect> {
    if p.steps.is_empty() {
        return Err(HilbertDefect { step: 0, reason: "empty proof".into() });
    }
    for (i, (f, j)) in p.steps.iter().enumerate() {
        let n = i + 1;
        let bad = |reason: String| Err(HilbertDefect { step: n, reason });
        match j {
            Justification::Assumption(a) => match p.assumptions.get(a.wrapping_sub(1)) {
                Some(g) if g == f => {}
                Some(g) => return bad(format!("assumption {a} is {g}, not {f}")),
                None => return bad(format!("no assumption {a}")),
            },
            Justification::Axiom(a, s) => {
                if *a == Axiom::Dne && sys == HilbertSystem::HJ {
                    return bad("double negation elimination is not an axiom of HJ".into());
                }
                if let Axiom::Ax(k) = a {
                    if !(1..=9).contains(k) {
                        return bad(format!("no axiom {k}"));
                    }
                }
                let ok = if s.0.is_empty() { axiom_match(*a, f).is_some() } else { axiom_instance(*a, s) == *f };
                if !ok {
                    return bad(format!("not an instance of {a}"));
                }
            }
            Justification::Mp(a, b) => {
                if *a == 0 || *b == 0 || *a >= n || *b >= n {
                    return bad(format!("mp cites {a}, {b}; only earlier steps may be used"));
                }
                let want = Formula::imp(p.steps[a - 1].0.clone(), f.clone());
                if p.steps[b - 1].0 != want {
                    return bad(format!("step {b} is not `step {a} -> {f}`"));
                }
            }
        }
    }
    Ok(())
}

/// Γ, φ ⊢ ψ into Γ ⊢ φ → ψ, where φ is assumption `discharge` (1-based).
/// Steps citing φ become `φ → φ` (five steps); other axiom and assumption
/// steps are weakened with axiom 1; modus ponens goes through axiom 2.
pub fn deduction_theorem(p: &HilbertProof, discharge: usize) -> Result<HilbertProof, HilbertError> {
    check_hilbert(p.system, p).map_err(|d| HilbertError::InvalidInput(d.to_string()))?;
    let phi = p
        .assumptions
        .get(discharge.wrapping_sub(1))
        .cloned()
        .ok_or_else(|| HilbertError::InvalidInput(format!("no assumption {discharge}")))?;
    let renumber = |a: usize| if a > discharge { a - 1 } else { a };
    let mut rest = p.assumptions.clone();
    rest.remove(discharge - 1);
    let mut out = HilbertProof::new(p.system, rest);
    let imp = Formula::imp;
    // new step number of `φ → step_i`
    let mut at: Vec<usize> = Vec::with_capacity(p.steps.len());
    for (f, j) in &p.steps {
        let n = match j {
            Justification::Assumption(a) if *a == discharge => identity(&mut out, &phi),
            Justification::Mp(a, b) => {
                let (ja, jb) = (at[a - 1], at[b - 1]);
                let minor = p.steps[a - 1].0.clone();
                let s = out.axiom(Axiom::Ax(2), imp(imp(phi.clone(), imp(minor.clone(), f.clone())), imp(imp(phi.clone(), minor), imp(phi.clone(), f.clone()))));
                let t = out.mp(jb, s);
                out.mp(ja, t)
            }
            other => {
                let k = match other {
                    Justification::Assumption(a) => out.assume(renumber(*a)),
                    Justification::Axiom(a, s) => out.push(f.clone(), Justification::Axiom(*a, s.clone())),
                    Justification::Mp(..) => unreachable!(),
                };
                let w = out.axiom(Axiom::Ax(1), imp(f.clone(), imp(phi.clone(), f.clone())));
                out.mp(k, w)
            }
        };
        at.push(n);
    }
    Ok(out)
}

/// Five-step proof of `φ → φ` appended to `out`; returns its step number.
fn identity(out: &mut HilbertProof, phi: &Formula) -> usize {
    let imp = Formula::imp;
    let pp = imp(phi.clone(), phi.clone());
    let a = out.axiom(Axiom::Ax(1), imp(phi.clone(), imp(pp.clone(), phi.clone())));
    let b = out.axiom(Axiom::Ax(2), imp(imp(phi.clone(), imp(pp.clone(), phi.clone())), imp(imp(phi.clone(), pp.clone()), pp.clone())));
    let c = out.mp(a, b);
    let d = out.axiom(Axiom::Ax(1), imp(phi.clone(), pp));
    out.mp(d, c)
}

/// Proof of `(φ → ψ) → (¬ψ → ¬φ)` in HJ, obtained by discharging the three
/// assumptions of `φ, φ → ψ, ¬ψ ⊢ ⊥`.
pub fn contraposition_lemma(phi: &Formula, psi: &Formula) -> HilbertProof {
    let mut p = HilbertProof::new(HilbertSystem::HJ, vec![Formula::imp(phi.clone(), psi.clone()), Formula::not(psi.clone()), phi.clone()]);
    let a = p.assume(3);
    let b = p.assume(1);
    let c = p.mp(a, b);
    let d = p.assume(2);
    p.mp(c, d);
    let p = deduction_theorem(&p, 3).expect("valid");
    let p = deduction_theorem(&p, 2).expect("valid");
    deduction_theorem(&p, 1).expect("valid")
}

/// Γ, φ ⊢ ψ into Γ, ¬ψ ⊢ ¬φ. φ is assumption `discharge`; ¬ψ is appended as
/// the last assumption.
pub fn contraposition(p: &HilbertProof, discharge: usize) -> Result<HilbertProof, HilbertError> {
    let phi = p
        .assumptions
        .get(discharge.wrapping_sub(1))
        .cloned()
        .ok_or_else(|| HilbertError::InvalidInput(format!("no assumption {discharge}")))?;
    let psi = p.conclusion().cloned().ok_or_else(|| HilbertError::InvalidInput("empty proof".into()))?;
    let mut out = deduction_theorem(p, discharge)?;
    let imp_step = out.steps.len();
    let offset = out.steps.len();
    for (f, j) in contraposition_lemma(&phi, &psi).steps {
        let j = match j {
            Justification::Mp(a, b) => Justification::Mp(a + offset, b + offset),
            Justification::Assumption(_) => unreachable!("lemma has no assumptions"),
            ax => ax,
        };
        out.push(f, j);
    }
    let lemma = out.steps.len();
    let t = out.mp(imp_step, lemma);
    out.assumptions.push(Formula::not(psi));
    let n = out.assumptions.len();
    let a = out.assume(n);
    out.mp(a, t);
    Ok(out)
}

// ---------------------------------------------------------------- text format

/// `.hlp` text:
///
/// ```text
/// system HJ
/// assume p
/// 1. p -> q -> p      by ax1
/// 2. p                by hyp 1
/// 3. q -> p           by mp 2 1
/// ```
pub fn render_hilbert(p: &HilbertProof) -> String {
    let mut s = format!("system {}\n", p.system);
    for a in &p.assumptions {
        s.push_str(&format!("assume {a}\n"));
    }
    for (i, (f, j)) in p.steps.iter().enumerate() {
        let by = match j {
            Justification::Assumption(a) => format!("hyp {a}"),
            Justification::Axiom(a, _) => a.to_string(),
            Justification::Mp(a, b) => format!("mp {a} {b}"),
        };
        s.push_str(&format!("{}. {f}   by {by}\n", i + 1));
    }
    s
}

pub fn parse_hilbert(text: &str) -> Result<HilbertProof, HilbertError> {
    let mut p = HilbertProof::new(HilbertSystem::HJ, Vec::new());
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let bad = |m: String| HilbertError::Format { line, message: m };
        let l = raw.split('#').next().unwrap().trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix("system ") {
            p.system = HilbertSystem::parse(rest.trim()).ok_or_else(|| bad(format!("unknown system `{}`", rest.trim())))?;
            continue;
        }
        if let Some(rest) = l.strip_prefix("assume ") {
            p.assumptions.push(parse_formula(rest).map_err(|e| bad(e.to_string()))?);
            continue;
        }
        let (num, body) = l.split_once('.').ok_or_else(|| bad("expected `N. formula by ...`".into()))?;
        let num: usize = num.trim().parse().map_err(|_| bad(format!("bad step number `{}`", num.trim())))?;
        if num != p.steps.len() + 1 {
            return Err(bad(format!("expected step {}, found {num}", p.steps.len() + 1)));
        }
        let (f, by) = body.rsplit_once(" by ").ok_or_else(|| bad("missing `by`".into()))?;
        let f = parse_formula(f.trim()).map_err(|e| bad(e.to_string()))?;
        let words: Vec<&str> = by.split_whitespace().collect();
        let num_arg = |i: usize| -> Result<usize, HilbertError> {
            words.get(i).and_then(|w| w.trim_end_matches(',').parse().ok()).ok_or_else(|| bad(format!("bad justification `{}`", by.trim())))
        };
        let j = match words.first().copied() {
            Some("hyp") => Justification::Assumption(num_arg(1)?),
            Some("mp") => Justification::Mp(num_arg(1)?, num_arg(2)?),
            Some("dne") => Justification::Axiom(Axiom::Dne, Substitution::new()),
            Some(w) if w.starts_with("ax") => {
                let k: u8 = w[2..].parse().map_err(|_| bad(format!("unknown axiom `{w}`")))?;
                Justification::Axiom(Axiom::Ax(k), axiom_match(Axiom::Ax(k), &f).unwrap_or_default())
            }
            _ => return Err(bad(format!("bad justification `{}`", by.trim()))),
        };
        p.steps.push((f, j));
    }
    Ok(p)
}

// ---------------------------------------------------------------- generation

/// Seeded random HJ proof from 1–3 random assumptions: assumption steps,
/// axiom instances, and modus ponens through axioms 1, 8 and 6/7 so that
/// MP steps are frequent.
pub fn random_hilbert_proof(space: &Space, rng: &mut impl Rng, steps: usize) -> HilbertProof {
    let n = rng.gen_range(1..=3);
    let assumptions = (0..n).map(|_| corpus::random_formula(space, rng, 5)).collect();
    let mut p = HilbertProof::new(HilbertSystem::HJ, assumptions);
    p.assume(1);
    let imp = Formula::imp;
    while p.steps.len() < steps {
        let pick = rng.gen_range(0..p.steps.len()) + 1;
        let f = p.steps[pick - 1].0.clone();
        match rng.gen_range(0..6) {
            0 => {
                p.assume(rng.gen_range(1..=n));
            }
            1 => {
                let a = corpus::random_formula(space, rng, 3);
                let b = corpus::random_formula(space, rng, 3);
                p.axiom(Axiom::Ax(3), imp(a.clone(), Formula::or(a, b)));
            }
            2 | 3 => {
                let chi = corpus::random_formula(space, rng, 3);
                let w = p.axiom(Axiom::Ax(1), imp(f.clone(), imp(chi, f)));
                p.mp(pick, w);
            }
            4 => {
                let other = rng.gen_range(0..p.steps.len()) + 1;
                let g = p.steps[other - 1].0.clone();
                let c = p.axiom(Axiom::Ax(8), imp(f.clone(), imp(g.clone(), Formula::and(f, g))));
                let d = p.mp(pick, c);
                p.mp(other, d);
            }
            _ => {
                if let Kind::And(a, b) = f.kind() {
                    let e = if rng.gen_bool(0.5) {
                        p.axiom(Axiom::Ax(6), imp(f.clone(), a.clone()))
                    } else {
                        p.axiom(Axiom::Ax(7), imp(f.clone(), b.clone()))
                    };
                    p.mp(pick, e);
                } else if let Kind::Imp(..) = f.kind() {
                    // apply an implication to an earlier copy of its antecedent
                    let ante = match f.kind() {
                        Kind::Imp(a, _) => a.clone(),
                        _ => unreachable!(),
                    };
                    if let Some(j) = p.steps.iter().position(|(g, _)| *g == ante) {
                        p.mp(j + 1, pick);
                    }
                }
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    /// The five-step proof of `A -> A` with `A = p`.
    pub(crate) fn a_imp_a() -> HilbertProof {
        let text = "system HJ
1. p -> (p -> p) -> p                              by ax1
2. (p -> (p -> p) -> p) -> (p -> p -> p) -> p -> p by ax2
3. (p -> p -> p) -> p -> p                         by mp 1 2
4. p -> p -> p                                     by ax1
5. p -> p                                          by mp 4 3
";
        parse_hilbert(text).unwrap()
    }

    #[test]
    fn identity_proof_checks() {
        let p = a_imp_a();
        assert_eq!(check_hilbert(HilbertSystem::HJ, &p), Ok(()));
        assert_eq!(p.conclusion(), Some(&f("p -> p")));
        let mut bad = p.clone();
        bad.steps[2].1 = Justification::Mp(1, 4);
        assert_eq!(check_hilbert(HilbertSystem::HJ, &bad).unwrap_err().step, 3);
    }

    #[test]
    fn dne_only_in_hk() {
        let mut p = HilbertProof::new(HilbertSystem::HK, vec![]);
        p.axiom(Axiom::Dne, f("~~p -> p"));
        assert!(check_hilbert(HilbertSystem::HJ, &p).is_err());
        assert!(check_hilbert(HilbertSystem::HK, &p).is_ok());
    }

    #[test]
    fn deduction_on_conjunction() {
        let mut p = HilbertProof::new(HilbertSystem::HJ, vec![f("p"), f("q")]);
        let a = p.axiom(Axiom::Ax(8), f("p -> q -> p & q"));
        let b = p.assume(1);
        let c = p.mp(b, a);
        let d = p.assume(2);
        p.mp(d, c);
        assert!(check_hilbert(HilbertSystem::HJ, &p).is_ok());
        let once = deduction_theorem(&p, 1).unwrap();
        assert_eq!(once.assumptions, vec![f("q")]);
        assert_eq!(once.conclusion(), Some(&f("p -> p & q")));
        assert!(check_hilbert(HilbertSystem::HJ, &once).is_ok());
        let twice = deduction_theorem(&once, 1).unwrap();
        assert!(twice.assumptions.is_empty());
        assert_eq!(twice.conclusion(), Some(&f("q -> p -> p & q")));
        assert!(check_hilbert(HilbertSystem::HJ, &twice).is_ok());

        let single = HilbertProof { system: HilbertSystem::HJ, assumptions: vec![f("p")], steps: vec![(f("p"), Justification::Assumption(1))] };
        let id = deduction_theorem(&single, 1).unwrap();
        assert_eq!(id.conclusion(), Some(&f("p -> p")));
        assert!(check_hilbert(HilbertSystem::HJ, &id).is_ok());
    }

    #[test]
    fn contraposition_rechecks() {
        let lemma = contraposition_lemma(&f("p"), &f("q"));
        assert_eq!(lemma.conclusion(), Some(&f("(p -> q) -> ~q -> ~p")));
        assert!(check_hilbert(HilbertSystem::HJ, &lemma).is_ok());

        let mut rng = corpus::rng(3);
        for _ in 0..3 {
            let p = random_hilbert_proof(&Space::atoms(2).with_bottom(), &mut rng, 8);
            let c = contraposition(&p, 1).unwrap();
            assert!(check_hilbert(HilbertSystem::HJ, &c).is_ok(), "{}", render_hilbert(&c));
            assert_eq!(c.conclusion(), Some(&Formula::not(p.assumptions[0].clone())));
            assert_eq!(c.assumptions.last(), Some(&Formula::not(p.conclusion().unwrap().clone())));
        }
    }

    #[test]
    fn text_round_trip() {
        let p = a_imp_a();
        assert_eq!(parse_hilbert(&render_hilbert(&p)).unwrap(), p);
    }
}
