//! Browser bindings. Every export takes strings and returns a JSON string;
//! failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use seqwork::calculus::classify::{classify_rule, is_focused_axiom};
use seqwork::interp::{self, InterpolationProblem};
use seqwork::multiset::PartitionedSequent;
use seqwork::prover::{self, Logic};
use seqwork::syntax::{self, render_sequent};
use seqwork::{Calculus, Derivation, Kind, ProofSearchResult, SearchBudget};

/// Node cap for searches started from the page.
pub const NODE_BUDGET: u64 = 2_000_000;

fn budget() -> SearchBudget {
    SearchBudget { max_depth: u32::MAX, max_nodes: NODE_BUDGET }
}

fn tree(d: &Derivation) -> Value {
    json!({
        "sequent": render_sequent(&d.conclusion),
        "rule": d.rule,
        "children": d.children.iter().map(tree).collect::<Vec<_>>(),
    })
}

fn calculus(spec: &str) -> Result<Calculus, String> {
    let spec = spec.trim();
    if seqwork::calculus::canonical_name(spec).is_some() {
        return Ok(prover::builtin(spec).clone());
    }
    if spec.contains('\n') {
        return Calculus::from_text(spec).map_err(|e| e.to_string());
    }
    Err(format!("unknown calculus `{spec}`"))
}

fn outcome(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Decides a formula or sequent in `logic` (cpc, ipc, ik, ikd, ll) and
/// returns the derivation tree when one exists.
pub fn decide_value(logic: &str, input: &str) -> Result<Value, String> {
    let l = Logic::parse(logic).ok_or_else(|| format!("unknown logic `{logic}`"))?;
    let s = syntax::parse_sequent_or_formula(input).map_err(|e| e.to_string())?;
    let c = prover::calculus_for(l);
    if !c.admits(&s) {
        return Err(format!("{} is not a sequent of {}", render_sequent(&s), c.name));
    }
    let r = prover::prove(c, &s, budget());
    let status = match &r {
        ProofSearchResult::Provable(_) => "provable",
        ProofSearchResult::Unprovable { .. } => "unprovable",
        ProofSearchResult::BudgetExceeded(_) => "budget-exceeded",
    };
    Ok(json!({
        "logic": l.to_string(),
        "calculus": c.name,
        "sequent": render_sequent(&s),
        "status": status,
        "tree": r.derivation().map(tree),
    }))
}

/// Craig interpolant for `g ; pi => delta`, or for an implication `a -> b`.
pub fn interpolate_value(calc: &str, input: &str) -> Result<Value, String> {
    let c = calculus(calc)?;
    let part = if input.contains("=>") {
        syntax::parse_partitioned(input).map_err(|e| e.to_string())?
    } else {
        let f = syntax::parse_formula(input).map_err(|e| e.to_string())?;
        match f.kind() {
            Kind::Imp(a, b) => syntax::parse_partitioned(&format!("{a} ; => {b}")).map_err(|e| e.to_string())?,
            _ => return Err(format!("{f} is neither a partitioned sequent nor an implication")),
        }
    };
    let PartitionedSequent::SplitAnt { .. } = &part else {
        return Err("expected a partition of the antecedent".into());
    };
    let s = part.underlying();
    let d = match prover::prove(&c, &s, budget()) {
        ProofSearchResult::Provable(d) => d,
        r => return Ok(json!({ "sequent": render_sequent(&s), "provable": false, "exhausted": !matches!(r, ProofSearchResult::BudgetExceeded(_)) })),
    };
    let prob = InterpolationProblem { calculus: c.name.clone(), derivation: d, partition: part.clone() };
    let cert = interp::craig_interpolate(&c, &prob).map_err(|e| e.to_string())?;
    let verified = interp::verify_certificate(&c, &cert, &part);
    Ok(json!({
        "sequent": render_sequent(&s),
        "provable": true,
        "interpolant": cert.alpha.to_string(),
        "verified": verified.is_ok(),
        "problems": verified.err().unwrap_or_default(),
        "notes": cert.notes,
    }))
}

/// Rule-by-rule classification of a builtin calculus or calculus source text.
pub fn classify_value(calc: &str) -> Result<Value, String> {
    let c = calculus(calc)?;
    let mut rows = Vec::new();
    let mut all = true;
    for a in &c.axioms {
        let ok = is_focused_axiom(&a.conclusion, c.mode);
        all &= ok;
        rows.push(json!({ "name": a.name, "kind": "axiom", "ok": ok, "classification": if ok { "focused axiom" } else { "not a focused axiom" } }));
    }
    for r in &c.rules {
        let k = classify_rule(r, c.mode);
        all &= k.is_semi_analytic();
        rows.push(json!({ "name": r.name, "kind": "rule", "ok": k.is_semi_analytic(), "classification": k.to_string() }));
    }
    Ok(json!({ "calculus": c.name, "all_classified": all, "rules": rows }))
}

#[wasm_bindgen]
pub fn decide(logic: &str, input: &str) -> String {
    outcome(decide_value(logic, input))
}

#[wasm_bindgen]
pub fn interpolate(calculus: &str, input: &str) -> String {
    outcome(interpolate_value(calculus, input))
}

#[wasm_bindgen]
pub fn classify(calculus: &str) -> String {
    outcome(classify_value(calculus))
}

/// Source text of a builtin calculus, for the page's editor.
#[wasm_bindgen]
pub fn calculus_source(name: &str) -> String {
    seqwork::calculus::builtin_source(name).unwrap_or_default()
}
