//! Surface syntax: formulas, sequents, the `.cal` rule DSL and `.drv` files.
//!
//! Formulas use `~ & | -> [] O true false`; `->` associates to the right,
//! `&` and `|` to the left, prefix operators bind tightest.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::pattern::{Item, MetaSequent, Pat, VarKind, Vars};
use crate::calculus::{Calculus, Mode};
use crate::formula::{Formula, Kind};
use crate::multiset::{FMultiset, Sequent};
use crate::prover::Derivation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unknown rule name `{0}`")]
    UnknownRuleName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    AtomVar(String),
    Upper(String),
    True,
    False,
    Not,
    BoxOp,
    Circle,
    And,
    Or,
    Imp,
    LParen,
    RParen,
    Comma,
    Seq,
}

fn err(message: impl Into<String>, start: usize, end: usize) -> ParseError {
    ParseError { message: message.into(), span: SourceSpan { start, end } }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        let w = c.len_utf8();
        let simple = |t: Tok, n: usize, out: &mut Vec<(Tok, usize, usize)>| {
            out.push((t, start, start + n));
            start + n
        };
        i = match c {
            ' ' | '\t' | '\n' | '\r' => i + w,
            '(' => simple(Tok::LParen, 1, &mut out),
            ')' => simple(Tok::RParen, 1, &mut out),
            ',' => simple(Tok::Comma, 1, &mut out),
            '&' => simple(Tok::And, 1, &mut out),
            '|' => simple(Tok::Or, 1, &mut out),
            '~' => simple(Tok::Not, 1, &mut out),
            '¬' => simple(Tok::Not, w, &mut out),
            '∧' => simple(Tok::And, w, &mut out),
            '∨' => simple(Tok::Or, w, &mut out),
            '→' => simple(Tok::Imp, w, &mut out),
            '⊤' => simple(Tok::True, w, &mut out),
            '⊥' => simple(Tok::False, w, &mut out),
            '□' => simple(Tok::BoxOp, w, &mut out),
            '○' => simple(Tok::Circle, w, &mut out),
            '⇒' => simple(Tok::Seq, w, &mut out),
            '-' if bytes.get(i + 1) == Some(&b'>') => simple(Tok::Imp, 2, &mut out),
            '=' if bytes.get(i + 1) == Some(&b'>') => simple(Tok::Seq, 2, &mut out),
            '[' if bytes.get(i + 1) == Some(&b']') => simple(Tok::BoxOp, 2, &mut out),
            'O' => simple(Tok::Circle, 1, &mut out),
            'a'..='z' => {
                let mut j = i + 1;
                while j < text.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &text[i..j];
                if j < text.len() && bytes[j] == b'?' {
                    out.push((Tok::AtomVar(word.to_string()), start, j + 1));
                    j + 1
                } else {
                    let t = match word {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word.to_string()),
                    };
                    out.push((t, start, j));
                    j
                }
            }
            'A'..='Z' => {
                let mut j = i + 1;
                while j < text.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'\'') {
                    j += 1;
                }
                out.push((Tok::Upper(text[i..j].to_string()), start, j));
                j
            }
            _ => return Err(err(format!("unexpected character `{c}`"), start, start + w)),
        };
    }
    Ok(out)
}

/// Multiset variable names: `G`, `P`, `D`, `S` with optional digits or primes.
pub(crate) fn is_multiset_var(name: &str) -> bool {
    matches!(name.as_bytes().first(), Some(b'G' | b'P' | b'D' | b'S'))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    len: usize,
    vars: Option<&'a mut Vars>,
}

/// Formula or pattern node under construction.
enum Node {
    F(Formula),
    P(Pat),
}

impl Node {
    fn into_pat(self) -> Pat {
        match self {
            Node::P(p) => p,
            Node::F(f) => formula_to_pat(&f),
        }
    }
}

pub(crate) fn formula_to_pat(f: &Formula) -> Pat {
    match f.kind() {
        Kind::Atom(n) => Pat::Atom(n.clone()),
        Kind::Top => Pat::Top,
        Kind::Bot => Pat::Bot,
        Kind::And(a, b) => Pat::And(Box::new(formula_to_pat(a)), Box::new(formula_to_pat(b))),
        Kind::Or(a, b) => Pat::Or(Box::new(formula_to_pat(a)), Box::new(formula_to_pat(b))),
        Kind::Imp(a, b) => Pat::Imp(Box::new(formula_to_pat(a)), Box::new(formula_to_pat(b))),
        Kind::Box(a) => Pat::Box(Box::new(formula_to_pat(a))),
        Kind::Circle(a) => Pat::Circle(Box::new(formula_to_pat(a))),
    }
}

fn bin(op: &Tok, a: Node, b: Node) -> Node {
    match (a, b) {
        (Node::F(a), Node::F(b)) => Node::F(match op {
            Tok::And => Formula::and(a, b),
            Tok::Or => Formula::or(a, b),
            _ => Formula::imp(a, b),
        }),
        (a, b) => {
            let (a, b) = (Box::new(a.into_pat()), Box::new(b.into_pat()));
            Node::P(match op {
                Tok::And => Pat::And(a, b),
                Tok::Or => Pat::Or(a, b),
                _ => Pat::Imp(a, b),
            })
        }
    }
}

fn unary(op: &Tok, a: Node) -> Node {
    match a {
        Node::F(a) => Node::F(match op {
            Tok::Not => Formula::not(a),
            Tok::BoxOp => Formula::boxed(a),
            _ => Formula::circle(a),
        }),
        Node::P(a) => Node::P(match op {
            Tok::Not => Pat::Imp(Box::new(a), Box::new(Pat::Bot)),
            Tok::BoxOp => Pat::Box(Box::new(a)),
            _ => Pat::Circle(Box::new(a)),
        }),
    }
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: Option<&'a mut Vars>) -> Result<Parser<'a>, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, len: text.len(), vars })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn span_here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(&(_, s, e)) => (s, e),
            None => (self.len, self.len),
        }
    }

    fn error_here(&self, msg: &str) -> ParseError {
        let (s, e) = self.span_here();
        match self.peek() {
            Some(t) => err(format!("{msg}, found {t:?}"), s, e),
            None => err(format!("{msg}, found end of input"), s, e),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn imp(&mut self) -> Result<Node, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            let rhs = self.imp()?;
            return Ok(bin(&Tok::Imp, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = bin(&Tok::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = bin(&Tok::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        let (start, end) = self.span_here();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error_here("expected a formula")),
        };
        self.pos += 1;
        match tok {
            Tok::Not | Tok::BoxOp | Tok::Circle => {
                let inner = self.unary()?;
                Ok(unary(&tok, inner))
            }
            Tok::True => Ok(Node::F(Formula::top())),
            Tok::False => Ok(Node::F(Formula::bot())),
            Tok::Ident(n) => Ok(Node::F(Formula::atom(&n))),
            Tok::LParen => {
                let inner = self.imp()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error_here("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::AtomVar(n) => match self.vars.as_deref_mut() {
                Some(v) => v.intern(&n, VarKind::Atom).map(|i| Node::P(Pat::AtomMeta(i))).map_err(|m| err(m, start, end)),
                None => Err(err("metavariables are not allowed in formulas", start, end)),
            },
            Tok::Upper(n) => match self.vars.as_deref_mut() {
                Some(_) if is_multiset_var(&n) => Err(err(format!("multiset variable {n} inside a formula"), start, end)),
                Some(v) => v.intern(&n, VarKind::Formula).map(|i| Node::P(Pat::Meta(i))).map_err(|m| err(m, start, end)),
                None => Err(err("metavariables are not allowed in formulas", start, end)),
            },
            _ => {
                self.pos -= 1;
                Err(self.error_here("expected a formula"))
            }
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let (start, end) = self.span_here();
        match (self.peek().cloned(), self.toks.get(self.pos + 1).map(|t| t.0.clone())) {
            (Some(Tok::Upper(n)), next) if is_multiset_var(&n) && matches!(next, None | Some(Tok::Comma) | Some(Tok::Seq)) => {
                self.pos += 1;
                let v = self.vars.as_deref_mut().unwrap();
                v.intern(&n, VarKind::Multiset).map(Item::Ctx).map_err(|m| err(m, start, end))
            }
            (Some(Tok::BoxOp), Some(Tok::Upper(n))) if is_multiset_var(&n) => {
                let after = self.toks.get(self.pos + 2).map(|t| t.0.clone());
                if matches!(after, None | Some(Tok::Comma) | Some(Tok::Seq)) {
                    self.pos += 2;
                    let v = self.vars.as_deref_mut().unwrap();
                    return v.intern(&n, VarKind::Multiset).map(Item::BoxCtx).map_err(|m| err(m, start, end));
                }
                Ok(Item::F(self.imp()?.into_pat()))
            }
            _ => Ok(Item::F(self.imp()?.into_pat())),
        }
    }

    fn list<T>(&mut self, mut one: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.at_end() || self.peek() == Some(&Tok::Seq) {
            return Ok(out);
        }
        loop {
            out.push(one(self)?);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, None)?;
    let f = p.imp()?;
    if !p.at_end() {
        return Err(p.error_here("unexpected trailing input"));
    }
    match f {
        Node::F(f) => Ok(f),
        Node::P(_) => unreachable!(),
    }
}

fn formula_of(n: Node) -> Formula {
    match n {
        Node::F(f) => f,
        Node::P(_) => unreachable!(),
    }
}

/// Comma separated formulas, possibly empty.
pub fn parse_formula_list(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut p = Parser::new(text, None)?;
    let v = p.list(|p| p.imp().map(formula_of))?;
    if !p.at_end() {
        return Err(p.error_here("expected `,` or end of input"));
    }
    Ok(v)
}

/// `phi1, phi2 => psi1, psi2`; either side may be empty.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text, None)?;
    let ant = p.list(|p| p.imp().map(formula_of))?;
    if p.peek() != Some(&Tok::Seq) {
        return Err(p.error_here("expected `=>`"));
    }
    p.pos += 1;
    let suc = p.list(|p| p.imp().map(formula_of))?;
    if !p.at_end() {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(Sequent::from_vecs(ant, suc))
}

/// A sequent or, failing that, a single formula `f` read as `=> f`.
pub fn parse_sequent_or_formula(text: &str) -> Result<Sequent, ParseError> {
    if text.contains("=>") || text.contains('⇒') {
        parse_sequent(text)
    } else {
        parse_formula(text).map(Sequent::goal)
    }
}

/// `g ; pi => delta`, the antecedent split for interpolation. Without a `;`
/// the whole antecedent goes to `g`.
pub fn parse_partitioned(text: &str) -> Result<crate::multiset::PartitionedSequent, ParseError> {
    let (g, rest) = match text.find(';') {
        Some(i) => (&text[..i], &text[i + 1..]),
        None => ("", text),
    };
    let shift = |e: ParseError, by: usize| err(e.message, e.span.start + by, e.span.end + by);
    let g = parse_formula_list(g).map_err(|e| shift(e, 0))?;
    let off = text.len() - rest.len();
    let s = parse_sequent(rest).map_err(|e| shift(e, off))?;
    let (g, pi) = if text.contains(';') { (g, s.ant) } else { (s.ant.into_vec(), FMultiset::new()) };
    Ok(crate::multiset::PartitionedSequent::split(FMultiset::from_vec(g), pi, s.suc))
}

/// Meta-sequent of the rule DSL; metavariables are registered in `vars`.
pub fn parse_meta_sequent(text: &str, vars: &mut Vars) -> Result<MetaSequent, ParseError> {
    let mut p = Parser::new(text, Some(vars))?;
    let ant = p.list(|p| p.item())?;
    if p.peek() != Some(&Tok::Seq) {
        return Err(p.error_here("expected `=>`"));
    }
    p.pos += 1;
    let suc = p.list(|p| p.item())?;
    if !p.at_end() {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(MetaSequent { ant, suc })
}

/// Pattern formula of the rule DSL.
pub fn parse_pattern(text: &str, vars: &mut Vars) -> Result<Pat, ParseError> {
    let mut p = Parser::new(text, Some(vars))?;
    let n = p.imp()?;
    if !p.at_end() {
        return Err(p.error_here("unexpected trailing input"));
    }
    Ok(n.into_pat())
}

// ---------------------------------------------------------------- rendering

fn prec(f: &Formula) -> u8 {
    match f.kind() {
        Kind::Imp(_, b) if b.is_bot() => 4,
        Kind::Imp(..) => 1,
        Kind::Or(..) => 2,
        Kind::And(..) => 3,
        _ => 4,
    }
}

fn render_into(f: &Formula, need: u8, out: &mut String) {
    let paren = prec(f) < need;
    if paren {
        out.push('(');
    }
    match f.kind() {
        Kind::Atom(n) => out.push_str(n),
        Kind::Top => out.push_str("true"),
        Kind::Bot => out.push_str("false"),
        Kind::Imp(a, b) if b.is_bot() => {
            out.push('~');
            render_into(a, 4, out);
        }
        Kind::Imp(a, b) => {
            render_into(a, 2, out);
            out.push_str(" -> ");
            render_into(b, 1, out);
        }
        Kind::Or(a, b) => {
            render_into(a, 2, out);
            out.push_str(" | ");
            render_into(b, 3, out);
        }
        Kind::And(a, b) => {
            render_into(a, 3, out);
            out.push_str(" & ");
            render_into(b, 4, out);
        }
        Kind::Box(a) => {
            out.push_str("[]");
            render_into(a, 4, out);
        }
        Kind::Circle(a) => {
            out.push('O');
            render_into(a, 4, out);
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    render_into(f, 0, &mut s);
    s
}

pub fn render_list(m: &FMultiset) -> String {
    m.iter().map(render_formula).collect::<Vec<_>>().join(", ")
}

pub fn render_sequent(s: &Sequent) -> String {
    match (s.ant.is_empty(), s.suc.is_empty()) {
        (true, true) => "=>".to_string(),
        (true, false) => format!("=> {}", render_list(&s.suc)),
        (false, true) => format!("{} =>", render_list(&s.ant)),
        (false, false) => format!("{} => {}", render_list(&s.ant), render_list(&s.suc)),
    }
}

fn pat_prec(p: &Pat) -> u8 {
    match p {
        Pat::Imp(_, b) if **b == Pat::Bot => 4,
        Pat::Imp(..) => 1,
        Pat::Or(..) => 2,
        Pat::And(..) => 3,
        _ => 4,
    }
}

fn render_pat_into(p: &Pat, vars: &Vars, need: u8, out: &mut String) {
    let paren = pat_prec(p) < need;
    if paren {
        out.push('(');
    }
    match p {
        Pat::Atom(n) => out.push_str(n),
        Pat::Top => out.push_str("true"),
        Pat::Bot => out.push_str("false"),
        Pat::Meta(i) => out.push_str(&vars.names[*i]),
        Pat::AtomMeta(i) => {
            out.push_str(&vars.names[*i]);
            out.push('?');
        }
        Pat::Imp(a, b) if **b == Pat::Bot => {
            out.push('~');
            render_pat_into(a, vars, 4, out);
        }
        Pat::Imp(a, b) => {
            render_pat_into(a, vars, 2, out);
            out.push_str(" -> ");
            render_pat_into(b, vars, 1, out);
        }
        Pat::Or(a, b) => {
            render_pat_into(a, vars, 2, out);
            out.push_str(" | ");
            render_pat_into(b, vars, 3, out);
        }
        Pat::And(a, b) => {
            render_pat_into(a, vars, 3, out);
            out.push_str(" & ");
            render_pat_into(b, vars, 4, out);
        }
        Pat::Box(a) => {
            out.push_str("[]");
            render_pat_into(a, vars, 4, out);
        }
        Pat::Circle(a) => {
            out.push('O');
            render_pat_into(a, vars, 4, out);
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn render_pattern(p: &Pat, vars: &Vars) -> String {
    let mut s = String::new();
    render_pat_into(p, vars, 0, &mut s);
    s
}

fn render_items(items: &[Item], vars: &Vars) -> String {
    items
        .iter()
        .map(|it| match it {
            Item::F(p) => render_pattern(p, vars),
            Item::Ctx(i) => vars.names[*i].clone(),
            Item::BoxCtx(i) => format!("[]{}", vars.names[*i]),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_meta_sequent(m: &MetaSequent, vars: &Vars) -> String {
    match (m.ant.is_empty(), m.suc.is_empty()) {
        (true, true) => "=>".to_string(),
        (true, false) => format!("=> {}", render_items(&m.suc, vars)),
        (false, true) => format!("{} =>", render_items(&m.ant, vars)),
        (false, false) => format!("{} => {}", render_items(&m.ant, vars), render_items(&m.suc, vars)),
    }
}

/// One-line DSL form of an axiom or rule, parseable by [`parse_calculus`].
pub fn render_rule(r: &crate::calculus::RuleSchema) -> String {
    let concl = render_meta_sequent(&r.conclusion, &r.vars);
    if r.is_axiom() {
        format!("axiom {}: {}", r.name, concl)
    } else {
        let prems: Vec<String> = r.premises.iter().map(|p| render_meta_sequent(p, &r.vars)).collect();
        format!("rule {}: {} / {}", r.name, prems.join(" ; "), concl)
    }
}

/// Indented tree, one node per line: `RULE : sequent`.
pub fn render_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    fn go(d: &Derivation, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(d.rule_name());
        out.push_str(" : ");
        out.push_str(&render_sequent(&d.conclusion));
        out.push('\n');
        for c in &d.children {
            go(c, depth + 1, out);
        }
    }
    go(d, 0, &mut out);
    out
}

pub struct Rendered<'a, T: ?Sized>(pub &'a T);

impl fmt::Display for Rendered<'_, Derivation> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_derivation(self.0))
    }
}

// ---------------------------------------------------------------- .cal files

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleDoc {
    pub name: String,
    pub premises: Vec<String>,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalculusDoc {
    pub name: String,
    pub sequent_mode: Mode,
    pub measure: Option<crate::formula::Measure>,
    /// `(name, meta-sequent text)`
    pub axioms: Vec<(String, String)>,
    pub rules: Vec<RuleDoc>,
}

/// Parse the rule DSL:
///
/// ```text
/// calculus G3ip
/// mode single
/// measure weight
/// axiom At: G, p? => p?
/// rule R&: G => A ; G => B / G => A & B
/// ```
///
/// Meta-sequents are checked for syntax here; semantic checks happen when the
/// document is compiled into a [`Calculus`].
pub fn parse_calculus(text: &str) -> Result<CalculusDoc, SyntaxError> {
    let mut doc = CalculusDoc { name: String::new(), sequent_mode: Mode::Multi, measure: None, axioms: Vec::new(), rules: Vec::new() };
    let mut names = std::collections::BTreeSet::new();
    let mut offset = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line_start = offset;
        offset += raw.len() + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let lead = raw.len() - raw.trim_start().len();
        let format_err = |m: &str| SyntaxError::Format { line: lineno + 1, message: m.to_string() };
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "calculus" => doc.name = rest.to_string(),
            "mode" => {
                doc.sequent_mode = match rest {
                    "single" => Mode::Single,
                    "multi" => Mode::Multi,
                    _ => return Err(format_err("mode must be `single` or `multi`")),
                }
            }
            "measure" => {
                doc.measure = Some(match rest {
                    "weight" => crate::formula::Measure::Weight,
                    "degree" => crate::formula::Measure::Degree,
                    _ => return Err(format_err("measure must be `weight` or `degree`")),
                })
            }
            "axiom" | "rule" => {
                let (name, body) = rest.split_once(':').ok_or_else(|| format_err("expected `NAME: ...`"))?;
                let name = name.trim().to_string();
                if name.is_empty() {
                    return Err(format_err("empty rule name"));
                }
                if !names.insert(name.clone()) {
                    return Err(SyntaxError::DuplicateName(name));
                }
                let body_off = line_start + lead + line.find(':').unwrap() + 1;
                let mut vars = Vars::default();
                let shift = |e: ParseError, base: usize| ParseError {
                    message: e.message,
                    span: SourceSpan { start: e.span.start + base, end: e.span.end + base },
                };
                if kw == "axiom" {
                    parse_meta_sequent(body, &mut vars).map_err(|e| shift(e, body_off))?;
                    doc.axioms.push((name, body.trim().to_string()));
                } else {
                    let (prems, concl) = body.rsplit_once('/').ok_or_else(|| format_err("expected `premises / conclusion`"))?;
                    let mut premises = Vec::new();
                    let mut base = body_off;
                    for pt in prems.split(';') {
                        if !pt.trim().is_empty() {
                            parse_meta_sequent(pt, &mut vars).map_err(|e| shift(e, base))?;
                            premises.push(pt.trim().to_string());
                        }
                        base += pt.len() + 1;
                    }
                    parse_meta_sequent(concl, &mut vars).map_err(|e| shift(e, body_off + prems.len() + 1))?;
                    doc.rules.push(RuleDoc { name, premises, conclusion: concl.trim().to_string() });
                }
            }
            _ => return Err(format_err(&format!("unknown keyword `{kw}`"))),
        }
    }
    if doc.name.is_empty() {
        return Err(SyntaxError::Format { line: 1, message: "missing `calculus NAME` line".into() });
    }
    Ok(doc)
}

// ---------------------------------------------------------------- .drv files

/// Derivation file: a `calculus NAME` header, then one node per line, two
/// spaces of indentation per level, `RULE : sequent`.
pub fn emit_derivation(calculus: &str, d: &Derivation) -> String {
    format!("calculus {}\n{}", calculus, render_derivation(d))
}

/// Calculus name declared in a derivation file header, if any.
pub fn derivation_header(text: &str) -> Option<String> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .and_then(|l| l.strip_prefix("calculus "))
        .map(|s| s.trim().to_string())
}

/// Read a derivation file against `calc`. Rule names must exist in `calc`;
/// rule instances are reconstructed by matching, nodes that fail to match are
/// kept as-is so that [`crate::prover::check_derivation`] can report them.
pub fn load_derivation(calc: &Calculus, text: &str) -> Result<Derivation, SyntaxError> {
    let mut nodes: Vec<(usize, usize, String, Sequent)> = Vec::new();
    let mut seen_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        if !seen_header && raw.trim_start().starts_with("calculus ") {
            seen_header = true;
            continue;
        }
        seen_header = true;
        let indent = raw.len() - raw.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(SyntaxError::Format { line: lineno + 1, message: "odd indentation".into() });
        }
        let body = raw.trim();
        let (rule, seq) = body
            .split_once(" : ")
            .ok_or_else(|| SyntaxError::Format { line: lineno + 1, message: "expected `RULE : sequent`".into() })?;
        let rule = rule.trim().to_string();
        if calc.schema(&rule).is_none() {
            return Err(SyntaxError::UnknownRuleName(rule));
        }
        let s = parse_sequent(seq.trim()).map_err(|e| SyntaxError::Format { line: lineno + 1, message: e.to_string() })?;
        nodes.push((lineno + 1, indent / 2, rule, s));
    }
    if nodes.is_empty() {
        return Err(SyntaxError::Format { line: 1, message: "empty derivation".into() });
    }
    let mut pos = 0;
    let d = build_node(calc, &nodes, &mut pos, 0)?;
    if pos != nodes.len() {
        return Err(SyntaxError::Format { line: nodes[pos].0, message: "more than one root".into() });
    }
    Ok(d)
}

fn build_node(calc: &Calculus, nodes: &[(usize, usize, String, Sequent)], pos: &mut usize, depth: usize) -> Result<Derivation, SyntaxError> {
    let (line, d, rule, seq) = &nodes[*pos];
    if *d != depth {
        return Err(SyntaxError::Format { line: *line, message: format!("expected indentation level {depth}") });
    }
    *pos += 1;
    let mut children = Vec::new();
    while *pos < nodes.len() && nodes[*pos].1 > depth {
        children.push(build_node(calc, nodes, pos, depth + 1)?);
    }
    Ok(Derivation::reconstruct(calc, rule, seq.clone(), children))
}

#[allow(dead_code)]
fn _arc_str(s: &str) -> Arc<str> {
    Arc::from(s)
}
