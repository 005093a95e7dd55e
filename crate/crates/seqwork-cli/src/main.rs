//! `seqwork` command line.
//!
//! Exit status: 0 for a positive answer, 1 for a negative one (unprovable,
//! not classified, defects found), 2 for usage or input errors.

use std::io::{IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use seqwork::calculus::{check_terminating, classify_rule, is_focused_axiom, terminate::check_terminating_with, Calculus, WellOrdered};
use seqwork::classic::{self, HilbertSystem, NdSystem};
use seqwork::corpus::{self, Space};
use seqwork::interp::{self, InterpolationProblem};
use seqwork::prover::{self, Logic, ProofSearchResult, SearchBudget};
use seqwork::syntax::{self, render_sequent};
use seqwork::uniform;
use seqwork::{Formula, Measure, Sequent};

#[derive(Parser)]
#[command(name = "seqwork", version, about = "Proof search, interpolation and proof checking for propositional sequent calculi")]
struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula or sequent in a logic (cpc, ipc, ik, ikd, ll).
    Decide {
        #[arg(long)]
        logic: String,
        /// Formula, sequent, or a .fml/.seq file.
        input: String,
    },
    /// Search for a derivation in a calculus.
    Prove {
        /// Builtin calculus name or a .cal file.
        #[arg(long)]
        calculus: String,
        input: String,
        /// Write the derivation to this .drv file.
        #[arg(long)]
        emit: Option<String>,
        #[arg(long)]
        max_depth: Option<u32>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Check a .drv derivation file.
    Check {
        /// Defaults to the calculus named in the file header.
        #[arg(long)]
        calculus: Option<String>,
        file: String,
    },
    /// Craig interpolant of `G ; P => D` (or of an implication `A -> B`).
    Interpolate {
        #[arg(long)]
        calculus: String,
        input: String,
        /// Replace the interpolant by the first equivalent formula up to this weight.
        #[arg(long)]
        minimize: Option<u32>,
    },
    /// Uniform interpolants (forall p / exists p) in CPC or IPC.
    Uinterp {
        #[arg(long)]
        logic: String,
        #[arg(long)]
        atom: String,
        input: String,
        /// Check the defining properties against formulas up to this weight.
        #[arg(long)]
        verify: Option<u32>,
    },
    /// Classify rules (semi-analytic shapes) and axioms (focused shapes).
    Classify {
        #[arg(long)]
        calculus: String,
    },
    /// Check that a calculus is terminating under a measure.
    CheckTerminating {
        #[arg(long)]
        calculus: String,
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Check and normalize a natural deduction (.ndp).
    NormalizeNd {
        file: String,
        #[arg(long, default_value = "nd")]
        system: String,
        #[arg(long, default_value_t = classic::nd::DEFAULT_NORMALIZE_CAP)]
        cap: usize,
        /// Only check; do not normalize.
        #[arg(long)]
        check_only: bool,
    },
    /// Check a Hilbert proof (.hlp); optionally transform it.
    CheckHilbert {
        file: String,
        /// Overrides the system named in the file.
        #[arg(long)]
        system: Option<String>,
        /// Discharge assumption N with the deduction theorem.
        #[arg(long, conflicts_with = "contrapose")]
        deduce: Option<usize>,
        /// Contrapose around assumption N.
        #[arg(long)]
        contrapose: Option<usize>,
        /// Write the transformed proof to this .hlp file.
        #[arg(long)]
        emit: Option<String>,
    },
    /// Enumerate formulas or sequents in canonical order, or sample them.
    GenCorpus {
        #[arg(long)]
        atoms: usize,
        #[arg(long)]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = Kind::Formulas)]
        kind: Kind,
        /// At most one succedent formula.
        #[arg(long)]
        single: bool,
        /// Add `false` as a leaf.
        #[arg(long)]
        bottom: bool,
        /// Add `true` and `false` as leaves.
        #[arg(long)]
        constants: bool,
        /// Sample this many seeded random items instead of enumerating.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Degree,
    Weight,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Formulas,
    Sequents,
}

/// Input or usage problem; exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

type Run = Result<bool, InputError>;

struct Out {
    format: Format,
    color: bool,
}

impl Out {
    fn emit(&self, text: &str, value: serde_json::Value) {
        // a closed pipe (e.g. `| head`) is not an error worth a panic
        let mut w = std::io::stdout().lock();
        let _ = match self.format {
            Format::Text => w.write_all(text.as_bytes()),
            Format::Structured => writeln!(w, "{}", serde_json::to_string_pretty(&value).unwrap()),
        };
    }
    fn verdict(&self, ok: bool, yes: &str, no: &str) -> String {
        let (word, code) = if ok { (yes, "32") } else { (no, "31") };
        if self.color {
            format!("\x1b[{code}m{word}\x1b[0m")
        } else {
            word.to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { format: cli.format, color: std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal() };
    match run(cli.command, &out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

/// The argument itself, or the contents of the file it names.
fn text_arg(arg: &str) -> Result<String, InputError> {
    let p = Path::new(arg);
    let known = ["fml", "seq", "cal", "drv", "ndp", "hlp"];
    if p.extension().and_then(|e| e.to_str()).is_some_and(|e| known.contains(&e)) {
        return std::fs::read_to_string(p).map_err(|e| InputError(format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// First non-empty, non-comment line.
fn one_line(text: &str) -> String {
    text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("").to_string()
}

fn sequent_arg(arg: &str) -> Result<Sequent, InputError> {
    Ok(syntax::parse_sequent_or_formula(&one_line(&text_arg(arg)?))?)
}

fn calculus_arg(arg: &str) -> Result<Calculus, InputError> {
    if seqwork::calculus::canonical_name(arg).is_some() {
        return Ok(prover::builtin(arg).clone());
    }
    if Path::new(arg).exists() {
        return Ok(Calculus::from_text(&std::fs::read_to_string(arg)?)?);
    }
    Err(InputError(format!("unknown calculus `{arg}` (not a builtin name or a .cal file)")))
}

fn logic_arg(arg: &str) -> Result<Logic, InputError> {
    Logic::parse(arg).ok_or_else(|| InputError(format!("unknown logic `{arg}` (cpc, ipc, ik, ikd, ll)")))
}

fn write_file(path: &str, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| InputError(format!("{path}: {e}")))
}

fn run(cmd: Command, out: &Out) -> Run {
    match cmd {
        Command::Decide { logic, input } => {
            let logic = logic_arg(&logic)?;
            let s = sequent_arg(&input)?;
            let ok = prover::decide_sequent(logic, &s);
            out.emit(&format!("{}\n", out.verdict(ok, "provable", "unprovable")), json!({"logic": logic.to_string(), "sequent": s, "provable": ok}));
            Ok(ok)
        }
        Command::Prove { calculus, input, emit, max_depth, max_nodes } => {
            let c = calculus_arg(&calculus)?;
            let s = sequent_arg(&input)?;
            if !c.admits(&s) {
                return Err(InputError(format!("{} is not a sequent of {}", render_sequent(&s), c.name)));
            }
            let budget = SearchBudget { max_depth: max_depth.unwrap_or(u32::MAX), max_nodes: max_nodes.unwrap_or(u64::MAX) };
            let r = prover::prove(&c, &s, budget);
            let (text, status) = match &r {
                ProofSearchResult::Provable(d) => {
                    if let Some(path) = &emit {
                        write_file(path, &syntax::emit_derivation(&c.name, d))?;
                    }
                    (format!("{}\n{}", out.verdict(true, "provable", ""), syntax::render_derivation(d)), "provable")
                }
                ProofSearchResult::Unprovable { exhaustive } => {
                    let note = if *exhaustive { "" } else { " (within the depth bound)" };
                    (format!("{}{note}\n", out.verdict(false, "", "unprovable")), "unprovable")
                }
                ProofSearchResult::BudgetExceeded(st) => (format!("{} after {} nodes\n", out.verdict(false, "", "budget exceeded"), st.nodes), "budget-exceeded"),
            };
            out.emit(&text, json!({"calculus": c.name, "sequent": s, "status": status, "result": r}));
            Ok(r.is_provable())
        }
        Command::Check { calculus, file } => {
            let text = text_arg(&file)?;
            let name = calculus.or_else(|| syntax::derivation_header(&text)).ok_or_else(|| InputError("no calculus given and no `calculus` header in the file".into()))?;
            let c = calculus_arg(&name)?;
            let d = syntax::load_derivation(&c, &text)?;
            let res = prover::check_derivation(&c, &d);
            let defects = res.clone().err().unwrap_or_default();
            let mut t = format!("{}: {}\n", out.verdict(res.is_ok(), "ok", "defects"), render_sequent(&d.conclusion));
            for x in &defects {
                t.push_str(&format!("  {x}\n"));
            }
            out.emit(&t, json!({"calculus": c.name, "conclusion": d.conclusion, "ok": res.is_ok(), "defects": defects}));
            Ok(res.is_ok())
        }
        Command::Interpolate { calculus, input, minimize } => {
            let c = calculus_arg(&calculus)?;
            let line = one_line(&text_arg(&input)?);
            let part = if line.contains("=>") || line.contains('⇒') {
                syntax::parse_partitioned(&line)?
            } else {
                let f = syntax::parse_formula(&line)?;
                match f.kind() {
                    seqwork::Kind::Imp(a, b) => syntax::parse_partitioned(&format!("{a} ; => {b}"))?,
                    _ => return Err(InputError(format!("{f} is neither a partitioned sequent nor an implication"))),
                }
            };
            let s = part.underlying();
            let d = match prover::prove(&c, &s, SearchBudget::UNLIMITED) {
                ProofSearchResult::Provable(d) => d,
                _ => {
                    out.emit(&format!("{}: {}\n", out.verdict(false, "", "unprovable"), render_sequent(&s)), json!({"partition": part, "provable": false}));
                    return Ok(false);
                }
            };
            let prob = InterpolationProblem { calculus: c.name.clone(), derivation: d, partition: part.clone() };
            let mut cert = interp::craig_interpolate(&c, &prob)?;
            let seqwork::multiset::PartitionedSequent::SplitAnt { g, pi, delta } = &part else { unreachable!() };
            if let Some(w) = minimize {
                let small = interp::minimize(&c, &cert.alpha, &interp::common_language(g, pi, delta), w);
                if small != cert.alpha {
                    cert = interp::formula_certificate(&c, small, &part)?;
                }
            }
            let checked = interp::verify_certificate(&c, &cert, &part);
            let mut t = format!("interpolant: {}\n", cert.alpha);
            t.push_str(&format!("{}\n", out.verdict(checked.is_ok(), "certificate verified", "certificate rejected")));
            for n in &cert.notes {
                t.push_str(&format!("note: {n}\n"));
            }
            out.emit(&t, json!({"partition": part, "interpolant": cert.alpha, "verified": checked.is_ok(), "certificate": cert}));
            Ok(checked.is_ok())
        }
        Command::Uinterp { logic, atom, input, verify } => {
            let logic = logic_arg(&logic)?;
            let line = one_line(&text_arg(&input)?);
            let classical = match logic {
                Logic::Cpc => true,
                Logic::Ipc => false,
                other => return Err(InputError(format!("uniform interpolants are available for CPC and IPC, not {other}"))),
            };
            let u = if line.contains("=>") || line.contains('⇒') {
                let s = syntax::parse_sequent(&line)?;
                if classical {
                    uniform::classical_uniform_sequent(&s, &atom)?
                } else {
                    uniform::ipc_uniform(&s, &atom)?
                }
            } else {
                let f = syntax::parse_formula(&line)?;
                if classical {
                    uniform::classical_uniform(&f, &atom)?
                } else {
                    uniform::ipc_uniform_formula(&f, &atom)?
                }
            };
            let report = verify.map(|b| uniform::verify_uniform(uniform::checker_for(classical), &u, b));
            let mut t = format!("forall {atom}: {}\nexists {atom}: {}\n", u.forall_part, u.exists_part);
            if let Some(r) = &report {
                t.push_str(&format!("{} ({} checks, {} formula classes)\n", out.verdict(r.passes(), "verified", "violations"), r.checked, r.psi_classes));
                for v in &r.violations {
                    t.push_str(&format!("  {}: {}\n", v.clause, v.witness));
                }
            }
            out.emit(&t, json!({"logic": logic.to_string(), "interpolant": u, "report": report}));
            Ok(report.is_none_or(|r| r.passes()))
        }
        Command::Classify { calculus } => {
            let c = calculus_arg(&calculus)?;
            let mut rows = Vec::new();
            let mut all = true;
            let mut t = String::new();
            for a in &c.axioms {
                let ok = is_focused_axiom(&a.conclusion, c.mode);
                all &= ok;
                let label = if ok { "focused axiom" } else { "not a focused axiom" };
                t.push_str(&format!("{:<8} {label}\n", a.name));
                rows.push(json!({"name": a.name, "kind": "axiom", "focused": ok, "classification": label}));
            }
            for r in &c.rules {
                let k = classify_rule(r, c.mode);
                all &= k.is_semi_analytic();
                t.push_str(&format!("{:<8} {k}\n", r.name));
                rows.push(json!({"name": r.name, "kind": "rule", "semi_analytic": k.is_semi_analytic(), "classification": k.to_string()}));
            }
            out.emit(&t, json!({"calculus": c.name, "all_classified": all, "rules": rows}));
            Ok(all)
        }
        Command::CheckTerminating { calculus, measure, samples, seed } => {
            let c = calculus_arg(&calculus)?;
            let m = match measure {
                Some(MeasureArg::Degree) => Measure::Degree,
                Some(MeasureArg::Weight) => Measure::Weight,
                None => c.termination_measure.unwrap_or(Measure::Weight),
            };
            let r = if samples == 2000 && seed == 0x5eed { check_terminating(&c, m) } else { check_terminating_with(&c, m, samples, seed) };
            let mut t = format!("{} under {:?}: {}\n", c.name, m, out.verdict(r.passes(), "terminating", "not shown terminating"));
            t.push_str(&format!("  finite: {}\n  instance-finite: {}\n", r.finite, r.instance_finite));
            match &r.well_ordered {
                WellOrdered::Pass => t.push_str("  well-ordered: yes\n"),
                WellOrdered::Fail { rule, instance, clause } => t.push_str(&format!("  well-ordered: no, rule {rule}: {clause}\n    {instance}\n")),
            }
            out.emit(&t, json!({"report": r, "passes": r.passes()}));
            Ok(r.passes())
        }
        Command::NormalizeNd { file, system, cap, check_only } => {
            let sys = NdSystem::parse(&system).ok_or_else(|| InputError(format!("unknown system `{system}` (nd, ndi)")))?;
            let d = classic::parse_nd(&text_arg(&file)?)?;
            if let Err(ds) = classic::check_nd(sys, &d) {
                let mut t = format!("{}\n", out.verdict(false, "", "defects"));
                for x in &ds {
                    t.push_str(&format!("  {x}\n"));
                }
                out.emit(&t, json!({"ok": false, "defects": ds}));
                return Ok(false);
            }
            let detours = classic::find_detours(&d);
            if check_only {
                let t = format!("{}: {} ({} detours)\n", out.verdict(true, "ok", ""), d.conclusion(), detours.len());
                out.emit(&t, json!({"ok": true, "conclusion": d.conclusion(), "proof": d.is_proof(), "detours": detours}));
                return Ok(true);
            }
            match classic::normalize_capped(&d, cap) {
                Ok(n) => {
                    let mut t = format!("# {} reductions, last rule: {:?}\n", n.reductions, classic::last_rule_kind(&n.deduction));
                    for f in &n.flags {
                        t.push_str(&format!("# flag: {f}\n"));
                    }
                    t.push_str(&classic::render_nd(&n.deduction));
                    out.emit(&t, json!({"ok": true, "detours_before": detours, "normalized": n, "text": classic::render_nd(&n.deduction)}));
                    Ok(true)
                }
                Err(e @ classic::NdError::CapExceeded(_)) => {
                    out.emit(&format!("{}: {e}\n", out.verdict(false, "", "cap exceeded")), json!({"ok": false, "error": e.to_string()}));
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckHilbert { file, system, deduce, contrapose, emit } => {
            let mut p = classic::parse_hilbert(&text_arg(&file)?)?;
            if let Some(s) = system {
                p.system = HilbertSystem::parse(&s).ok_or_else(|| InputError(format!("unknown system `{s}` (hj, hk)")))?;
            }
            if let Err(d) = classic::check_hilbert(p.system, &p) {
                out.emit(&format!("{}: {d}\n", out.verdict(false, "", "defect")), json!({"ok": false, "defect": d}));
                return Ok(false);
            }
            let transformed = match (deduce, contrapose) {
                (Some(n), _) => Some(classic::deduction_theorem(&p, n)?),
                (_, Some(n)) => Some(classic::contraposition(&p, n)?),
                _ => None,
            };
            let conclusion: Option<Formula> = p.conclusion().cloned();
            let mut t = format!("{}: {} proves {}\n", out.verdict(true, "ok", ""), p.system, conclusion.as_ref().unwrap());
            let mut v = json!({"ok": true, "system": p.system, "conclusion": conclusion});
            if let Some(q) = &transformed {
                let rechecked = classic::check_hilbert(q.system, q).is_ok();
                let rendered = classic::render_hilbert(q);
                if let Some(path) = &emit {
                    write_file(path, &rendered)?;
                }
                t.push_str(&rendered);
                v["transformed"] = json!({"proof": q, "text": rendered, "rechecked": rechecked});
            }
            out.emit(&t, v);
            Ok(true)
        }
        Command::GenCorpus { atoms, max_weight, kind, single, bottom, constants, random, seed } => {
            if atoms > corpus::ATOM_NAMES.len() {
                return Err(InputError(format!("at most {} atoms", corpus::ATOM_NAMES.len())));
            }
            let mut space = Space::atoms(atoms);
            if bottom {
                space = space.with_bottom();
            }
            if constants {
                space = space.with_constants();
            }
            let items: Vec<String> = match (kind, random) {
                (Kind::Formulas, None) => corpus::formulas(&space, max_weight).iter().map(Formula::to_string).collect(),
                (Kind::Sequents, None) => corpus::sequents(&space, max_weight, single).iter().map(render_sequent).collect(),
                (Kind::Formulas, Some(n)) => {
                    let mut rng = corpus::rng(seed);
                    (0..n).map(|_| corpus::random_formula(&space, &mut rng, max_weight).to_string()).collect()
                }
                (Kind::Sequents, Some(n)) => corpus::random_sequents(&space, seed, n, max_weight, single).iter().map(render_sequent).collect(),
            };
            let t: String = items.iter().map(|s| format!("{s}\n")).collect();
            out.emit(&t, json!(items));
            Ok(true)
        }
    }
}
